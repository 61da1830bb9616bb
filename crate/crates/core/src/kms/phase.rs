//! Masses of `Γ\Y_F` and the dichotomy at `β = 2`.

use crate::arith::{check_prime_set, primes_up_to};
use crate::error::{param, Result};
use crate::zeta::zeta_global;
use rayon::prelude::*;
use serde::Serialize;

/// `Π_{p ∈ F} (1 - p^{-β})(1 - p^{1-β})`.
pub fn mass_yf(beta: f64, primes: &[u64]) -> Result<f64> {
    if !(beta > 1.0) {
        return param(format!("mass of Y_F needs beta > 1, got {beta}"));
    }
    let ps = check_prime_set(primes)?;
    Ok(product_over(beta, &ps))
}

fn product_over(beta: f64, primes: &[u64]) -> f64 {
    primes.iter().fold(1.0, |acc, &p| {
        let p = p as f64;
        acc * (1.0 - p.powf(-beta)) * (1.0 - p.powf(1.0 - beta))
    })
}

/// Limit of [`mass_yf`] as `F` exhausts all primes: `1/(ζ(β)ζ(β-1))` for
/// `β > 2`, zero on `(1, 2]`.
pub fn mass_global(beta: f64) -> Result<f64> {
    if !(beta > 1.0) {
        return param(format!("need beta > 1, got {beta}"));
    }
    if beta <= 2.0 {
        return Ok(0.0);
    }
    Ok(1.0 / zeta_global(beta)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseRow {
    pub beta: f64,
    pub prime_cutoff: u64,
    pub mass_yf: f64,
}

/// `mass_yf(β, primes <= cutoff)` on the grid, sorted by `(β, cutoff)`.
pub fn phase_scan(betas: &[f64], cutoffs: &[u64]) -> Result<Vec<PhaseRow>> {
    if let Some(b) = betas.iter().find(|b| !(**b > 1.0)) {
        return param(format!("grid must lie in (1, inf), got {b}"));
    }
    let mut betas = betas.to_vec();
    betas.sort_by(f64::total_cmp);
    let mut cutoffs = cutoffs.to_vec();
    cutoffs.sort_unstable();
    let primes = primes_up_to(cutoffs.last().copied().unwrap_or(0));
    let grid: Vec<(f64, u64)> = betas
        .iter()
        .flat_map(|&b| cutoffs.iter().map(move |&c| (b, c)))
        .collect();
    Ok(grid
        .par_iter()
        .map(|&(beta, cutoff)| {
            let n = primes.partition_point(|&p| p <= cutoff);
            PhaseRow {
                beta,
                prime_cutoff: cutoff,
                mass_yf: product_over(beta, &primes[..n]),
            }
        })
        .collect())
}

pub fn phase_csv(rows: &[PhaseRow]) -> String {
    let mut s = String::from("beta,prime_cutoff,mass_yf\n");
    for r in rows {
        s.push_str(&format!("{},{},{}\n", r.beta, r.prime_cutoff, r.mass_yf));
    }
    s
}
