//! Partition functions `Σ N(s)^{-β}` over `Γ\S` for the semigroups
//! `S_p`, `S_F` and `M2+(Z)`, in closed form and by direct summation.

use crate::arith::{check_prime, check_prime_set, psi_table, smooth_numbers};
use crate::error::{param, Result};
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemigroupSpec {
    /// Integral matrices whose determinant is a power of `p`.
    Local(u64),
    /// Integral matrices whose determinant has prime factors in the set.
    FiniteSet(Vec<u64>),
    /// All of M2+(Z).
    Full,
}

impl SemigroupSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SemigroupSpec::Local(p) => check_prime(*p).map(|_| ()),
            SemigroupSpec::FiniteSet(ps) => check_prime_set(ps).map(|_| ()),
            SemigroupSpec::Full => Ok(()),
        }
    }

    fn primes(&self) -> Option<Vec<u64>> {
        match self {
            SemigroupSpec::Local(p) => Some(vec![*p]),
            SemigroupSpec::FiniteSet(ps) => Some(ps.clone()),
            SemigroupSpec::Full => None,
        }
    }
}

/// `(1 - p^{-β})^{-1} (1 - p^{1-β})^{-1}`, or `+inf` for `β <= 1`.
pub fn zeta_local(p: u64, beta: f64) -> Result<f64> {
    check_prime(p)?;
    if beta.is_nan() {
        return param("beta is NaN");
    }
    if beta <= 1.0 {
        return Ok(f64::INFINITY);
    }
    let p = p as f64;
    Ok(1.0 / ((1.0 - p.powf(-beta)) * (1.0 - p.powf(1.0 - beta))))
}

pub fn zeta_finite_set(primes: &[u64], beta: f64) -> Result<f64> {
    if !(beta > 1.0) {
        return param(format!("partition function over S_F needs beta > 1, got {beta}"));
    }
    let ps = check_prime_set(primes)?;
    ps.iter().try_fold(1.0, |acc, &p| Ok(acc * zeta_local(p, beta)?))
}

/// Riemann zeta for real `s > 1`, via the alternating series with
/// Borwein's acceleration.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return param(format!("riemann_zeta needs s > 1, got {s}"));
    }
    const N: usize = 40;
    let mut d = Vec::with_capacity(N + 1);
    let (mut term, mut acc) = (1.0f64, 1.0f64);
    d.push(acc);
    let nf = N as f64;
    for i in 1..=N {
        let i_f = i as f64;
        term *= 4.0 * (nf + i_f - 1.0) * (nf - i_f + 1.0) / ((2.0 * i_f) * (2.0 * i_f - 1.0));
        acc += term;
        d.push(acc);
    }
    let dn = d[N];
    let mut eta = 0.0;
    for k in (0..N).rev() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        eta += sign * (dn - d[k]) / ((k + 1) as f64).powf(s);
    }
    eta /= dn;
    Ok(eta / (1.0 - 2f64.powf(1.0 - s)))
}

/// `ζ(β)·ζ(β-1)` for `β > 2`.
pub fn zeta_global(beta: f64) -> Result<f64> {
    if !(beta > 2.0) {
        return param(format!("global partition function needs beta > 2, got {beta}"));
    }
    Ok(riemann_zeta(beta)? * riemann_zeta(beta - 1.0)?)
}

pub fn closed_form(spec: &SemigroupSpec, beta: f64) -> Result<f64> {
    match spec {
        SemigroupSpec::Local(p) => zeta_local(*p, beta),
        SemigroupSpec::FiniteSet(ps) => zeta_finite_set(ps, beta),
        SemigroupSpec::Full => zeta_global(beta),
    }
}

const BLOCK: usize = 1024;

/// Pairwise sum with a fixed tree shape, so results do not depend on how
/// the work was scheduled.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len().div_ceil(2 * BLOCK) * BLOCK;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `Σ det^{-β}·R` over double cosets `diag(a, d)`, `a | d`, `a·d <= bound`,
/// restricted to the semigroup.
pub fn zeta_bruteforce(spec: &SemigroupSpec, beta: f64, det_bound: u64) -> Result<f64> {
    spec.validate()?;
    if det_bound == 0 {
        return param("det_bound must be >= 1");
    }
    if beta.is_nan() {
        return param("beta is NaN");
    }
    let terms: Vec<f64> = match spec.primes() {
        Some(ps) => {
            // Cosets (a, a·n): a and n both F-smooth.
            let smooth = smooth_numbers(&ps, det_bound);
            let psi: Vec<f64> = smooth
                .iter()
                .map(|&n| {
                    ps.iter()
                        .filter(|&&p| n % p == 0)
                        .fold(n as f64, |acc, &p| acc * (1.0 + 1.0 / p as f64))
                })
                .collect();
            let per_a: Vec<f64> = smooth
                .par_iter()
                .map(|&a| {
                    let Some(a2) = a.checked_mul(a).filter(|&a2| a2 <= det_bound) else {
                        return 0.0;
                    };
                    let lim = det_bound / a2;
                    let xs: Vec<f64> = smooth
                        .iter()
                        .zip(&psi)
                        .take_while(|(&n, _)| n <= lim)
                        .map(|(&n, &r)| ((a2 * n) as f64).powf(-beta) * r)
                        .collect();
                    pairwise_sum(&xs)
                })
                .collect();
            per_a
        }
        None => {
            let psi = psi_table(det_bound as usize);
            let a_max = (det_bound as f64).sqrt() as u64 + 1;
            (1..=a_max)
                .into_par_iter()
                .map(|a| {
                    let a2 = a * a;
                    if a2 > det_bound {
                        return 0.0;
                    }
                    let xs: Vec<f64> = (1..=det_bound / a2)
                        .map(|n| ((a2 * n) as f64).powf(-beta) * psi[n as usize] as f64)
                        .collect();
                    pairwise_sum(&xs)
                })
                .collect()
        }
    };
    Ok(pairwise_sum(&terms))
}

/// Upper bound for `Σ_{j >= j0} p^{-βj} Σ_{a <= j/2} R(diag(p^a, p^{j-a}))`,
/// the part of the local partition function with `v_p(det) >= j0`.
pub fn local_tail_bound(p: u64, beta: f64, j0: u64) -> Result<f64> {
    check_prime(p)?;
    if !(beta > 1.0) {
        return param(format!("tail bound needs beta > 1, got {beta}"));
    }
    let pf = p as f64;
    let q = pf.powf(1.0 - beta);
    Ok(pf / (pf - 1.0) * q.powf(j0 as f64) / (1.0 - q))
}
