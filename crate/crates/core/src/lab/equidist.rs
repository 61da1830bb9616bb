//! Equidistribution of Hecke points against the normalized hyperbolic
//! measure `(3/π) dx dy / y²` on the standard fundamental domain.

use crate::action::{hecke_points, HPoint};
use crate::coset::{r_gamma, DoubleCosetNF};
use crate::error::{param, Result};
use crate::exact::rat_to_string;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Absolute tolerance of the fundamental-domain quadrature.
pub const QUAD_TOL: f64 = 1e-10;

/// Test functions on the fundamental domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    Constant { value: f64 },
    /// Indicator of `[x0, x1) × [y0, y1)`; `y1 = None` means unbounded.
    Box {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: Option<f64>,
    },
}

impl TestFunction {
    pub fn eval(&self, t: HPoint) -> f64 {
        match *self {
            TestFunction::Constant { value } => value,
            TestFunction::Box { x0, x1, y0, y1 } => {
                let inside = x0 <= t.x && t.x < x1 && y0 <= t.y && y1.is_none_or(|y1| t.y < y1);
                inside as u8 as f64
            }
        }
    }

    /// `∫ f dν̄` over the fundamental domain.
    pub fn target_integral(&self) -> f64 {
        match *self {
            TestFunction::Constant { value } => value,
            TestFunction::Box { x0, x1, y0, y1 } => box_integral(x0, x1, y0, y1),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TestFunction::Constant { value } if !value.is_finite() => param("constant must be finite"),
            TestFunction::Box { x0, x1, y0, y1 }
                if !(x0 <= x1) || !(y0 >= 0.0) || y1.is_some_and(|y1| !(y1 >= y0)) =>
            {
                param("box bounds must be ordered with y0 >= 0")
            }
            _ => Ok(()),
        }
    }
}

fn arc(x: f64) -> f64 {
    (1.0 - x * x).max(0.0).sqrt()
}

fn box_integral(x0: f64, x1: f64, y0: f64, y1: Option<f64>) -> f64 {
    let (a, b) = (x0.max(-0.5), x1.min(0.5));
    if a >= b {
        return 0.0;
    }
    let inv_top = y1.map_or(0.0, |y| 1.0 / y);
    let inner = |x: f64| (1.0 / y0.max(arc(x)) - inv_top).max(0.0);
    let mut cuts = vec![a, b];
    for y in [Some(y0), y1].into_iter().flatten() {
        if y > 0.0 && y < 1.0 {
            let c = (1.0 - y * y).sqrt();
            cuts.extend([-c, c].into_iter().filter(|&c| a < c && c < b));
        }
    }
    cuts.sort_by(f64::total_cmp);
    let total: f64 = cuts
        .windows(2)
        .map(|w| quadrature::integrate(inner, w[0], w[1], QUAD_TOL).integral)
        .sum();
    3.0 / PI * total
}

/// `∫ f dν̄` for a smooth `f` by nested double-exponential quadrature in `(x, 1/y)`.
pub fn fd_integral(f: &dyn Fn(HPoint) -> f64) -> f64 {
    let outer = |x: f64| {
        let top = 1.0 / arc(x);
        quadrature::integrate(|t: f64| f(HPoint { x, y: 1.0 / t }), 0.0, top, QUAD_TOL).integral
    };
    3.0 / PI * quadrature::integrate(outer, -0.5, 0.5, QUAD_TOL).integral
}

/// The eight boxes: quarters of `[-1/2, 1/2)` times `y < 3/2` and `y ≥ 3/2`.
pub fn box_test_set() -> Vec<TestFunction> {
    let mut v = Vec::new();
    for (y0, y1) in [(0.0, Some(1.5)), (1.5, None)] {
        for q in 0..4 {
            let x0 = -0.5 + 0.25 * q as f64;
            v.push(TestFunction::Box {
                x0,
                x1: x0 + 0.25,
                y0,
                y1,
            });
        }
    }
    v
}

/// `|mean of f over the Hecke points − ∫ f dν̄|` for each test function.
pub fn equidist_discrepancies(
    c: &DoubleCosetNF,
    t: HPoint,
    tests: &[TestFunction],
) -> Result<Vec<f64>> {
    for f in tests {
        f.validate()?;
    }
    let pts = hecke_points(c, t)?;
    let n = pts.len() as f64;
    Ok(tests
        .par_iter()
        .map(|f| {
            let mean = pts.iter().map(|&q| f.eval(q)).sum::<f64>() / n;
            (mean - f.target_integral()).abs()
        })
        .collect())
}

/// Supremum of [`equidist_discrepancies`] over the test set.
pub fn equidist_discrepancy(c: &DoubleCosetNF, t: HPoint, tests: &[TestFunction]) -> Result<f64> {
    Ok(equidist_discrepancies(c, t, tests)?
        .into_iter()
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendRow {
    pub coset: DoubleCosetNF,
    pub r_gamma: u64,
    pub discrepancy: f64,
}

/// One row per coset, ordered by `(R_Γ, coset)`.
pub fn equidist_trend(
    t: HPoint,
    cosets: &[DoubleCosetNF],
    tests: &[TestFunction],
) -> Result<Vec<TrendRow>> {
    let mut cs: Vec<(u64, DoubleCosetNF)> = cosets.iter().map(|c| (r_gamma(c), c.clone())).collect();
    cs.sort();
    cs.into_iter()
        .map(|(r, c)| {
            let d = equidist_discrepancy(&c, t, tests)?;
            Ok(TrendRow {
                coset: c,
                r_gamma: r,
                discrepancy: d,
            })
        })
        .collect()
}

pub fn trend_csv(rows: &[TrendRow]) -> String {
    let mut s = String::from("coset_r,coset_n,r_gamma,discrepancy\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{}\n",
            rat_to_string(r.coset.r()),
            r.coset.n(),
            r.r_gamma,
            r.discrepancy
        ));
    }
    s
}
