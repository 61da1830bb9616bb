//! Strata of M2(Z_p) by elementary divisors and the masses the measure
//! `μ_{β,p}` gives them and their level-k cells.
//!
//! A cell is a residue class `x + p^k M2(Z_p)`. Masses are invariant under
//! left and right multiplication by GL2(Z_p), so inside one stratum
//! `GL2(Z_p) diag(p^a, p^b) GL2(Z_p)` all cells it meets carry the same
//! share of its mass.

use crate::arith::{checked_pow, check_prime, val_u64};
use crate::error::{param, HeckeError, Result};
use crate::exact::{p_valuation, Mat2Q, Valuation};
use num_traits::Zero;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Largest `p^k` handled by the cell routines.
pub const MAX_LEVEL_MODULUS: u64 = 1 << 31;
/// Levels `p^k` up to this size are counted by enumeration.
pub const ENUMERATION_LIMIT: u64 = 81;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum StratumType {
    /// Elementary divisors `(p^a, p^b)`.
    Regular { a: u32, b: u32 },
    /// Nonzero with determinant zero and content valuation `k`.
    Singular { k: u32 },
    Zero,
    /// Determinant vanishes modulo `p^level`, so the stratum is not visible.
    Undetermined { level: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalMeasureSpec {
    p: u64,
    beta: f64,
    k: u32,
}

impl LocalMeasureSpec {
    pub fn new(p: u64, beta: f64, k: u32) -> Result<Self> {
        check_prime(p)?;
        if !(beta > 1.0) || !beta.is_finite() {
            return param(format!("local KMS measure needs beta > 1, got {beta}"));
        }
        if k == 0 {
            return param("level k must be >= 1");
        }
        let q = checked_pow(p, k)?;
        if q > MAX_LEVEL_MODULUS {
            return param(format!("p^k = {q} exceeds {MAX_LEVEL_MODULUS}"));
        }
        Ok(LocalMeasureSpec { p, beta, k })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.k)
    }

    /// Mass of GL2(Z_p): `(1 - p^{-β})(1 - p^{1-β})`.
    pub fn base_mass(&self) -> f64 {
        let p = self.p as f64;
        (1.0 - p.powf(-self.beta)) * (1.0 - p.powf(1.0 - self.beta))
    }

    pub fn stratum_mass(&self, a: u32, b: u32) -> f64 {
        stratum_mass_raw(self.p, self.beta, a, b)
    }
}

fn psi_prime_power(p: u64, m: u32) -> f64 {
    let pf = p as f64;
    if m == 0 {
        1.0
    } else {
        pf.powi(m as i32) * (1.0 + 1.0 / pf)
    }
}

fn stratum_mass_raw(p: u64, beta: f64, a: u32, b: u32) -> f64 {
    assert!(a <= b);
    let pf = p as f64;
    let c = (1.0 - pf.powf(-beta)) * (1.0 - pf.powf(1.0 - beta));
    pf.powf(-beta * (a + b) as f64) * psi_prime_power(p, b - a) * c
}

/// `p^{-β(a+b)} R(diag(p^a, p^b)) (1 - p^{-β})(1 - p^{1-β})`.
pub fn stratum_mass(spec: &LocalMeasureSpec, a: u32, b: u32) -> Result<f64> {
    if a > b {
        return param(format!("need a <= b, got ({a}, {b})"));
    }
    Ok(spec.stratum_mass(a, b))
}

/// Sum of all stratum masses with `a + b < j_max`, and a bound for the rest.
pub fn stratum_mass_total(spec: &LocalMeasureSpec, j_max: u32) -> (f64, f64) {
    let mut terms = Vec::new();
    for j in 0..j_max {
        for a in 0..=j / 2 {
            terms.push(spec.stratum_mass(a, j - a));
        }
    }
    let tail = crate::zeta::local_tail_bound(spec.p, spec.beta, j_max as u64)
        .expect("validated spec")
        * spec.base_mass();
    (crate::zeta::pairwise_sum(&terms), tail)
}

fn reduce(x: [i64; 4], q: u64) -> [u64; 4] {
    x.map(|e| e.rem_euclid(q as i64) as u64)
}

fn content_val(x: &[u64; 4], p: u64, k: u32) -> u32 {
    x.iter()
        .filter(|&&e| e != 0)
        .map(|&e| val_u64(e, p))
        .min()
        .unwrap_or(k)
}

fn det_mod(x: &[u64; 4], q: u64) -> u64 {
    let q = q as u128;
    let ad = x[0] as u128 * x[3] as u128 % q;
    let bc = x[1] as u128 * x[2] as u128 % q;
    ((ad + q - bc) % q) as u64
}

/// Classifies a residue modulo `p^k` using only its determinant modulo `p^k`.
pub fn snf_type_at_level(x: [i64; 4], p: u64, k: u32) -> Result<StratumType> {
    check_prime(p)?;
    let q = checked_pow(p, k)?;
    let r = reduce(x, q);
    if r.iter().all(|&e| e == 0) {
        return Ok(StratumType::Zero);
    }
    let det = det_mod(&r, q);
    if det == 0 {
        return Ok(StratumType::Undetermined { level: k });
    }
    let a = content_val(&r, p, k);
    Ok(StratumType::Regular {
        a,
        b: val_u64(det, p) - a,
    })
}

/// Stratum of an exact p-integral matrix.
pub fn stratum_of_matrix(m: &Mat2Q, p: u64) -> Result<StratumType> {
    check_prime(p)?;
    let vals = m
        .entries()
        .map(|x| p_valuation(x, p))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    if vals.iter().any(|v| matches!(v, Valuation::Finite(e) if *e < 0)) {
        return Err(HeckeError::Domain(format!("{m} is not p-integral")));
    }
    let Some(a) = vals.iter().filter_map(|v| v.finite()).min() else {
        return Ok(StratumType::Zero);
    };
    let det = m.det();
    if det.is_zero() {
        return Ok(StratumType::Singular { k: a as u32 });
    }
    let d = p_valuation(&det, p)?.finite().expect("nonzero");
    Ok(StratumType::Regular {
        a: a as u32,
        b: (d - a) as u32,
    })
}

type CountTable = HashMap<(u32, u32), u128>;
type CountCache = OnceLock<Mutex<HashMap<(u64, u32), Arc<CountTable>>>>;

fn enumerated_counts(p: u64, k: u32) -> Arc<CountTable> {
    static CACHE: CountCache = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(p, k)) {
        return t.clone();
    }
    use rayon::prelude::*;
    let q = p.pow(k);
    let table: CountTable = (0..q)
        .into_par_iter()
        .fold(CountTable::new, |mut acc, a| {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        let x = [a as i64, b as i64, c as i64, d as i64];
                        if let Ok(StratumType::Regular { a, b }) = snf_type_at_level(x, p, k) {
                            *acc.entry((a, b)).or_insert(0) += 1;
                        }
                    }
                }
            }
            acc
        })
        .reduce(CountTable::new, |mut x, y| {
            for (key, v) in y {
                *x.entry(key).or_insert(0) += v;
            }
            x
        });
    let table = Arc::new(table);
    cache.lock().unwrap().insert((p, k), table.clone());
    table
}

/// `p^{4k} · p^{-2(a+b)} R(diag(p^a, p^b)) (1 - p^{-2})(1 - p^{-1})`, the
/// additive-Haar count of the stratum at level k.
pub fn stratum_count_closed(p: u64, k: u32, a: u32, b: u32) -> u128 {
    assert!(a <= b && b < k);
    let pw = |e: u32| (p as u128).pow(e);
    let psi = if a == b { 1 } else { pw(b - a) + pw(b - a - 1) };
    pw(4 * k - 2 * (a + b) - 3) * psi * (pw(2) - 1) * (p as u128 - 1)
}

/// Number of level-k cells contained in the stratum `(a, b)`. For `a + b < k`
/// these are exactly the residues classified `Regular(a, b)`.
pub fn stratum_count(p: u64, k: u32, a: u32, b: u32) -> Result<u128> {
    check_prime(p)?;
    if a > b || b >= k {
        return param(format!("need a <= b < k, got a={a}, b={b}, k={k}"));
    }
    if a > 0 {
        return stratum_count(p, k - a, 0, b - a);
    }
    let q = checked_pow(p, k)?;
    if q <= ENUMERATION_LIMIT {
        return Ok(enumerated_counts(p, k).get(&(0, b)).copied().unwrap_or(0));
    }
    Ok(stratum_count_closed(p, k, 0, b))
}

/// Residues modulo `p^L` of content zero whose determinant vanishes mod `p^L`.
pub fn rank_deficient_count(p: u64, l: u32) -> u128 {
    let total = (p as u128).pow(4 * l) - (p as u128).pow(4 * l - 4);
    let determined: u128 = (0..l).map(|e| stratum_count_closed(p, l, 0, e)).sum();
    total - determined
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MassInterval {
    pub lo: f64,
    pub hi: f64,
}

impl MassInterval {
    /// A point value widened by a few ulps.
    pub fn point(v: f64) -> Self {
        let slack = 4.0 * f64::EPSILON * v.abs();
        MassInterval {
            lo: (v - slack).max(0.0),
            hi: (v + slack).min(1.0),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn overlaps(&self, o: &MassInterval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    /// Interval sum, rounded outward.
    pub fn add(&self, o: &MassInterval) -> MassInterval {
        let (lo, hi) = (self.lo + o.lo, self.hi + o.hi);
        MassInterval {
            lo: lo - lo.abs() * f64::EPSILON,
            hi: hi + hi.abs() * f64::EPSILON,
        }
    }

    pub fn zero() -> Self {
        MassInterval { lo: 0.0, hi: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefineConfig {
    /// Target enclosure width.
    pub eps: f64,
    /// Number of deep strata summed before giving up on `eps`.
    pub max_depth: u32,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig {
            eps: 1e-12,
            max_depth: 4096,
        }
    }
}

/// Finer description of a cell than [`snf_type_at_level`] gives: the
/// determinant of `x = p^c y` is known modulo `p^{k+c}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    Zero,
    Regular { a: u32, b: u32 },
    /// Content `c`, and `y` has rank at most one modulo `p^{k-c}`.
    RankDeficient { c: u32 },
}

pub fn cell_kind(x: [i64; 4], p: u64, k: u32) -> Result<CellKind> {
    check_prime(p)?;
    let q = checked_pow(p, k)?;
    let r = reduce(x, q);
    if r.iter().all(|&e| e == 0) {
        return Ok(CellKind::Zero);
    }
    let c = content_val(&r, p, k);
    let pc = p.pow(c);
    let y = r.map(|e| e / pc);
    let ql = q / pc;
    let det = det_mod(&y, ql);
    if det == 0 {
        return Ok(CellKind::RankDeficient { c });
    }
    Ok(CellKind::Regular {
        a: c,
        b: c + val_u64(det, p),
    })
}

/// Mass of the level-k cell of `x` under `μ_{β,p}`.
pub fn cell_mass(spec: &LocalMeasureSpec, x: [i64; 4]) -> Result<MassInterval> {
    cell_mass_with(spec, x, &RefineConfig::default())
}

pub fn cell_mass_with(
    spec: &LocalMeasureSpec,
    x: [i64; 4],
    cfg: &RefineConfig,
) -> Result<MassInterval> {
    let (p, k, beta) = (spec.p, spec.k, spec.beta);
    match cell_kind(x, p, k)? {
        CellKind::Zero => Ok(MassInterval::point((p as f64).powf(-2.0 * beta * k as f64))),
        CellKind::Regular { a, b } => {
            let count = stratum_count(p, k, a, b)? as f64;
            Ok(MassInterval::point(spec.stratum_mass(a, b) / count))
        }
        CellKind::RankDeficient { c } => {
            // The cell meets the strata (c, b) for every b >= k.
            let cells = rank_deficient_count(p, k - c) as f64;
            let pf = p as f64;
            let ratio = pf.powf(1.0 - beta);
            let tail_from = |b: u32| {
                spec.base_mass() * (1.0 + 1.0 / pf) * pf.powf(-(beta + 1.0) * c as f64)
                    * pf.powf((1.0 - beta) * b as f64)
                    / (1.0 - ratio)
            };
            let mut partial = 0.0;
            let mut depth = 0;
            let mut tail = tail_from(k);
            while depth < cfg.max_depth {
                partial += spec.stratum_mass(c, k + depth);
                depth += 1;
                tail = tail_from(k + depth);
                if tail / cells <= cfg.eps {
                    break;
                }
            }
            let slack = 8.0 * f64::EPSILON * (partial + tail);
            Ok(MassInterval {
                lo: ((partial - slack) / cells).max(0.0),
                hi: ((partial + tail + slack) / cells).min(1.0),
            })
        }
    }
}

/// All residues modulo `q`, in encoding order.
pub fn level_residues(q: u64) -> impl Iterator<Item = [i64; 4]> {
    let q = q as i64;
    (0..q * q * q * q).map(move |i| [i / (q * q * q), i / (q * q) % q, i / q % q, i % q])
}
