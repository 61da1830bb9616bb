//! Projection onto `S_p`-invariant functions at finite level.
//!
//! At level `k` the semigroup acts on `M2(Z/p^k)` through its reductions;
//! since `p·I ∈ S_p` is nilpotent there, the invariant level-k functions are
//! the constants and the projection of `f` is its `μ_{β,p}`-mean. The
//! truncated formula evaluates `Pf` on `Γ\GL2(Z_p)`, parametrized by the unit
//! `v` in `diag(1, v)`, and averages over `v mod p^k`.

use crate::action::finite::{act_index, encode};
use crate::action::FiniteLevelFn;
use crate::arith::gcd_u64;
use crate::error::{domain, param, Result};
use crate::kms::{cell_kind, cell_mass, level_residues, CellKind, LocalMeasureSpec};
use crate::zeta::zeta_local;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Largest level modulus accepted by the dense oracle.
pub const DENSE_MAX_MODULUS: u64 = 5;

fn check_input(spec: &LocalMeasureSpec, f: &FiniteLevelFn<f64>) -> Result<()> {
    if !(spec.beta() > 1.0) {
        return param(format!("β must exceed 1, got {}", spec.beta()));
    }
    if f.modulus() != spec.modulus() {
        return param(format!(
            "function has modulus {} but the measure lives at p^k = {}",
            f.modulus(),
            spec.modulus()
        ));
    }
    if !f.is_gamma_invariant() {
        return domain("projection acts on Γ-invariant functions only");
    }
    Ok(())
}

/// Units `v` modulo `p^k`.
pub fn level_units(spec: &LocalMeasureSpec) -> Vec<u64> {
    let q = spec.modulus();
    (1..q).filter(|&v| gcd_u64(v, q) == 1).collect()
}

/// Truncated `(Pf)(diag(1, v))` for every unit `v mod p^k`, summing the
/// right cosets `[[p^i, m], [0, p^l]]` of `S_p` with `p^{i+l} ≤ det_bound`.
pub fn projection_on_units(
    spec: &LocalMeasureSpec,
    f: &FiniteLevelFn<f64>,
    det_bound: u64,
) -> Result<Vec<(u64, f64)>> {
    check_input(spec, f)?;
    if det_bound == 0 {
        return param("det_bound must be positive");
    }
    let (p, k, q) = (spec.p(), spec.k(), spec.modulus());
    let zeta = zeta_local(p, spec.beta())?;
    let pf = p as f64;
    let mut max_j = 0u32;
    while let Some(next) = p.checked_pow(max_j + 1) {
        if next > det_bound {
            break;
        }
        max_j += 1;
    }
    let values = f.values();
    Ok(level_units(spec)
        .into_iter()
        .map(|v| {
            let mut by_level = vec![0.0; max_j as usize + 1];
            for j in 0..=max_j {
                let mut level_sum = 0.0;
                for l in 0..=j {
                    let i = j - l;
                    let a = (p as u128).pow(i) % q as u128;
                    let d = (p as u128).pow(l) % q as u128 * v as u128 % q as u128;
                    let (m_count, mult) = if l >= k {
                        (q, pf.powi((l - k) as i32))
                    } else {
                        (p.pow(l), 1.0)
                    };
                    let mut s = 0.0;
                    for m in 0..m_count {
                        let b = (m as u128 * v as u128 % q as u128) as i64;
                        s += values[encode([a as i64, b, 0, d as i64], q)];
                    }
                    level_sum += mult * s;
                }
                by_level[j as usize] = pf.powf(-spec.beta() * j as f64) * level_sum;
            }
            let total: f64 = by_level.iter().rev().sum();
            (v, total / zeta)
        })
        .collect())
}

/// Truncated projection of `f` onto `S_p`-invariant functions at level `k`.
pub fn project_invariants(
    spec: &LocalMeasureSpec,
    f: &FiniteLevelFn<f64>,
    det_bound: u64,
) -> Result<FiniteLevelFn<f64>> {
    let on_units = projection_on_units(spec, f, det_bound)?;
    let mean = on_units.iter().map(|(_, x)| x).sum::<f64>() / on_units.len() as f64;
    FiniteLevelFn::constant(spec.modulus(), mean)
}

fn generators(p: u64) -> [[i64; 4]; 4] {
    let p = p as i64;
    [[0, -1, 1, 0], [1, 1, 0, 1], [1, 0, 0, p], [p, 0, 0, 1]]
}

/// Largest `|f(s·x) − f(x)|` over the generators `S`, `T`, `diag(1,p)`, `diag(p,1)`.
pub fn invariance_defect(f: &FiniteLevelFn<f64>, p: u64) -> f64 {
    let n = f.modulus();
    let v = f.values();
    generators(p)
        .iter()
        .flat_map(|&h| (0..v.len()).map(move |x| (v[act_index(h, x, n)] - v[x]).abs()))
        .fold(0.0, f64::max)
}

/// Cell masses (interval midpoints) of every residue at level `k`.
pub fn cell_weights(spec: &LocalMeasureSpec) -> Result<Vec<f64>> {
    level_residues(spec.modulus())
        .map(|x| cell_mass(spec, x).map(|m| m.mid()))
        .collect()
}

/// Orthogonal projection in `L²(μ_{β,p})` onto the joint kernel of
/// `f ↦ f∘s − f` over the generators, by dense linear algebra.
pub fn dense_projection(spec: &LocalMeasureSpec, f: &FiniteLevelFn<f64>) -> Result<FiniteLevelFn<f64>> {
    check_input(spec, f)?;
    let q = spec.modulus();
    if q > DENSE_MAX_MODULUS {
        return param(format!("dense projection supports p^k ≤ {DENSE_MAX_MODULUS}"));
    }
    let n = f.values().len();
    let gens = generators(spec.p());
    let mut c = DMatrix::<f64>::zeros(gens.len() * n, n);
    for (g, &h) in gens.iter().enumerate() {
        for x in 0..n {
            c[(g * n + x, act_index(h, x, q))] += 1.0;
            c[(g * n + x, x)] -= 1.0;
        }
    }
    let eig = SymmetricEigen::new(c.transpose() * &c);
    let kernel: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i].abs() < 1e-9).collect();
    let b = DMatrix::from_fn(n, kernel.len(), |i, j| eig.eigenvectors[(i, kernel[j])]);
    let w = DVector::from_vec(cell_weights(spec)?);
    let fv = DVector::from_column_slice(f.values());
    let bw = DMatrix::from_fn(kernel.len(), n, |i, j| b[(j, i)] * w[j]);
    let gram = &bw * &b;
    let rhs = &bw * fv;
    let coef = gram
        .lu()
        .solve(&rhs)
        .ok_or_else(|| crate::HeckeError::Domain("singular Gram matrix".into()))?;
    let out = &b * coef;
    FiniteLevelFn::from_residues(q, out.iter().copied().collect())
}

/// Both sides of `‖f‖² = ζ_{S_p,Γ}(β) ∫_{Γ\GL2(Z_p)} |f|²`; equal for invariant `f`.
pub fn norm_identity(spec: &LocalMeasureSpec, f: &FiniteLevelFn<f64>) -> Result<(f64, f64)> {
    check_input(spec, f)?;
    let w = cell_weights(spec)?;
    let (p, k) = (spec.p(), spec.k());
    let mut lhs = 0.0;
    let mut on_units = 0.0;
    for (x, (fx, wx)) in level_residues(spec.modulus()).zip(f.values().iter().zip(&w)) {
        lhs += wx * fx * fx;
        if cell_kind(x, p, k)? == (CellKind::Regular { a: 0, b: 0 }) {
            on_units += wx * fx * fx;
        }
    }
    Ok((lhs, zeta_local(p, spec.beta())? * on_units))
}
