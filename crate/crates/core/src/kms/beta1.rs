//! Haar measure on `Ẑ²` at finite level, the measure relevant at `β = 1`.

use crate::error::{param, Result};
use std::collections::HashSet;

/// Mass of the cell `(u, v) + N·Ẑ²`.
pub fn beta1_haar_cell(n: u64, _cell: (i64, i64)) -> Result<f64> {
    if n == 0 {
        return param("modulus must be >= 1");
    }
    Ok(1.0 / (n as f64 * n as f64))
}

/// Ratio of the mass of `g·((u, v) + N·Ẑ²)` to the mass of the cell,
/// found by counting residues at level `N·det g`.
pub fn beta1_scaling_factor(g: [i64; 4], n: u64, cell: (i64, i64)) -> Result<f64> {
    let det = g[0] * g[3] - g[1] * g[2];
    if det <= 0 {
        return param(format!("need det g > 0, got {det}"));
    }
    if n == 0 {
        return param("modulus must be >= 1");
    }
    let n = n as i64;
    let m = n * det;
    let mut image = HashSet::new();
    for s in 0..det {
        for t in 0..det {
            let (x, y) = (cell.0 + n * s, cell.1 + n * t);
            image.insert((
                (g[0] * x + g[1] * y).rem_euclid(m),
                (g[2] * x + g[3] * y).rem_euclid(m),
            ));
        }
    }
    let image_mass = image.len() as f64 * beta1_haar_cell(m as u64, (0, 0))?;
    Ok(image_mass / beta1_haar_cell(n as u64, cell)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_examples() {
        assert_eq!(beta1_haar_cell(2, (1, 0)).unwrap(), 0.25);
        assert_eq!(beta1_haar_cell(1, (0, 0)).unwrap(), 1.0);
        assert!(beta1_haar_cell(0, (0, 0)).is_err());
    }

    #[test]
    fn scaling_is_inverse_determinant() {
        assert_eq!(beta1_scaling_factor([1, 0, 0, 2], 4, (1, 3)).unwrap(), 0.5);
        for g in [[2, 1, 0, 3], [1, 0, 0, 1], [3, 1, 1, 1], [4, 0, 0, 1]] {
            let det = (g[0] * g[3] - g[1] * g[2]) as f64;
            for n in [1u64, 2, 3, 6] {
                for cell in [(0, 0), (1, 2), (5, -1)] {
                    let f = beta1_scaling_factor(g, n, cell).unwrap();
                    assert!((f - 1.0 / det).abs() < 1e-15);
                }
            }
        }
        assert!(beta1_scaling_factor([0, 1, 1, 0], 2, (0, 0)).is_err());
    }
}
