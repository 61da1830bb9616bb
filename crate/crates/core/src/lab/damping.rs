//! Dirichlet characters and the damping product over a finite set of primes.

use crate::arith::{check_prime, check_prime_set, gcd_u64};
use crate::error::{param, Result};
use num_complex::Complex;
use std::f64::consts::PI;

/// A Dirichlet character mod `M`: `χ(u) = exp(2πi·e(u)/order)` on units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    exponents: Vec<Option<u64>>,
}

impl DirichletCharacter {
    pub fn trivial(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return param("modulus must be positive");
        }
        let exponents = (0..modulus)
            .map(|u| (gcd_u64(u, modulus) == 1).then_some(0))
            .collect();
        Ok(DirichletCharacter {
            modulus,
            order: 1,
            exponents,
        })
    }

    /// The nontrivial character mod 4.
    pub fn mod4() -> Self {
        DirichletCharacter {
            modulus: 4,
            order: 2,
            exponents: vec![None, Some(0), None, Some(1)],
        }
    }

    /// The Legendre symbol mod an odd prime `q`.
    pub fn legendre(q: u64) -> Result<Self> {
        check_prime(q)?;
        if q == 2 {
            return param("the Legendre symbol needs an odd prime");
        }
        let mut exponents = vec![Some(1); q as usize];
        exponents[0] = None;
        for u in 1..q {
            exponents[(u * u % q) as usize] = Some(0);
        }
        Ok(DirichletCharacter {
            modulus: q,
            order: 2,
            exponents,
        })
    }

    /// Builds a character from exponents indexed by residue; non-units must be `None`.
    pub fn from_table(modulus: u64, order: u64, exponents: Vec<Option<u64>>) -> Result<Self> {
        if modulus == 0 || order == 0 {
            return param("modulus and order must be positive");
        }
        if exponents.len() as u64 != modulus {
            return param(format!("expected {modulus} table entries"));
        }
        for (u, e) in exponents.iter().enumerate() {
            let unit = gcd_u64(u as u64, modulus) == 1;
            match e {
                Some(e) if !unit || *e >= order => {
                    return param(format!("bad table entry at residue {u}"))
                }
                None if unit => return param(format!("missing value at unit {u}")),
                _ => {}
            }
        }
        if exponents[(1 % modulus) as usize] != Some(0) {
            return param("χ(1) must be 1");
        }
        for a in 0..modulus {
            for b in 0..modulus {
                if let (Some(x), Some(y)) = (exponents[a as usize], exponents[b as usize]) {
                    let ab = exponents[((a * b) % modulus) as usize];
                    if ab != Some((x + y) % order) {
                        return param(format!("table is not multiplicative at {a}·{b}"));
                    }
                }
            }
        }
        Ok(DirichletCharacter {
            modulus,
            order,
            exponents,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exponent `e` with `χ(n) = ζ_order^e`, or `None` when `gcd(n, M) > 1`.
    pub fn exponent(&self, n: u64) -> Option<u64> {
        self.exponents[(n % self.modulus) as usize]
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|e| e.unwrap_or(0) == 0)
    }

    pub fn value(&self, n: u64) -> Option<Complex<f64>> {
        self.exponent(n).map(|e| root_of_unity(e, self.order))
    }
}

fn root_of_unity(e: u64, order: u64) -> Complex<f64> {
    if !(4 * e).is_multiple_of(order) {
        return Complex::from_polar(1.0, 2.0 * PI * e as f64 / order as f64);
    }
    match 4 * e / order % 4 {
        0 => Complex::new(1.0, 0.0),
        1 => Complex::new(0.0, 1.0),
        2 => Complex::new(-1.0, 0.0),
        _ => Complex::new(0.0, -1.0),
    }
}

/// One Euler factor `(1−p^{−β})(1−p^{1−β}) / ((1−χ(p)p^{−β})(1−χ(p)p^{1−β}))`.
pub fn damping_factor(chi: &DirichletCharacter, beta: f64, p: u64) -> Result<Complex<f64>> {
    check_prime(p)?;
    if !beta.is_finite() {
        return param("β must be finite");
    }
    let e = match chi.exponent(p) {
        Some(e) => e,
        None => return param(format!("{p} divides the modulus {}", chi.modulus)),
    };
    let one = Complex::new(1.0, 0.0);
    if e == 0 {
        return Ok(one);
    }
    let c = root_of_unity(e, chi.order);
    let x = (p as f64).powf(-beta);
    let y = (p as f64).powf(1.0 - beta);
    Ok(((1.0 - x) * (1.0 - y)) / ((one - c * x) * (one - c * y)))
}

/// Product of [`damping_factor`] over `primes`, for `β > 1`.
pub fn character_damping(
    chi: &DirichletCharacter,
    beta: f64,
    primes: &[u64],
) -> Result<Complex<f64>> {
    if !(beta > 1.0) || !beta.is_finite() {
        return param(format!("β must exceed 1, got {beta}"));
    }
    let primes = check_prime_set(primes)?;
    primes.iter().try_fold(Complex::new(1.0, 0.0), |acc, &p| {
        Ok(acc * damping_factor(chi, beta, p)?)
    })
}
