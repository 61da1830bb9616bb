//! Exact scalars and 2x2 matrices.
//!
//! Every value here is exact; floating point only appears when a caller
//! explicitly converts with [`Mat2Q::to_f64`].

mod matrix;
mod snf;

pub use matrix::{Mat2Q, Mat2Z};
pub use snf::{snf, SnfDecomposition};

use crate::arith::check_prime;
use crate::error::{HeckeError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Exact rational number, always stored in lowest terms with positive
/// denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Canonical "num/den" form. Integers keep the "/1".
pub fn rat_to_string(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts "n", "n/d" (not necessarily reduced) and surrounding spaces.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || HeckeError::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// p-adic valuation; `Infinite` only for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

pub fn p_valuation(x: &Rat, p: u64) -> Result<Valuation> {
    check_prime(p)?;
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let pb = BigInt::from(p);
    Ok(Valuation::Finite(
        int_valuation(x.numer(), &pb) - int_valuation(x.denom(), &pb),
    ))
}

/// True when the denominator of `x` is prime to `p`.
pub fn is_p_integral(x: &Rat, p: u64) -> bool {
    let pb = BigInt::from(p);
    !(x.denom() % &pb).is_zero()
}

pub(crate) fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(p_valuation(&rat_int(0), 3).unwrap(), Valuation::Infinite);
        assert_eq!(p_valuation(&rat_int(12), 2).unwrap(), Valuation::Finite(2));
        assert_eq!(p_valuation(&rat(1, 3), 3).unwrap(), Valuation::Finite(-1));
        assert_eq!(p_valuation(&rat(-9, 4), 3).unwrap(), Valuation::Finite(2));
    }

    #[test]
    fn valuation_rejects_composite() {
        assert!(matches!(
            p_valuation(&rat_int(4), 4),
            Err(HeckeError::Parameter(_))
        ));
    }

    #[test]
    fn rat_text_forms() {
        assert_eq!(parse_rat("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rat(" -7 ").unwrap(), rat_int(-7));
        assert_eq!(rat_to_string(&rat_int(5)), "5/1");
        assert_eq!(rat_to_string(&rat(-2, 4)), "-1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    proptest! {
        #[test]
        fn valuation_is_additive(a in -500i64..500, b in 1i64..500, c in -500i64..500, d in 1i64..500,
                                 p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            prop_assume!(a != 0 && c != 0);
            let x = rat(a, b);
            let y = rat(c, d);
            let vx = p_valuation(&x, p).unwrap().finite().unwrap();
            let vy = p_valuation(&y, p).unwrap().finite().unwrap();
            let vxy = p_valuation(&(&x * &y), p).unwrap().finite().unwrap();
            prop_assert_eq!(vxy, vx + vy);
        }
    }
}
