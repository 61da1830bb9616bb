//! Double and right cosets of SL2(Z) in GL2(Q)+.
//!
//! A double coset is stored as `(r, n)`, meaning `Γ·diag(r, r·n)·Γ` with
//! `r > 0` rational and `n >= 1`. For integral cosets this is the classical
//! `diag(a, d)`, `a | d`, with `a = r` and `d = r·n`; other cosets are
//! rational multiples of those.

use crate::arith::{check_prime, dedekind_psi, gcd_u64};
use crate::error::{domain, param, HeckeError, Result};
use crate::exact::{
    is_integer, p_valuation, parse_rat, rat_to_string, snf, Mat2Q, Mat2Z, Rat, Valuation,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubleCosetNF {
    r: Rat,
    n: u64,
}

impl DoubleCosetNF {
    pub fn new(r: Rat, n: u64) -> Result<Self> {
        if !r.is_positive() {
            return param(format!("scale r must be positive, got {r}"));
        }
        if n == 0 {
            return param("level n must be >= 1");
        }
        Ok(DoubleCosetNF { r, n })
    }

    /// The coset of `diag(a, d)`; requires `a | d`.
    pub fn integral(a: u64, d: u64) -> Result<Self> {
        if a == 0 || !d.is_multiple_of(a) {
            return param(format!("need a | d with a >= 1, got a={a}, d={d}"));
        }
        Ok(DoubleCosetNF {
            r: Rat::from_integer(a.into()),
            n: d / a,
        })
    }

    pub fn identity() -> Self {
        DoubleCosetNF {
            r: Rat::one(),
            n: 1,
        }
    }

    pub fn r(&self) -> &Rat {
        &self.r
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The coset lies in M2(Z) iff `r` is an integer.
    pub fn is_integral(&self) -> bool {
        is_integer(&self.r)
    }

    /// `(a, d)` for integral cosets.
    pub fn as_integral(&self) -> Option<(u64, u64)> {
        let a = self.is_integral().then(|| self.r.to_integer())?.to_u64()?;
        Some((a, a.checked_mul(self.n)?))
    }

    pub fn representative(&self) -> Mat2Q {
        Mat2Q::diag(self.r.clone(), &self.r * Rat::from_integer(self.n.into()))
    }

    pub fn det(&self) -> Rat {
        &self.r * &self.r * Rat::from_integer(self.n.into())
    }

    /// Scales every element of the coset by the positive rational `s`.
    pub fn scaled(&self, s: &Rat) -> DoubleCosetNF {
        DoubleCosetNF {
            r: &self.r * s,
            n: self.n,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({"r": rat_to_string(&self.r), "n": self.n})
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let bad = || HeckeError::Parse(format!("expected {{\"r\":..,\"n\":..}}, got {v}"));
        let r = match v.get("r").ok_or_else(bad)? {
            serde_json::Value::String(s) => parse_rat(s)?,
            serde_json::Value::Number(n) if n.is_u64() => {
                Rat::from_integer(n.as_u64().unwrap().into())
            }
            _ => return Err(bad()),
        };
        let n = v.get("n").and_then(|n| n.as_u64()).ok_or_else(bad)?;
        Self::new(r, n)
    }

    /// Parses the shorthand `r:n`, e.g. `1:2` or `1/2:6`.
    pub fn parse_short(s: &str) -> Result<Self> {
        let (r, n) = s
            .split_once(':')
            .ok_or_else(|| HeckeError::Parse(format!("expected r:n, got {s:?}")))?;
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|_| HeckeError::Parse(format!("bad level in {s:?}")))?;
        Self::new(parse_rat(r)?, n)
    }
}

impl fmt::Display for DoubleCosetNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r, self.n)
    }
}

impl Serialize for DoubleCosetNF {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DoubleCosetNF {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Self::from_json_value(&v).map_err(D::Error::custom)
    }
}

/// Normal form together with SL2(Z) witnesses: `left · rep · right = g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub coset: DoubleCosetNF,
    pub left: Mat2Z,
    pub right: Mat2Z,
}

pub fn double_coset_nf(g: &Mat2Q) -> Result<NormalForm> {
    if !g.det().is_positive() {
        return domain("double coset normal form needs det > 0");
    }
    let l = g.denominator_lcm();
    let scale = Rat::from_integer(l.clone());
    let m = g.scale(&scale).to_z().expect("cleared denominators");
    let s = snf(&m);
    let n = (&s.d2 / &s.d1)
        .to_u64()
        .ok_or_else(|| HeckeError::Overflow("level exceeds u64".into()))?;
    let (mut u, mut v) = (s.u, s.v);
    if u.det().is_negative() {
        // det u = det v = -1 here; conjugating by diag(1,-1) fixes both.
        u = u.neg_row(1);
        v = v.neg_col(1);
    }
    let coset = DoubleCosetNF {
        r: Rat::new(s.d1, l),
        n,
    };
    Ok(NormalForm {
        coset,
        left: u.inv_unimodular().expect("unimodular"),
        right: v.inv_unimodular().expect("unimodular"),
    })
}

/// Normal form `(content, det / content²)` of an integral matrix with
/// positive determinant.
pub(crate) fn integral_nf(m: [i64; 4]) -> (u64, u64) {
    let det = m[0] as i128 * m[3] as i128 - m[1] as i128 * m[2] as i128;
    debug_assert!(det > 0);
    let g = gcd_u64(
        gcd_u64(m[0].unsigned_abs(), m[1].unsigned_abs()),
        gcd_u64(m[2].unsigned_abs(), m[3].unsigned_abs()),
    );
    let n = det as u128 / (g as u128 * g as u128);
    (g, n as u64)
}

/// Triples `(k, m, l)` with `k·l = n`, `0 <= m < l`, `gcd(k, l, m) = 1`;
/// the matrices `[[k, m], [0, l]]` represent the right cosets in the double
/// coset of `diag(1, n)`.
pub fn integral_rep_shapes(n: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for k in 1..=n {
        if !n.is_multiple_of(k) {
            continue;
        }
        let l = n / k;
        let gkl = gcd_u64(k, l);
        for m in 0..l {
            if gcd_u64(gkl, m) == 1 {
                out.push((k, m, l));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RightCosetList {
    pub coset: DoubleCosetNF,
    pub reps: Vec<Mat2Q>,
}

pub fn right_coset_reps(c: &DoubleCosetNF) -> RightCosetList {
    let reps = integral_rep_shapes(c.n)
        .into_iter()
        .map(|(k, m, l)| {
            Mat2Q::from_i64(k as i64, m as i64, 0, l as i64).scale(&c.r)
        })
        .collect();
    RightCosetList {
        coset: c.clone(),
        reps,
    }
}

/// Number of right cosets in the double coset.
pub fn r_gamma(c: &DoubleCosetNF) -> u64 {
    dedekind_psi(c.n)
}

pub fn coset_inverse(c: &DoubleCosetNF) -> DoubleCosetNF {
    DoubleCosetNF {
        r: (&c.r * Rat::from_integer(c.n.into())).recip(),
        n: c.n,
    }
}

/// Integral double cosets `diag(a, d)`, `a | d`, with `a·d <= bound`,
/// optionally restricted to determinants built from `primes`. Sorted by
/// determinant, then by `a`.
pub fn integral_cosets_up_to(bound: u64, primes: Option<&[u64]>) -> Vec<(u64, u64)> {
    let dets: Vec<u64> = match primes {
        Some(ps) => crate::arith::smooth_numbers(ps, bound),
        None => (1..=bound).collect(),
    };
    let mut out = Vec::new();
    for det in dets {
        let mut a = 1u64;
        while a * a <= det {
            if det % (a * a) == 0 {
                out.push((a, det / a));
            }
            a += 1;
        }
    }
    out
}

/// Writes `r = g·u` with `g ∈ GL2(Z[1/p])`, `det g = p^k > 0`, and `u`
/// p-integral with unit determinant.
pub fn padic_factor(r: &Mat2Q, p: u64) -> Result<(Mat2Q, Mat2Q)> {
    check_prime(p)?;
    if r.det().is_zero() {
        return domain("p-adic factorization needs det != 0");
    }
    let val = |x: &Rat| p_valuation(x, p).expect("p checked prime");
    // Column-reduce over the p-integral rationals to lower-triangular form.
    let mut t = r.clone();
    if !t.b.is_zero() {
        if t.a.is_zero() || val(&t.b) < val(&t.a) {
            t = &t * &Mat2Q::from_i64(0, 1, 1, 0);
        }
        let q = &t.b / &t.a;
        let e = Mat2Q::new(Rat::one(), -q, Rat::zero(), Rat::one());
        t = &t * &e;
    }
    let (Valuation::Finite(va), Valuation::Finite(vc)) = (val(&t.a), val(&t.d)) else {
        unreachable!("triangular form of an invertible matrix has nonzero diagonal");
    };
    let pp = |e: i64| -> Rat {
        let base = Rat::from_integer(BigInt::from(p));
        if e >= 0 {
            num_traits::pow(base, e as usize)
        } else {
            num_traits::pow(base.recip(), (-e) as usize)
        }
    };
    let unit_a = &t.a / pp(va);
    let target = &t.c / &unit_a;
    let lower = match val(&target) {
        Valuation::Infinite => Rat::zero(),
        Valuation::Finite(v0) if v0 >= vc => Rat::zero(),
        Valuation::Finite(v0) => {
            // Approximate target to precision p^vc inside Z[1/p].
            let unit = &target / pp(v0);
            let modulus = BigInt::from(p).pow((vc - v0) as u32);
            let inv = unit
                .denom()
                .extended_gcd(&modulus)
                .x
                .mod_floor(&modulus);
            let w = (unit.numer() * inv).mod_floor(&modulus);
            Rat::from_integer(w) * pp(v0)
        }
    };
    let g = Mat2Q::new(pp(va), Rat::zero(), lower, pp(vc));
    let u = &g.inv()? * r;
    Ok((g, u))
}
