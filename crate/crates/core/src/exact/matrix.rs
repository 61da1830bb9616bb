use super::{parse_rat, rat_to_f64, rat_to_string, Rat};
use crate::error::{HeckeError, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::Mul;

/// Row-major exact rational 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2Q {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

/// Row-major integer 2x2 matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2Z {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2Q {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        Mat2Q { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2Z::from_i64(a, b, c, d).to_q()
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1)
    }

    pub fn diag(x: Rat, y: Rat) -> Self {
        Mat2Q::new(x, Rat::zero(), Rat::zero(), y)
    }

    pub fn scalar(s: Rat) -> Self {
        Self::diag(s.clone(), s)
    }

    pub fn entries(&self) -> [&Rat; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> Rat {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|x| x.is_zero())
    }

    pub fn inv(&self) -> Result<Mat2Q> {
        let det = self.det();
        if det.is_zero() {
            return Err(HeckeError::Singular);
        }
        Ok(Mat2Q {
            a: &self.d / &det,
            b: -&self.b / &det,
            c: -&self.c / &det,
            d: &self.a / &det,
        })
    }

    pub fn scale(&self, s: &Rat) -> Mat2Q {
        Mat2Q {
            a: &self.a * s,
            b: &self.b * s,
            c: &self.c * s,
            d: &self.d * s,
        }
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|x| x.denom().is_one())
    }

    pub fn to_z(&self) -> Option<Mat2Z> {
        self.is_integral().then(|| Mat2Z {
            a: self.a.to_integer(),
            b: self.b.to_integer(),
            c: self.c.to_integer(),
            d: self.d.to_integer(),
        })
    }

    /// Membership in SL2(Z).
    pub fn is_sl2z(&self) -> bool {
        self.is_integral() && self.det().is_one()
    }

    /// Least common multiple of the entry denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.entries()
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [
            rat_to_f64(&self.a),
            rat_to_f64(&self.b),
            rat_to_f64(&self.c),
            rat_to_f64(&self.d),
        ]
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!([
            [rat_to_string(&self.a), rat_to_string(&self.b)],
            [rat_to_string(&self.c), rat_to_string(&self.d)]
        ])
    }

    /// Parses `[[a,b],[c,d]]` where entries are JSON numbers or rational strings.
    pub fn from_json_value(v: &serde_json::Value) -> Result<Mat2Q> {
        let bad = || HeckeError::Parse(format!("expected [[a,b],[c,d]], got {v}"));
        let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
        let mut out = Vec::with_capacity(4);
        for row in rows {
            let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
            for e in row {
                let x = match e {
                    serde_json::Value::String(s) => parse_rat(s)?,
                    serde_json::Value::Number(n) if n.is_i64() => {
                        Rat::from_integer(BigInt::from(n.as_i64().unwrap()))
                    }
                    _ => return Err(bad()),
                };
                out.push(x);
            }
        }
        let d = out.pop().unwrap();
        let c = out.pop().unwrap();
        let b = out.pop().unwrap();
        let a = out.pop().unwrap();
        Ok(Mat2Q { a, b, c, d })
    }

    pub fn parse(s: &str) -> Result<Mat2Q> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| HeckeError::Parse(e.to_string()))?;
        Self::from_json_value(&v)
    }
}

impl<'a> Mul<&'a Mat2Q> for &'a Mat2Q {
    type Output = Mat2Q;
    fn mul(self, o: &'a Mat2Q) -> Mat2Q {
        Mat2Q {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }
}

impl Mul for Mat2Q {
    type Output = Mat2Q;
    fn mul(self, o: Mat2Q) -> Mat2Q {
        &self * &o
    }
}

impl fmt::Display for Mat2Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json_value())
    }
}

impl Serialize for Mat2Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Mat2Q::from_json_value(&v).map_err(D::Error::custom)
    }
}

impl Mat2Z {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2Z { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2Z {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// gcd of the four entries (0 for the zero matrix).
    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c).gcd(&self.d)
    }

    /// Inverse of a unimodular matrix.
    pub fn inv_unimodular(&self) -> Option<Mat2Z> {
        let det = self.det();
        if !det.abs().is_one() {
            return None;
        }
        Some(Mat2Z {
            a: &self.d * &det,
            b: -&self.b * &det,
            c: -&self.c * &det,
            d: &self.a * &det,
        })
    }

    pub fn to_q(&self) -> Mat2Q {
        Mat2Q {
            a: Rat::from_integer(self.a.clone()),
            b: Rat::from_integer(self.b.clone()),
            c: Rat::from_integer(self.c.clone()),
            d: Rat::from_integer(self.d.clone()),
        }
    }

    pub fn neg_row(&self, row: usize) -> Mat2Z {
        let mut m = self.clone();
        if row == 0 {
            m.a = -m.a;
            m.b = -m.b;
        } else {
            m.c = -m.c;
            m.d = -m.d;
        }
        m
    }

    pub fn neg_col(&self, col: usize) -> Mat2Z {
        let mut m = self.clone();
        if col == 0 {
            m.a = -m.a;
            m.c = -m.c;
        } else {
            m.b = -m.b;
            m.d = -m.d;
        }
        m
    }
}

impl<'a> Mul<&'a Mat2Z> for &'a Mat2Z {
    type Output = Mat2Z;
    fn mul(self, o: &'a Mat2Z) -> Mat2Z {
        Mat2Z {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }
}

impl Mul for Mat2Z {
    type Output = Mat2Z;
    fn mul(self, o: Mat2Z) -> Mat2Z {
        &self * &o
    }
}

impl fmt::Display for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for Mat2Z {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_q().serialize(s)
    }
}
