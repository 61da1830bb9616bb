use super::Mat2Z;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

/// `u * m * v = diag(d1, d2)` with `d1 | d2`, both nonnegative and
/// `det u, det v = ±1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnfDecomposition {
    pub d1: BigInt,
    pub d2: BigInt,
    pub u: Mat2Z,
    pub v: Mat2Z,
}

fn swap() -> Mat2Z {
    Mat2Z::from_i64(0, 1, 1, 0)
}

fn elementary(lower: bool, q: BigInt) -> Mat2Z {
    let (z, o) = (BigInt::zero(), BigInt::from(1));
    if lower {
        Mat2Z::new(o.clone(), z, q, o)
    } else {
        Mat2Z::new(o.clone(), q, z, o)
    }
}

/// Smith normal form of a 2x2 integer matrix.
pub fn snf(m: &Mat2Z) -> SnfDecomposition {
    let mut x = m.clone();
    let mut u = Mat2Z::identity();
    let mut v = Mat2Z::identity();
    loop {
        let entries = [&x.a, &x.b, &x.c, &x.d];
        let Some((idx, _)) = entries
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .min_by(|(_, p), (_, q)| p.abs().cmp(&q.abs()))
        else {
            break;
        };
        if idx >= 2 {
            x = &swap() * &x;
            u = &swap() * &u;
        }
        if idx % 2 == 1 {
            x = &x * &swap();
            v = &v * &swap();
        }
        // Clear below and to the right of the pivot as far as division allows.
        let q = &x.c / &x.a;
        if !q.is_zero() {
            let e = elementary(true, -q);
            x = &e * &x;
            u = &e * &u;
        }
        let q = &x.b / &x.a;
        if !q.is_zero() {
            let e = elementary(false, -q);
            x = &x * &e;
            v = &v * &e;
        }
        if !x.c.is_zero() || !x.b.is_zero() {
            continue;
        }
        if !(&x.d % &x.a).is_zero() {
            // Pull d into the first row; the next pass shrinks the pivot.
            let e = elementary(false, BigInt::from(1));
            x = &e * &x;
            u = &e * &u;
            continue;
        }
        break;
    }
    if x.a.is_negative() {
        x = x.neg_row(0);
        u = u.neg_row(0);
    }
    if x.d.is_negative() {
        x = x.neg_row(1);
        u = u.neg_row(1);
    }
    SnfDecomposition {
        d1: x.a,
        d2: x.d,
        u,
        v,
    }
}
