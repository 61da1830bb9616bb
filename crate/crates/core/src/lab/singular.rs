//! Singular strata `Z_k` of rank-one matrices and the Hecke recursion on them.

use crate::arith::check_prime;
use crate::coset::double_coset_nf;
use crate::error::{domain, Result};
use crate::exact::{p_valuation, rat, rat_int, rat_to_string, Mat2Q, Rat};
use num_integer::Roots;
use num_traits::{One, Zero};
use serde::Serialize;

/// A nonzero rational matrix with zero determinant, viewed at the prime `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularPoint {
    matrix: Mat2Q,
    p: u64,
}

impl SingularPoint {
    pub fn new(matrix: Mat2Q, p: u64) -> Result<Self> {
        check_prime(p)?;
        if matrix.is_zero() {
            return domain("the zero matrix lies in no stratum");
        }
        if !matrix.det().is_zero() {
            return domain(format!("{matrix} is not singular"));
        }
        Ok(SingularPoint { matrix, p })
    }

    pub fn matrix(&self) -> &Mat2Q {
        &self.matrix
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

/// The stratum index `k` with `s ∈ Z_k`: the minimum p-adic valuation of the entries.
pub fn singular_stratum_index(s: &SingularPoint) -> i64 {
    content_valuation(&s.matrix, s.p).expect("nonzero matrix")
}

fn content_valuation(m: &Mat2Q, p: u64) -> Option<i64> {
    m.entries()
        .iter()
        .filter_map(|x| p_valuation(x, p).ok().and_then(|v| v.finite()))
        .min()
}

fn indicator(k: i64, p: u64) -> impl Fn(&Mat2Q) -> Rat {
    move |m| {
        if content_valuation(m, p) == Some(k) {
            Rat::one()
        } else {
            Rat::zero()
        }
    }
}

/// Representatives of the right cosets in `Γ diag(1, 1/p) Γ`.
pub fn singular_lemma_reps(p: u64) -> Vec<Mat2Q> {
    let ip = rat(1, p as i64);
    let mut reps = vec![Mat2Q::diag(Rat::one(), ip.clone())];
    for n in 0..p as i64 {
        reps.push(Mat2Q::new(ip.clone(), rat(n, p as i64), Rat::zero(), Rat::one()));
    }
    reps
}

fn hecke_average(reps: &[Mat2Q], f: &dyn Fn(&Mat2Q) -> Rat, x: &Mat2Q) -> Rat {
    let total = reps
        .iter()
        .fold(Rat::zero(), |acc, h| acc + f(&(h * x)));
    total / rat_int(reps.len() as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub input: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub p: u64,
    pub checks: Vec<Check>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable report")
    }
}

fn rat_check(input: String, expected: Rat, got: Rat) -> Check {
    Check {
        input,
        pass: expected == got,
        expected: rat_to_string(&expected),
        got: rat_to_string(&got),
    }
}

fn diag0(p: u64, j: i64) -> Mat2Q {
    let pj = if j >= 0 {
        rat_int(p as i64).pow(j as i32)
    } else {
        rat(1, p as i64).pow((-j) as i32)
    };
    Mat2Q::diag(Rat::zero(), pj)
}

/// Exact check of the Hecke recursion on the singular strata.
///
/// For `g = diag(1, 1/p)`: `T_g 1_{Z_0}` is `1/(p+1)` on `Z_0`, `p/(p+1)` on
/// `Z_1` and zero elsewhere. For `g = diag(1/p, 1/p)`: `T_g 1_{Z_k} = 1_{Z_{k+1}}`.
pub fn verify_singular_hecke(p: u64) -> Result<LemmaReport> {
    check_prime(p)?;
    let reps = singular_lemma_reps(p);
    let g = Mat2Q::diag(Rat::one(), rat(1, p as i64));
    let mut checks = Vec::new();

    let g_coset = double_coset_nf(&g)?.coset;
    let same_coset = reps
        .iter()
        .all(|h| double_coset_nf(h).map(|nf| nf.coset == g_coset).unwrap_or(false));
    let distinct = reps.iter().enumerate().all(|(i, a)| {
        reps[i + 1..]
            .iter()
            .all(|b| !(a * &b.inv().expect("invertible")).is_sl2z())
    });
    checks.push(Check {
        input: format!("right cosets of Γ{g}Γ"),
        expected: format!("{} distinct representatives in the double coset", p + 1),
        got: format!("{} listed, same double coset: {same_coset}, distinct: {distinct}", reps.len()),
        pass: same_coset && distinct && reps.len() as u64 == p + 1,
    });

    let f0 = indicator(0, p);
    for j in -1..=2i64 {
        let x = diag0(p, j);
        let expected = match j {
            0 => rat(1, p as i64 + 1),
            1 => rat(p as i64, p as i64 + 1),
            _ => Rat::zero(),
        };
        let got = hecke_average(&reps, &f0, &x);
        checks.push(rat_check(format!("(T_g f_0)({x}), g = {g}"), expected, got));
    }

    let shift = [Mat2Q::scalar(rat(1, p as i64))];
    let pi = p as i64;
    for k in 0..=1i64 {
        let fk = indicator(k, p);
        let fk1 = indicator(k + 1, p);
        for j in -1..=3i64 {
            let x0 = diag0(p, j);
            let e = x0.d.clone();
            let rotated = Mat2Q::new(e.clone(), &e * rat_int(pi + 1), e.clone(), &e * rat_int(pi + 1));
            for x in [&Mat2Q::from_i64(0, 1, 0, pi) * &x0, x0, rotated] {
                let got = hecke_average(&shift, &fk, &x);
                checks.push(rat_check(
                    format!("(T_s f_{k})({x}) against f_{}, s = {}", k + 1, shift[0]),
                    fk1(&x),
                    got,
                ));
            }
        }
    }

    Ok(LemmaReport {
        lemma: "singular".into(),
        p,
        checks,
    })
}

/// Exact roots of `p·x² − (p+1)·x + 1 = 0` with the exponents `β` solving `x = p^{-β}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticRoots {
    pub roots: Vec<Rat>,
    pub betas: Vec<i64>,
}

pub fn singular_quadratic_roots(p: u64) -> Result<QuadraticRoots> {
    check_prime(p)?;
    let (a, b, c) = (p as i128, -(p as i128 + 1), 1i128);
    let disc = b * b - 4 * a * c;
    let s = disc.sqrt();
    if s * s != disc {
        return domain("discriminant is not a square");
    }
    let mut roots: Vec<Rat> = [-b - s, -b + s]
        .iter()
        .map(|num| Rat::new((*num).into(), (2 * a).into()))
        .collect();
    roots.dedup();
    let betas = roots
        .iter()
        .map(|x| -p_valuation(x, p).ok().and_then(|v| v.finite()).unwrap_or(0))
        .collect();
    Ok(QuadraticRoots { roots, betas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn point(m: Mat2Q, p: u64) -> SingularPoint {
        SingularPoint::new(m, p).unwrap()
    }

    #[test]
    fn index_examples() {
        for k in 0..4 {
            let m = Mat2Q::diag(Rat::zero(), rat_int(2).pow(k));
            assert_eq!(singular_stratum_index(&point(m, 2)), k as i64);
        }
        assert_eq!(singular_stratum_index(&point(Mat2Q::from_i64(0, 3, 0, 6), 3)), 1);
        let m = Mat2Q::new(Rat::zero(), rat(1, 4), Rat::zero(), rat(3, 2));
        assert_eq!(singular_stratum_index(&point(m, 2)), -2);
    }

    #[test]
    fn rejects_bad_points() {
        assert!(SingularPoint::new(Mat2Q::from_i64(0, 0, 0, 0), 2).is_err());
        assert!(SingularPoint::new(Mat2Q::identity(), 2).is_err());
        assert!(SingularPoint::new(Mat2Q::from_i64(0, 1, 0, 0), 4).is_err());
    }

    #[test]
    fn lemma_holds_for_small_primes() {
        for p in [2, 3, 5, 7] {
            let r = verify_singular_hecke(p).unwrap();
            assert!(r.all_pass(), "{:?}", r.checks.iter().find(|c| !c.pass));
        }
    }

    #[test]
    fn lemma_values_at_two() {
        let r = verify_singular_hecke(2).unwrap();
        let got: Vec<&str> = r.checks[1..5].iter().map(|c| c.got.as_str()).collect();
        assert_eq!(got, ["0/1", "1/3", "2/3", "0/1"]);
        let js = r.to_json_value();
        assert_eq!(js["lemma"], "singular");
        assert!(js["checks"][0]["pass"].as_bool().unwrap());
    }

    #[test]
    fn quadratic_roots() {
        for p in [2u64, 3, 5, 11] {
            let q = singular_quadratic_roots(p).unwrap();
            assert_eq!(q.roots, vec![rat(1, p as i64), Rat::one()]);
            assert_eq!(q.betas, vec![1, 0]);
            let pr = rat_int(p as i64);
            for x in &q.roots {
                assert_eq!((&pr + Rat::one()) * x, Rat::one() + &pr * x * x);
            }
        }
    }

    fn sl2() -> impl Strategy<Value = Mat2Q> {
        proptest::collection::vec(0..2usize, 0..8).prop_map(|w| {
            let s = Mat2Q::from_i64(0, -1, 1, 0);
            let t = Mat2Q::from_i64(1, 1, 0, 1);
            w.iter()
                .fold(Mat2Q::identity(), |acc, &i| &acc * if i == 0 { &s } else { &t })
        })
    }

    fn rank_one() -> impl Strategy<Value = Mat2Q> {
        (-6i64..7, 1i64..7, -6i64..7, 1i64..7, -9i64..10, -9i64..10).prop_filter_map(
            "nonzero",
            |(u1, d1, u2, d2, w1, w2)| {
                if (u1 == 0 && u2 == 0) || (w1 == 0 && w2 == 0) {
                    return None;
                }
                let (u1, u2) = (rat(u1, d1), rat(u2, d2));
                let (w1, w2) = (rat_int(w1), rat_int(w2));
                Some(Mat2Q::new(&u1 * &w1, &u1 * &w2, &u2 * &w1, &u2 * &w2))
            },
        )
    }

    proptest! {
        #[test]
        fn index_is_bi_invariant(m in rank_one(), g in sl2(), h in sl2(), flip in any::<bool>(), p in prop::sample::select(vec![2u64, 3, 5])) {
            let h = if flip { &h * &Mat2Q::from_i64(1, 0, 0, -1) } else { h };
            let k = singular_stratum_index(&point(m.clone(), p));
            let moved = &(&g * &m) * &h;
            prop_assert_eq!(singular_stratum_index(&point(moved, p)), k);
        }

        #[test]
        fn recursion_holds_off_the_diagonal(m in rank_one(), p in prop::sample::select(vec![2u64, 3, 5])) {
            let reps = singular_lemma_reps(p);
            let got = hecke_average(&reps, &indicator(0, p), &m);
            let expected = match content_valuation(&m, p).unwrap() {
                0 => rat(1, p as i64 + 1),
                1 => rat(p as i64, p as i64 + 1),
                _ => Rat::zero(),
            };
            prop_assert_eq!(got, expected);
        }
    }
}
