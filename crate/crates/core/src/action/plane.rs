//! The upper half-plane: Möbius action, reduction to the standard
//! fundamental domain, Hecke points and the `T_F` average.

use super::finite::integral_reps;
use crate::arith::{check_prime_set, smooth_numbers};
use crate::coset::{r_gamma, DoubleCosetNF};
use crate::error::{param, Result};
use crate::exact::{Mat2Q, Mat2Z};
use crate::zeta::zeta_finite_set;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Slack used for the boundary decisions in [`reduce_fd`].
pub const FD_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<HPoint> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return param(format!("point must lie in the upper half-plane, got {x}+{y}i"));
        }
        Ok(HPoint { x, y })
    }

    pub fn i() -> HPoint {
        HPoint { x: 0.0, y: 1.0 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Total order by `(x, y)`.
    pub fn canonical_cmp(&self, o: &HPoint) -> Ordering {
        self.x.total_cmp(&o.x).then(self.y.total_cmp(&o.y))
    }
}

pub(crate) fn mobius_f64(g: [f64; 4], t: HPoint) -> HPoint {
    let [a, b, c, d] = g;
    let (re, im) = (c * t.x + d, c * t.y);
    let den = re * re + im * im;
    let num_re = a * t.x + b;
    let num_im = a * t.y;
    HPoint {
        x: (num_re * re + num_im * im) / den,
        y: (g[0] * g[3] - g[1] * g[2]) * t.y / den,
    }
}

/// `(aτ + b) / (cτ + d)`.
pub fn mobius(g: &Mat2Q, t: HPoint) -> HPoint {
    mobius_f64(g.to_f64(), t)
}

/// Reduces `τ` into `{|Re τ| <= 1/2, |τ| >= 1}` and returns the reducing
/// element `γ` with `γ·τ = τ'`. Boundary points land on the copies with
/// `Re τ' <= 0`.
pub fn reduce_fd(t: HPoint) -> (HPoint, Mat2Z) {
    let mut p = t;
    let mut g: [i128; 4] = [1, 0, 0, 1];
    loop {
        let n = (p.x + 0.5).floor();
        if n != 0.0 {
            p.x -= n;
            let n = n as i128;
            g = [g[0] - n * g[2], g[1] - n * g[3], g[2], g[3]];
        }
        if p.norm_sqr() < 1.0 - FD_EPS {
            let r = p.norm_sqr();
            p = HPoint {
                x: -p.x / r,
                y: p.y / r,
            };
            g = [-g[2], -g[3], g[0], g[1]];
            continue;
        }
        break;
    }
    if p.x > FD_EPS && (p.norm_sqr() - 1.0).abs() <= FD_EPS {
        p = HPoint { x: -p.x, y: p.y };
        g = [-g[2], -g[3], g[0], g[1]];
    }
    let z = |v: i128| num_bigint::BigInt::from(v);
    (p, Mat2Z::new(z(g[0]), z(g[1]), z(g[2]), z(g[3])))
}

/// True when `t` satisfies the fundamental-domain inequalities up to `FD_EPS`.
pub fn in_fundamental_domain(t: HPoint) -> bool {
    t.x.abs() <= 0.5 + FD_EPS && t.norm_sqr() >= 1.0 - FD_EPS
}

/// `reduce_fd(h·τ)` for each right coset representative `h` of `c`, sorted.
pub fn hecke_points(c: &DoubleCosetNF, t: HPoint) -> Result<Vec<HPoint>> {
    use rayon::prelude::*;
    let reps = integral_reps(c)?;
    let mut pts: Vec<HPoint> = reps
        .par_iter()
        .map(|h| reduce_fd(mobius_f64(h.map(|e| e as f64), t)).0)
        .collect();
    pts.sort_by(|a, b| a.canonical_cmp(b));
    Ok(pts)
}

/// Truncated `ζ_{S_F}(β)^{-1} Σ det(s)^{-β} R(s) (T_s f)(τ)` over integral
/// double cosets with F-smooth determinant `<= det_bound`.
pub fn t_f_average(
    primes: &[u64],
    beta: f64,
    f: &(dyn Fn(HPoint) -> f64 + Sync),
    t: HPoint,
    det_bound: u64,
) -> Result<f64> {
    if !(beta > 1.0) {
        return param(format!("T_F needs beta > 1, got {beta}"));
    }
    let ps = check_prime_set(primes)?;
    if ps.is_empty() {
        return param("prime set must be nonempty");
    }
    let z = zeta_finite_set(&ps, beta)?;
    let mut terms = Vec::new();
    for det in smooth_numbers(&ps, det_bound) {
        let mut a = 1u64;
        while a * a <= det {
            if det % (a * a) == 0 {
                let c = DoubleCosetNF::integral(a, det / a)?;
                let pts = hecke_points(&c, t)?;
                let mean = pts.iter().map(|&q| f(q)).sum::<f64>() / pts.len() as f64;
                terms.push((det as f64).powf(-beta) * r_gamma(&c) as f64 * mean);
            }
            a += 1;
        }
    }
    Ok(crate::zeta::pairwise_sum(&terms) / z)
}

/// Points as CSV with header `x,y`.
pub fn points_csv(pts: &[HPoint]) -> String {
    let mut s = String::from("x,y\n");
    for p in pts {
        s.push_str(&format!("{},{}\n", p.x, p.y));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use proptest::prelude::*;

    fn near(a: HPoint, b: HPoint, tol: f64) -> bool {
        (a.x - b.x).abs() <= tol && (a.y - b.y).abs() <= tol
    }

    fn check_reduction(t: HPoint) {
        let (r, g) = reduce_fd(t);
        assert!(g.det() == 1.into());
        assert!(in_fundamental_domain(r), "{r:?}");
        let back = mobius(&g.to_q(), t);
        let scale = 1.0 + r.norm_sqr().sqrt();
        assert!(near(back, r, 1e-10 * scale), "{back:?} vs {r:?}");
    }

    #[test]
    fn mobius_examples() {
        let t = HPoint::new(0.3, 0.7).unwrap();
        assert_eq!(mobius(&Mat2Q::identity(), t), t);
        let half = mobius(&Mat2Q::diag(rat_int(1), rat_int(2)), HPoint::i());
        assert!(near(half, HPoint { x: 0.0, y: 0.5 }, 1e-15));
        let shifted = mobius(&Mat2Q::from_i64(1, 1, 0, 1), HPoint::i());
        assert!(near(shifted, HPoint { x: 1.0, y: 1.0 }, 1e-15));
        assert!(HPoint::new(0.0, 0.0).is_err());
    }

    #[test]
    fn reduce_examples() {
        let (r, g) = reduce_fd(HPoint::i());
        assert_eq!((r, g), (HPoint::i(), Mat2Z::identity()));
        let (r, g) = reduce_fd(HPoint::new(5.0, 1.0).unwrap());
        assert_eq!(r, HPoint::i());
        assert_eq!(g, Mat2Z::from_i64(1, -5, 0, 1));
        check_reduction(HPoint::new(0.3, 0.2).unwrap());
        check_reduction(HPoint::new(-17.25, 1e-4).unwrap());
    }

    #[test]
    fn reduce_ties_go_left() {
        let (r, _) = reduce_fd(HPoint::new(0.5, 2.0).unwrap());
        assert_eq!(r, HPoint { x: -0.5, y: 2.0 });
        let theta = 1.0f64;
        let (r, _) = reduce_fd(HPoint::new(theta.cos() * 0.5, (1.0 - 0.25 * theta.cos().powi(2)).sqrt()).unwrap());
        assert!(r.x <= 0.0);
    }

    #[test]
    fn hecke_point_examples() {
        let two_i = HPoint { x: 0.0, y: 2.0 };
        assert_eq!(hecke_points(&DoubleCosetNF::identity(), two_i).unwrap(), vec![two_i]);
        let pts = hecke_points(&DoubleCosetNF::integral(1, 2).unwrap(), two_i).unwrap();
        let want = [
            HPoint { x: -0.5, y: 1.0 },
            HPoint { x: 0.0, y: 1.0 },
            HPoint { x: 0.0, y: 4.0 },
        ];
        assert_eq!(pts.len(), 3);
        for (p, w) in pts.iter().zip(want) {
            assert!(near(*p, w, 1e-14), "{p:?}");
        }
        for p in hecke_points(&DoubleCosetNF::integral(1, 2).unwrap(), HPoint::i()).unwrap() {
            assert!(in_fundamental_domain(p));
        }
        let half = DoubleCosetNF::new(rat(1, 2), 2).unwrap();
        assert!(hecke_points(&half, HPoint::i()).is_err());
    }

    #[test]
    fn hecke_point_counts() {
        let t = HPoint::new(0.1, 1.3).unwrap();
        for (a, d) in crate::coset::integral_cosets_up_to(100, None) {
            let c = DoubleCosetNF::integral(a, d).unwrap();
            assert_eq!(hecke_points(&c, t).unwrap().len() as u64, r_gamma(&c));
        }
    }

    #[test]
    fn t_f_average_examples() {
        let one = |_: HPoint| 1.0;
        let got = t_f_average(&[2], 3.0, &one, HPoint::i(), 4).unwrap();
        let want = (1.0 + 3.0 / 8.0 + 1.0 / 64.0 + 6.0 / 64.0) * 21.0 / 32.0;
        assert!((got - want).abs() < 1e-15);
        let mut last = 0.0;
        for k in 0..16 {
            let v = t_f_average(&[2], 3.0, &one, HPoint::i(), 1 << k).unwrap();
            assert!(v >= last && v <= 1.0 + 1e-12);
            last = v;
        }
        assert!((last - 1.0).abs() < 1e-6);
        let boxf = |p: HPoint| if p.y > 1.5 { 1.0 } else { 0.0 };
        let v = t_f_average(&[2, 3], 2.5, &boxf, HPoint::new(0.2, 1.1).unwrap(), 200).unwrap();
        assert!((0.0..=1.0).contains(&v));
        assert!(t_f_average(&[2], 1.0, &one, HPoint::i(), 4).is_err());
        assert!(t_f_average(&[], 3.0, &one, HPoint::i(), 4).is_err());
    }

    #[test]
    fn points_csv_has_header() {
        let s = points_csv(&[HPoint::i()]);
        assert_eq!(s, "x,y\n0,1\n");
    }

    fn sl2_word() -> impl Strategy<Value = Mat2Q> {
        prop::collection::vec((-4i64..=4, any::<bool>()), 0..4).prop_map(|steps| {
            let mut m = Mat2Q::identity();
            for (k, s) in steps {
                m = &m * &Mat2Q::from_i64(1, k, 0, 1);
                if s {
                    m = &m * &Mat2Q::from_i64(0, -1, 1, 0);
                }
            }
            m
        })
    }

    proptest! {
        #[test]
        fn reduction_postconditions(x in -50.0f64..50.0, y in 1e-3f64..20.0) {
            check_reduction(HPoint::new(x, y).unwrap());
        }

        #[test]
        fn reduction_is_idempotent(x in -0.49f64..0.49, y in 1.01f64..5.0) {
            prop_assume!(x * x + y * y > 1.0 + 1e-6);
            let t = HPoint::new(x, y).unwrap();
            let (r, g) = reduce_fd(t);
            prop_assert_eq!(r, t);
            prop_assert_eq!(g, Mat2Z::identity());
        }

        #[test]
        fn mobius_is_an_action(g in sl2_word(), h in sl2_word(), k in 1i64..4,
                               x in -2.0f64..2.0, y in 0.2f64..3.0) {
            let t = HPoint::new(x, y).unwrap();
            let h = &h * &Mat2Q::diag(rat_int(1), rat_int(k));
            let lhs = mobius(&(&g * &h), t);
            let rhs = mobius(&g, mobius(&h, t));
            let scale = 1.0 + lhs.x.abs() + lhs.y.abs() + 1.0 / lhs.y;
            prop_assert!(near(lhs, rhs, 1e-10 * scale));
        }
    }
}
