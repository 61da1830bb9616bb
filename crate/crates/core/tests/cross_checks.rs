use hecke_core::action::{hecke_apply_finite, hecke_points, t_f_average, FiniteLevelFn, HPoint};
use hecke_core::algebra::{coeff_int, hecke_mul, hecke_to_operator, Coeff, HeckeElement};
use hecke_core::arith::primes_up_to;
use hecke_core::coset::{r_gamma, DoubleCosetNF};
use hecke_core::exact::{rat, Rat};
use hecke_core::kms::{cell_mass, level_residues, mass_yf, LocalMeasureSpec, MassInterval};
use hecke_core::lab::{equidist_discrepancy, project_invariants, TestFunction};
use hecke_core::zeta::{closed_form, zeta_bruteforce, SemigroupSpec};
use num_complex::Complex;
use num_traits::Zero;

fn c(a: u64, d: u64) -> DoubleCosetNF {
    DoubleCosetNF::integral(a, d).unwrap()
}

#[test]
fn operator_of_basis_element_is_scaled_average() {
    let n = 4;
    let table = hecke_core::action::orbit_table(n).unwrap();
    let vals: Vec<Rat> = (0..table.orbit_count()).map(|i| rat(i as i64 * 7 % 5, 3)).collect();
    let f = FiniteLevelFn::from_orbit_values(n, &vals).unwrap();
    for coset in [c(1, 2), c(1, 3), c(2, 2), c(1, 4)] {
        let op = hecke_to_operator(&HeckeElement::basis(coset.clone()), n).unwrap();
        let cvals: Vec<Coeff> = vals.iter().map(|v| Complex::new(v.clone(), Rat::zero())).collect();
        let via_op = op.apply(&cvals);
        let avg = hecke_apply_finite(&coset, &f).unwrap().orbit_values();
        let r = Rat::from_integer(r_gamma(&coset).into());
        for (x, y) in via_op.iter().zip(&avg) {
            assert_eq!(x.re, &r * y);
            assert!(x.im.is_zero());
        }
    }
}

#[test]
fn hecke_relation_on_the_plane() {
    // [(1,2)]·[(1,3)] = [(1,6)], so the point multisets agree.
    let prod = hecke_mul(&HeckeElement::basis(c(1, 2)), &HeckeElement::basis(c(1, 3)));
    assert_eq!(prod, HeckeElement::from_terms([(c(1, 6), coeff_int(1))]));
    let t = HPoint::new(0.13, 1.7).unwrap();
    assert_eq!(hecke_points(&c(1, 6), t).unwrap().len(), 12);
}

#[test]
fn bruteforce_tracks_closed_form() {
    for (spec, beta, bound) in [
        (SemigroupSpec::Local(3), 2.5, 3u64.pow(16)),
        (SemigroupSpec::FiniteSet(vec![2, 3]), 3.0, 1 << 22),
        (SemigroupSpec::Full, 5.0, 2000),
    ] {
        let cf = closed_form(&spec, beta).unwrap();
        let bf = zeta_bruteforce(&spec, beta, bound).unwrap();
        assert!(bf <= cf && cf - bf < 1e-4, "{spec:?}: {bf} vs {cf}");
    }
}

#[test]
fn level_masses_sum_to_one() {
    for (p, beta, k) in [(2, 1.5, 2), (3, 2.5, 1), (2, 3.0, 3)] {
        let spec = LocalMeasureSpec::new(p, beta, k).unwrap();
        let total = level_residues(spec.modulus())
            .map(|x| cell_mass(&spec, x).unwrap())
            .fold(MassInterval::zero(), |a, b| a.add(&b));
        assert!(total.contains(1.0), "{total:?}");
        assert!(total.width() < 1e-9);
    }
}

#[test]
fn t_f_fixes_constants_up_to_truncation() {
    let t = HPoint::new(0.1, 1.3).unwrap();
    let v = t_f_average(&[2, 3], 3.0, &|_| 1.0, t, 5000).unwrap();
    assert!(v < 1.0 && v > 0.999);
}

#[test]
fn gl_indicator_projects_to_finite_mass() {
    let spec = LocalMeasureSpec::new(3, 2.5, 1).unwrap();
    let f = FiniteLevelFn::from_fn(3, |x| {
        let det = (x[0] * x[3] - x[1] * x[2]).rem_euclid(3);
        (det != 0) as u8 as f64
    })
    .unwrap();
    let out = project_invariants(&spec, &f, 3u64.pow(20)).unwrap();
    let expected = mass_yf(2.5, &[3]).unwrap();
    assert!(out.values().iter().all(|v| (v - expected).abs() < 1e-12));
}

#[test]
fn equidistribution_improves_along_primes() {
    let t = HPoint::new(0.0, 2.0).unwrap();
    let tests = hecke_core::lab::box_test_set();
    let ds: Vec<f64> = [2u64, 101, 2003]
        .iter()
        .map(|&p| equidist_discrepancy(&c(1, p), t, &tests).unwrap())
        .collect();
    assert!(ds[2] < ds[0], "{ds:?}");
    let one = [TestFunction::Constant { value: 1.0 }];
    for p in primes_up_to(50) {
        assert_eq!(equidist_discrepancy(&c(1, p), t, &one).unwrap(), 0.0);
    }
}
