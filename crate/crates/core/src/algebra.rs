//! The Hecke algebra: finitely supported functions on double cosets with
//! convolution, involution and the Hecke-operator representation.

use crate::action::finite::{act_index, integral_reps, orbit_table, OrbitTable};
use crate::coset::{coset_inverse, integral_nf, integral_rep_shapes, r_gamma, DoubleCosetNF};
use crate::error::{domain, HeckeError, Result};
use crate::exact::{parse_rat, rat_to_string, Rat};
use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// Exact Gaussian rational.
pub type Coeff = Complex<Rat>;

pub fn coeff_int(n: i64) -> Coeff {
    Complex::new(Rat::from_integer(n.into()), Rat::zero())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeElement {
    terms: BTreeMap<DoubleCosetNF, Coeff>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::basis(DoubleCosetNF::identity())
    }

    /// The characteristic function `[c]` of a double coset.
    pub fn basis(c: DoubleCosetNF) -> Self {
        Self::from_terms([(c, coeff_int(1))])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (DoubleCosetNF, Coeff)>) -> Self {
        let mut e = Self::zero();
        for (c, v) in terms {
            e.add_term(c, v);
        }
        e
    }

    pub fn add_term(&mut self, c: DoubleCosetNF, v: Coeff) {
        let slot = self.terms.entry(c).or_insert_with(Coeff::zero);
        *slot = &*slot + v;
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DoubleCosetNF, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, c: &DoubleCosetNF) -> Coeff {
        self.terms.get(c).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.keys().all(|c| c.is_integral())
    }

    pub fn add(&self, o: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (c, v) in o.terms() {
            out.add_term(c.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, s: &Coeff) -> HeckeElement {
        Self::from_terms(self.terms().map(|(c, v)| (c.clone(), v * s)))
    }

    /// JSON array of `{coset, coeff_re, coeff_im}` sorted by `(r, n)`.
    pub fn to_json_value(&self) -> serde_json::Value {
        self.terms()
            .map(|(c, v)| {
                serde_json::json!({
                    "coset": c.to_json_value(),
                    "coeff_re": rat_to_string(&v.re),
                    "coeff_im": rat_to_string(&v.im),
                })
            })
            .collect::<Vec<_>>()
            .into()
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let bad = || HeckeError::Parse(format!("expected array of Hecke terms, got {v}"));
        let mut out = Self::zero();
        for t in v.as_array().ok_or_else(bad)? {
            let c = DoubleCosetNF::from_json_value(t.get("coset").ok_or_else(bad)?)?;
            let part = |k: &str| -> Result<Rat> {
                match t.get(k) {
                    None => Ok(Rat::zero()),
                    Some(serde_json::Value::String(s)) => parse_rat(s),
                    Some(serde_json::Value::Number(n)) if n.is_i64() => {
                        Ok(Rat::from_integer(n.as_i64().unwrap().into()))
                    }
                    Some(_) => Err(bad()),
                }
            };
            out.add_term(c, Complex::new(part("coeff_re")?, part("coeff_im")?));
        }
        Ok(out)
    }
}

type ProductTable = Arc<Vec<(u64, u64, u64)>>;

/// Structure constants of `[(1, n1)]·[(1, n2)]` as `(content, level, c)`.
fn primitive_product(n1: u64, n2: u64) -> ProductTable {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), ProductTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(n1, n2)) {
        return v.clone();
    }
    let xs = integral_rep_shapes(n1);
    let ys = integral_rep_shapes(n2);
    let counts: HashMap<(u64, u64), u64> = xs
        .par_iter()
        .fold(HashMap::new, |mut acc, &(k1, m1, l1)| {
            for &(k2, m2, l2) in &ys {
                let prod = [
                    (k1 * k2) as i64,
                    (k1 * m2 + m1 * l2) as i64,
                    0,
                    (l1 * l2) as i64,
                ];
                *acc.entry(integral_nf(prod)).or_insert(0u64) += 1;
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let mut out: Vec<(u64, u64, u64)> = counts
        .into_iter()
        .map(|((g, n), cnt)| {
            let r = crate::arith::dedekind_psi(n);
            debug_assert_eq!(cnt % r, 0);
            (g, n, cnt / r)
        })
        .collect();
    out.sort_unstable();
    let out = Arc::new(out);
    cache.lock().unwrap().insert((n1, n2), out.clone());
    out
}

/// Convolution product. The coefficient of `[z]` in `[x]·[y]` is the
/// number of pairs of right coset representatives whose product lies in
/// `ΓzΓ`, divided by `R(z)`.
pub fn hecke_mul(f1: &HeckeElement, f2: &HeckeElement) -> HeckeElement {
    let pairs: Vec<(&DoubleCosetNF, &Coeff, &DoubleCosetNF, &Coeff)> = f1
        .terms()
        .flat_map(|(x, a)| f2.terms().map(move |(y, b)| (x, a, y, b)))
        .collect();
    let partials: Vec<Vec<(DoubleCosetNF, Coeff)>> = pairs
        .par_iter()
        .map(|&(x, a, y, b)| {
            let scale = x.r() * y.r();
            let ab = a * b;
            primitive_product(x.n(), y.n())
                .iter()
                .map(|&(g, n, c)| {
                    let r = &scale * Rat::from_integer(g.into());
                    let z = DoubleCosetNF::new(r, n).expect("positive scale");
                    (z, &ab * coeff_int(c as i64))
                })
                .collect()
        })
        .collect();
    HeckeElement::from_terms(partials.into_iter().flatten())
}

/// `f*(c) = conj(f(c^{-1}))`.
pub fn hecke_star(f: &HeckeElement) -> HeckeElement {
    HeckeElement::from_terms(f.terms().map(|(c, v)| (coset_inverse(c), v.conj())))
}

/// `Σ coeff·R(c)`, a character of the algebra.
pub fn degree(f: &HeckeElement) -> Coeff {
    f.terms()
        .fold(Coeff::zero(), |acc, (c, v)| acc + v * coeff_int(r_gamma(c) as i64))
}

/// Matrix of `Σ_c coeff_c · R(c) T_c` on Γ-invariant functions of
/// M2(Z/N), in the basis of orbit indicators: `(Oφ)(x) = Σ_c coeff_c Σ_h φ(h·x)`.
#[derive(Clone, Debug)]
pub struct HeckeOperator {
    table: Arc<OrbitTable>,
    dim: usize,
    entries: Vec<Coeff>,
}

impl PartialEq for HeckeOperator {
    fn eq(&self, o: &Self) -> bool {
        self.modulus() == o.modulus() && self.entries == o.entries
    }
}

impl HeckeOperator {
    pub fn modulus(&self) -> u64 {
        self.table.modulus()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Coeff {
        &self.entries[i * self.dim + j]
    }

    pub fn identity(n: u64) -> Result<Self> {
        hecke_to_operator(&HeckeElement::one(), n)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &HeckeOperator) -> HeckeOperator {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let entries = (0..d * d)
            .into_par_iter()
            .map(|ij| {
                let (i, j) = (ij / d, ij % d);
                (0..d).fold(Coeff::zero(), |acc, k| {
                    let a = self.entry(i, k);
                    if a.is_zero() {
                        acc
                    } else {
                        acc + a * other.entry(k, j)
                    }
                })
            })
            .collect();
        HeckeOperator {
            table: self.table.clone(),
            dim: d,
            entries,
        }
    }

    /// Applies the operator to a function given by its orbit values.
    pub fn apply(&self, orbit_values: &[Coeff]) -> Vec<Coeff> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(Coeff::zero(), |acc, j| acc + self.entry(i, j) * &orbit_values[j])
            })
            .collect()
    }
}

pub fn hecke_to_operator(f: &HeckeElement, n: u64) -> Result<HeckeOperator> {
    if !f.is_integral() {
        return domain("operator representation needs integral support");
    }
    let table = orbit_table(n)?;
    let dim = table.orbit_count();
    let mut entries = vec![Coeff::zero(); dim * dim];
    for (c, v) in f.terms() {
        let reps = integral_reps(c)?;
        for i in 0..dim {
            let x = table.rep(i);
            for &h in &reps {
                let j = table.orbit_of(act_index(h, x, n));
                let slot = &mut entries[i * dim + j];
                *slot = &*slot + v;
            }
        }
    }
    Ok(HeckeOperator {
        table,
        dim,
        entries,
    })
}

/// Checks `O(f1·f2) = O(f1)∘O(f2)` exactly at modulus `n`.
pub fn representation_holds(f1: &HeckeElement, f2: &HeckeElement, n: u64) -> Result<bool> {
    let lhs = hecke_to_operator(&hecke_mul(f1, f2), n)?;
    let rhs = hecke_to_operator(f1, n)?.compose(&hecke_to_operator(f2, n)?);
    Ok(lhs == rhs)
}

impl One for HeckeElement {
    fn one() -> Self {
        HeckeElement::one()
    }
}

impl std::ops::Mul for HeckeElement {
    type Output = HeckeElement;
    fn mul(self, o: HeckeElement) -> HeckeElement {
        hecke_mul(&self, &o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use proptest::prelude::*;

    fn cz(a: u64, d: u64) -> DoubleCosetNF {
        DoubleCosetNF::integral(a, d).unwrap()
    }

    fn b(a: u64, d: u64) -> HeckeElement {
        HeckeElement::basis(cz(a, d))
    }

    /// Independent oracle: multiply exact representative matrices and
    /// classify products by the normal form engine.
    fn brute_mul(x: &DoubleCosetNF, y: &DoubleCosetNF) -> HeckeElement {
        use crate::coset::{double_coset_nf, right_coset_reps};
        let mut counts: BTreeMap<DoubleCosetNF, i64> = BTreeMap::new();
        for p in right_coset_reps(x).reps {
            for q in right_coset_reps(y).reps {
                *counts.entry(double_coset_nf(&(&p * &q)).unwrap().coset).or_default() += 1;
            }
        }
        HeckeElement::from_terms(counts.into_iter().map(|(z, k)| {
            let r = r_gamma(&z) as i64;
            assert_eq!(k % r, 0);
            (z, coeff_int(k / r))
        }))
    }

    #[test]
    fn unit_and_examples() {
        let x = b(1, 6).add(&b(2, 4).scale(&Complex::new(rat(1, 2), rat_int(3))));
        assert_eq!(hecke_mul(&HeckeElement::one(), &x), x);
        assert_eq!(hecke_mul(&x, &HeckeElement::one()), x);
        assert_eq!(hecke_mul(&b(1, 2), &b(1, 2)), b(1, 4).add(&b(2, 2).scale(&coeff_int(3))));
        assert_eq!(hecke_mul(&b(1, 2), &b(1, 3)), b(1, 6));
    }

    #[test]
    fn structure_constants_match_brute_force() {
        for (a1, d1) in [(1, 2), (1, 4), (1, 6), (2, 2), (1, 9), (3, 6)] {
            for (a2, d2) in [(1, 2), (1, 3), (1, 8), (2, 4)] {
                let fast = hecke_mul(&b(a1, d1), &b(a2, d2));
                assert_eq!(fast, brute_mul(&cz(a1, d1), &cz(a2, d2)), "{a1},{d1} x {a2},{d2}");
            }
        }
        let half = DoubleCosetNF::new(rat(1, 2), 3).unwrap();
        assert_eq!(
            hecke_mul(&HeckeElement::basis(half.clone()), &b(1, 2)),
            brute_mul(&half, &cz(1, 2))
        );
    }

    #[test]
    fn hecke_relation_at_small_primes() {
        for p in [2u64, 3, 5, 7] {
            let lhs = hecke_mul(&b(1, p), &b(1, p));
            let rhs = b(1, p * p).add(&b(p, p).scale(&coeff_int(p as i64 + 1)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn star_examples() {
        assert_eq!(hecke_star(&HeckeElement::one()), HeckeElement::one());
        assert_eq!(
            hecke_star(&b(1, 6)),
            HeckeElement::basis(DoubleCosetNF::new(rat(1, 6), 6).unwrap())
        );
        let x = b(1, 6).scale(&Complex::new(rat(2, 3), rat(-1, 5)));
        assert_eq!(hecke_star(&hecke_star(&x)), x);
        assert_eq!(hecke_star(&x).coeff(&coset_inverse(&cz(1, 6))).im, rat(1, 5));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&HeckeElement::one()), coeff_int(1));
        assert_eq!(degree(&b(1, 2)), coeff_int(3));
        assert_eq!(degree(&hecke_mul(&b(1, 2), &b(1, 2))), coeff_int(9));
    }

    #[test]
    fn operator_examples() {
        for n in [2u64, 3] {
            let id = HeckeOperator::identity(n).unwrap();
            for i in 0..id.dim() {
                for j in 0..id.dim() {
                    let want = if i == j { coeff_int(1) } else { Coeff::zero() };
                    assert_eq!(id.entry(i, j), &want);
                }
            }
        }
        let op = hecke_to_operator(&b(1, 2), 2).unwrap();
        let ones = vec![coeff_int(1); op.dim()];
        assert!(op.apply(&ones).iter().all(|v| *v == coeff_int(3)));
        assert!(representation_holds(&b(1, 2), &b(1, 3), 6).unwrap());
        let half = HeckeElement::basis(DoubleCosetNF::new(rat(1, 2), 2).unwrap());
        assert!(matches!(hecke_to_operator(&half, 2), Err(HeckeError::Domain(_))));
    }

    #[test]
    fn representation_on_generators() {
        let gens = [b(1, 2), b(1, 3), b(1, 4), b(2, 2)];
        for n in [2u64, 3, 4, 6] {
            for f1 in &gens {
                for f2 in &gens {
                    assert!(representation_holds(f1, f2, n).unwrap());
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let x = b(1, 6).add(&HeckeElement::basis(DoubleCosetNF::new(rat(1, 2), 2).unwrap())
            .scale(&Complex::new(rat(1, 3), rat_int(-2))));
        let v = x.to_json_value();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 2);
        assert_eq!(arr[0]["coset"]["r"], "1/2");
        assert_eq!(arr[0]["coeff_im"], "-2/1");
        assert_eq!(HeckeElement::from_json_value(&v).unwrap(), x);
    }

    fn small_coset() -> impl Strategy<Value = DoubleCosetNF> {
        prop::sample::select(crate::coset::integral_cosets_up_to(36, None))
            .prop_map(|(a, d)| DoubleCosetNF::integral(a, d).unwrap())
    }

    fn element() -> impl Strategy<Value = HeckeElement> {
        prop::collection::vec((small_coset(), -3i64..=3, -2i64..=2), 1..3).prop_map(|ts| {
            HeckeElement::from_terms(
                ts.into_iter()
                    .map(|(c, re, im)| (c, Complex::new(rat_int(re), rat_int(im)))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn associative(x in element(), y in element(), z in element()) {
            prop_assert_eq!(hecke_mul(&hecke_mul(&x, &y), &z), hecke_mul(&x, &hecke_mul(&y, &z)));
        }

        #[test]
        fn commutative_and_star_antimultiplicative(x in element(), y in element()) {
            let xy = hecke_mul(&x, &y);
            prop_assert_eq!(&xy, &hecke_mul(&y, &x));
            prop_assert_eq!(hecke_star(&xy), hecke_mul(&hecke_star(&y), &hecke_star(&x)));
            prop_assert_eq!(degree(&xy), degree(&x) * degree(&y));
        }
    }
}
