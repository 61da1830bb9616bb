//! Functions on M2(Z/N) and the Hecke operators acting on them.
//!
//! A residue `[[a,b],[c,d]] mod N` is encoded as the index
//! `((a·N + b)·N + c)·N + d`. SL2(Z) acts by left multiplication through
//! its image SL2(Z/N), which is generated by the images of
//! `S = [[0,-1],[1,0]]` and `T = [[1,1],[0,1]]`.

use crate::coset::{right_coset_reps, DoubleCosetNF};
use crate::error::{domain, param, HeckeError, Result};
use crate::exact::{rat_to_f64, rat_to_string, Mat2Q, Rat};
use num_traits::{ToPrimitive, Zero};
use std::collections::HashMap;
use std::fmt::Debug;
use std::sync::{Arc, Mutex, OnceLock};

/// Largest modulus accepted for dense residue tables.
pub const MAX_MODULUS: u64 = 64;

/// Decomposition of M2(Z/N) into left SL2(Z/N)-orbits. Orbits are numbered
/// by increasing smallest member.
#[derive(Debug)]
pub struct OrbitTable {
    n: u64,
    orbit_of: Vec<u32>,
    reps: Vec<u32>,
    sizes: Vec<u32>,
}

fn find(parent: &mut [u32], mut i: u32) -> u32 {
    while parent[i as usize] != i {
        let up = parent[parent[i as usize] as usize];
        parent[i as usize] = up;
        i = up;
    }
    i
}

impl OrbitTable {
    fn build(n: u64) -> OrbitTable {
        let size = (n * n * n * n) as usize;
        let mut parent: Vec<u32> = (0..size as u32).collect();
        let gens = [[0, -1, 1, 0], [1, 1, 0, 1]];
        for x in 0..size {
            for g in gens {
                let y = act_index(g, x, n);
                let (rx, ry) = (find(&mut parent, x as u32), find(&mut parent, y as u32));
                if rx != ry {
                    let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
                    parent[hi as usize] = lo;
                }
            }
        }
        let mut orbit_of = vec![0u32; size];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        let mut id_of_root: HashMap<u32, u32> = HashMap::new();
        for (x, slot) in orbit_of.iter_mut().enumerate() {
            let root = find(&mut parent, x as u32);
            let id = *id_of_root.entry(root).or_insert_with(|| {
                reps.push(x as u32);
                sizes.push(0);
                (reps.len() - 1) as u32
            });
            *slot = id;
            sizes[id as usize] += 1;
        }
        OrbitTable {
            n,
            orbit_of,
            reps,
            sizes,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn residue_count(&self) -> usize {
        self.orbit_of.len()
    }

    pub fn orbit_count(&self) -> usize {
        self.reps.len()
    }

    pub fn orbit_of(&self, residue: usize) -> usize {
        self.orbit_of[residue] as usize
    }

    pub fn rep(&self, orbit: usize) -> usize {
        self.reps[orbit] as usize
    }

    pub fn size(&self, orbit: usize) -> usize {
        self.sizes[orbit] as usize
    }
}

/// Shared orbit table for modulus `n` (built once per process).
pub fn orbit_table(n: u64) -> Result<Arc<OrbitTable>> {
    if !(2..=MAX_MODULUS).contains(&n) {
        return param(format!("modulus must lie in [2, {MAX_MODULUS}], got {n}"));
    }
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<OrbitTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return Ok(t.clone());
    }
    let table = Arc::new(OrbitTable::build(n));
    Ok(cache.lock().unwrap().entry(n).or_insert(table).clone())
}

pub fn encode(m: [i64; 4], n: u64) -> usize {
    let n = n as i64;
    m.iter()
        .fold(0i64, |acc, &e| acc * n + e.rem_euclid(n)) as usize
}

pub fn decode(x: usize, n: u64) -> [i64; 4] {
    let n = n as usize;
    [
        (x / (n * n * n)) as i64,
        (x / (n * n) % n) as i64,
        (x / n % n) as i64,
        (x % n) as i64,
    ]
}

/// Index of `h·x mod N`.
pub fn act_index(h: [i64; 4], x: usize, n: u64) -> usize {
    let m = decode(x, n);
    let nn = n as i64;
    let h: Vec<i64> = h.iter().map(|e| e.rem_euclid(nn)).collect();
    encode(
        [
            h[0] * m[0] + h[1] * m[2],
            h[0] * m[1] + h[1] * m[3],
            h[2] * m[0] + h[3] * m[2],
            h[2] * m[1] + h[3] * m[3],
        ],
        n,
    )
}

/// Integral representatives of the right cosets in `c` as machine matrices.
pub(crate) fn integral_reps(c: &DoubleCosetNF) -> Result<Vec<[i64; 4]>> {
    if !c.is_integral() {
        return domain(format!("coset {c} is not integral"));
    }
    right_coset_reps(c)
        .reps
        .iter()
        .map(|m| {
            let z = m.to_z().expect("integral coset");
            let e = [&z.a, &z.b, &z.c, &z.d].map(|x| x.to_i64());
            match e {
                [Some(a), Some(b), Some(c), Some(d)] => Ok([a, b, c, d]),
                _ => Err(HeckeError::Overflow(format!("representative {m}"))),
            }
        })
        .collect()
}

/// Value types a finite-level function may carry.
pub trait FnValue: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn div_int(&self, k: u64) -> Self;
    fn to_json(&self) -> serde_json::Value;
}

impl FnValue for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn div_int(&self, k: u64) -> Self {
        self / Rat::from_integer(k.into())
    }
    fn to_json(&self) -> serde_json::Value {
        rat_to_string(self).into()
    }
}

impl FnValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn div_int(&self, k: u64) -> Self {
        self / k as f64
    }
    fn to_json(&self) -> serde_json::Value {
        (*self).into()
    }
}

/// A function on M2(Z/N), stored on every residue.
#[derive(Clone, Debug)]
pub struct FiniteLevelFn<T> {
    table: Arc<OrbitTable>,
    values: Vec<T>,
    gamma_invariant: bool,
}

impl<T: PartialEq> PartialEq for FiniteLevelFn<T> {
    fn eq(&self, o: &Self) -> bool {
        self.table.n == o.table.n && self.values == o.values
    }
}

impl<T: FnValue> FiniteLevelFn<T> {
    pub fn from_residues(n: u64, values: Vec<T>) -> Result<Self> {
        let table = orbit_table(n)?;
        if values.len() != table.residue_count() {
            return param(format!(
                "expected {} residue values, got {}",
                table.residue_count(),
                values.len()
            ));
        }
        let gamma_invariant = (0..values.len())
            .all(|x| values[x] == values[table.rep(table.orbit_of(x))]);
        Ok(FiniteLevelFn {
            table,
            values,
            gamma_invariant,
        })
    }

    pub fn from_fn(n: u64, f: impl Fn([i64; 4]) -> T) -> Result<Self> {
        let size = orbit_table(n)?.residue_count();
        Self::from_residues(n, (0..size).map(|x| f(decode(x, n))).collect())
    }

    /// Builds a Γ-invariant function from one value per orbit.
    pub fn from_orbit_values(n: u64, orbit_values: &[T]) -> Result<Self> {
        let table = orbit_table(n)?;
        if orbit_values.len() != table.orbit_count() {
            return param(format!(
                "expected {} orbit values, got {}",
                table.orbit_count(),
                orbit_values.len()
            ));
        }
        let values = table
            .orbit_of
            .iter()
            .map(|&o| orbit_values[o as usize].clone())
            .collect();
        Ok(FiniteLevelFn {
            table,
            values,
            gamma_invariant: true,
        })
    }

    pub fn constant(n: u64, v: T) -> Result<Self> {
        let k = orbit_table(n)?.orbit_count();
        Self::from_orbit_values(n, &vec![v; k])
    }

    pub fn modulus(&self) -> u64 {
        self.table.n
    }

    pub fn table(&self) -> &Arc<OrbitTable> {
        &self.table
    }

    pub fn is_gamma_invariant(&self) -> bool {
        self.gamma_invariant
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn at(&self, m: [i64; 4]) -> &T {
        &self.values[encode(m, self.table.n)]
    }

    pub fn orbit_values(&self) -> Vec<T> {
        (0..self.table.orbit_count())
            .map(|o| self.values[self.table.rep(o)].clone())
            .collect()
    }

    /// `{N, orbits: [{rep, value}]}`; only meaningful for Γ-invariant functions.
    pub fn to_json_value(&self) -> serde_json::Value {
        let n = self.table.n;
        let orbits: Vec<_> = (0..self.table.orbit_count())
            .map(|o| {
                let r = self.table.rep(o);
                let m = decode(r, n);
                serde_json::json!({
                    "rep": [[m[0], m[1]], [m[2], m[3]]],
                    "value": self.values[r].to_json(),
                })
            })
            .collect();
        serde_json::json!({"N": n, "orbits": orbits})
    }
}

impl FiniteLevelFn<Rat> {
    pub fn to_f64(&self) -> FiniteLevelFn<f64> {
        FiniteLevelFn {
            table: self.table.clone(),
            values: self.values.iter().map(rat_to_f64).collect(),
            gamma_invariant: self.gamma_invariant,
        }
    }
}

/// `(T_c f)(x) = R(c)^{-1} Σ_h f(h·x)` over right coset representatives `h`.
pub fn hecke_apply_finite<T: FnValue>(
    c: &DoubleCosetNF,
    f: &FiniteLevelFn<T>,
) -> Result<FiniteLevelFn<T>> {
    if !f.gamma_invariant {
        return domain("Hecke operators act on Γ-invariant functions only");
    }
    let reps = integral_reps(c)?;
    let n = f.modulus();
    let k = reps.len() as u64;
    let orbit_values: Vec<T> = (0..f.table.orbit_count())
        .map(|o| {
            let x = f.table.rep(o);
            reps.iter()
                .fold(T::zero(), |acc, &h| acc.add(&f.values[act_index(h, x, n)]))
                .div_int(k)
        })
        .collect();
    FiniteLevelFn::from_orbit_values(n, &orbit_values)
}

/// Reduces an integral matrix modulo `n` into a residue index.
pub fn residue_of(m: &Mat2Q, n: u64) -> Result<usize> {
    let z = m
        .to_z()
        .ok_or_else(|| HeckeError::Domain(format!("{m} is not integral")))?;
    let nb = num_bigint::BigInt::from(n);
    let e = [&z.a, &z.b, &z.c, &z.d].map(|x| {
        num_integer::Integer::mod_floor(x, &nb)
            .to_i64()
            .expect("reduced residue")
    });
    Ok(encode(e, n))
}
