//! Machine-word number theory used by the enumeration kernels.

use crate::error::{param, HeckeError, Result};
use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = 17u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Rejects non-primes with a parameter error.
pub fn check_prime(p: u64) -> Result<u64> {
    if is_prime(p) {
        Ok(p)
    } else {
        param(format!("{p} is not prime"))
    }
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Dedekind psi: n * prod_{p | n} (1 + 1/p). This is the number of right
/// SL2(Z)-cosets in the double coset of diag(1, n).
pub fn dedekind_psi(n: u64) -> u64 {
    let mut acc = n;
    for (p, _) in factorize(n) {
        acc = acc / p * (p + 1);
    }
    acc
}

/// psi(n) for every n <= bound (index 0 unused).
pub fn psi_table(bound: usize) -> Vec<u64> {
    let mut psi: Vec<u64> = (0..=bound as u64).collect();
    let mut composite = vec![false; bound + 1];
    for p in 2..=bound {
        if composite[p] {
            continue;
        }
        let mut m = 2 * p;
        while m <= bound {
            composite[m] = true;
            m += p;
        }
        let mut m = p;
        while m <= bound {
            psi[m] = psi[m] / p as u64 * (p as u64 + 1);
            m += p;
        }
    }
    psi
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i as u64))
        .collect()
}

pub fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| HeckeError::Overflow(format!("{base}^{exp}")))
}

/// All positive integers <= bound whose prime divisors lie in `primes`,
/// ascending.
pub fn smooth_numbers(primes: &[u64], bound: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for &p in primes {
        let mut extra = Vec::new();
        for &m in &out {
            let mut v = m;
            while let Some(next) = v.checked_mul(p) {
                if next > bound {
                    break;
                }
                extra.push(next);
                v = next;
            }
        }
        out.extend(extra);
    }
    out.retain(|&m| m <= bound);
    out.sort_unstable();
    out
}

/// Validates a set of primes: each prime, no repeats. Returns it sorted.
pub fn check_prime_set(primes: &[u64]) -> Result<Vec<u64>> {
    let mut v = primes.to_vec();
    v.sort_unstable();
    for w in v.windows(2) {
        if w[0] == w[1] {
            return param(format!("prime {} repeated", w[0]));
        }
    }
    for &p in &v {
        check_prime(p)?;
    }
    Ok(v)
}

/// Inverse of `a` modulo `m` for gcd(a, m) = 1.
pub fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let g = a.rem_euclid(m).extended_gcd(&m);
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m))
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// p-adic valuation of a nonzero machine integer.
pub fn val_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}
