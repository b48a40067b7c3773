//! Modular and multiplicative arithmetic on machine words.
//!
//! Every product of two residues goes through [`mul_mod`], which widens to
//! `u128`; swapping that one function is enough to move the crate onto a
//! different backend.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{ensure_domain, Result};

/// Default number of integers covered by one sieve segment.
pub const DEFAULT_SEGMENT: usize = 1 << 20;

/// A least non-negative residue `[g]_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }
}

/// Reduces a signed integer to its least non-negative residue modulo `n`.
pub fn mod_reduce(g: i128, n: u64) -> Result<Residue> {
    ensure_domain!(n >= 1, "modulus must be at least 1");
    Ok(Residue {
        value: g.rem_euclid(n as i128) as u64,
        modulus: n,
    })
}

#[inline]
pub(crate) fn rem_i(g: i128, n: u64) -> u64 {
    g.rem_euclid(n as i128) as u64
}

/// `a * b mod m` with a double-width intermediate.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn pow_mod_raw(base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut b = base % m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// `b^e mod m` by repeated squaring.
pub fn pow_mod(b: u64, e: u64, m: u64) -> Result<Residue> {
    ensure_domain!(m >= 1, "modulus must be at least 1");
    Ok(Residue {
        value: pow_mod_raw(b, e, m),
        modulus: m,
    })
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn isqrt(x: u64) -> u64 {
    if x < 2 {
        return x;
    }
    let mut r = libm::sqrt(x as f64) as u64;
    while r.checked_mul(r).map_or(true, |s| s > x) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= x) {
        r += 1;
    }
    r
}

/// Prime factorization as strictly increasing `(prime, exponent)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// The empty factorization of 1.
    pub fn one() -> Self {
        Self {
            factors: Vec::new(),
        }
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Multiplies the factors back together; `None` on overflow.
    pub fn product(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &(p, e)| {
            (0..e).try_fold(acc, |acc, _| acc.checked_mul(p))
        })
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Euler's totient of the factored integer.
    pub fn totient(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// Exponent of `p` in the factored integer (0 when absent).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality for every `u64`.
///
/// Miller-Rabin with the first twelve primes as witnesses, which has no
/// strong pseudoprimes below 3.3e24.
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if m == p {
            return true;
        }
        if m % p == 0 {
            return false;
        }
    }
    let s = (m - 1).trailing_zeros();
    let d = (m - 1) >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod_raw(a, d, m);
        if x == 1 || x == m - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, m);
            if x == m - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's variant of Pollard rho; returns a nontrivial divisor of odd composite `n`.
fn rho_divisor(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = y;
        let m = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = rho_divisor(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Complete factorization of `x >= 2`.
pub fn factorize(x: u64) -> Result<Factorization> {
    ensure_domain!(x >= 2, "cannot factor {x}");
    let mut rest = x;
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p < 1000 && p * p <= rest {
        while rest % p == 0 {
            primes.push(p);
            rest /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        split_into(rest, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { factors })
}

pub fn is_squarefree(x: u64) -> bool {
    match x {
        0 => false,
        1 => true,
        _ => factorize(x).is_ok_and(|f| f.is_squarefree()),
    }
}

/// `p ‖ x`: `p` divides `x` exactly once.
pub fn exactly_divides(p: u64, x: u64) -> bool {
    p > 1 && x % p == 0 && (x / p) % p != 0
}

// Descends from a known multiple of the order through its prime divisors.
fn order_from_multiple(n: u64, m: u64, multiple: &Factorization) -> u64 {
    let mut t = multiple.product().expect("group order fits in u64");
    for &(p, e) in multiple.factors() {
        for _ in 0..e {
            if pow_mod_raw(n, t / p, m) == 1 {
                t /= p;
            } else {
                break;
            }
        }
    }
    t
}

/// Multiplicative order of `n` modulo `m`.
pub fn mult_order(n: u64, m: u64) -> Result<u64> {
    ensure_domain!(m >= 2, "modulus must be at least 2, got {m}");
    ensure_domain!(gcd(n % m, m) == 1, "gcd({n}, {m}) != 1");
    let phi = factorize(m)?.totient();
    if phi == 1 {
        return Ok(1);
    }
    Ok(order_from_multiple(n % m, m, &factorize(phi)?))
}

/// Whether `n` generates the unit group modulo the prime `m`.
pub fn is_primitive_root(n: u64, m: u64) -> Result<bool> {
    ensure_domain!(is_prime(m), "{m} is not prime");
    ensure_domain!(n % m != 0, "{n} is not a unit modulo {m}");
    if m == 2 {
        return Ok(true);
    }
    let group = factorize(m - 1)?;
    let ok = group.primes().all(|p| pow_mod_raw(n, (m - 1) / p, m) != 1);
    Ok(ok)
}

/// The `count` smallest primitive roots of the prime `m` in `(1, m)`.
pub fn smallest_primitive_roots(m: u64, count: usize) -> Result<Vec<u64>> {
    ensure_domain!(is_prime(m), "{m} is not prime");
    if m == 2 {
        return Ok(Vec::new());
    }
    let group = factorize(m - 1).map(|f| f.primes().collect::<Vec<_>>())?;
    Ok((2..m)
        .filter(|&g| group.iter().all(|&p| pow_mod_raw(g, (m - 1) / p, m) != 1))
        .take(count)
        .collect())
}

#[inline]
pub(crate) fn jacobi_raw(a: u64, n: u64) -> i8 {
    let mut a = a % n;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz & 1 == 1 && (n & 7 == 3 || n & 7 == 5) {
            sign = -sign;
        }
        if a & 3 == 3 && n & 3 == 3 {
            sign = -sign;
        }
        core::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi(a: i128, n: u64) -> Result<i8> {
    ensure_domain!(n % 2 == 1, "Jacobi symbol needs an odd modulus, got {n}");
    Ok(jacobi_raw(rem_i(a, n), n))
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit as usize + 1];
    let mut out = Vec::new();
    for i in 2..=limit as usize {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit as usize {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Calls `f` on every prime in `[lo, hi]` in increasing order, holding at most
/// one segment of `segment` flags in memory.
pub fn for_each_prime(lo: u64, hi: u64, segment: usize, mut f: impl FnMut(u64)) {
    let lo = lo.max(2);
    if lo > hi {
        return;
    }
    let segment = segment.max(64) as u64;
    let base = simple_sieve(isqrt(hi));
    let mut flags = vec![true; segment as usize];
    let mut start = lo;
    loop {
        let end = start.saturating_add(segment - 1).min(hi);
        let len = (end - start + 1) as usize;
        flags[..len].fill(true);
        for &p in &base {
            if p * p > end {
                break;
            }
            let first = (p * p).max(start.div_ceil(p) * p);
            let mut j = first;
            while j <= end {
                flags[(j - start) as usize] = false;
                j += p;
            }
        }
        for (i, &is_p) in flags[..len].iter().enumerate() {
            if is_p {
                f(start + i as u64);
            }
        }
        if end == hi {
            break;
        }
        start = end + 1;
    }
}

/// The primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    primes_in_segmented(lo, hi, DEFAULT_SEGMENT)
}

pub fn primes_in_segmented(lo: u64, hi: u64, segment: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_prime(lo, hi, segment, |p| out.push(p));
    out
}

/// Smallest-prime-factor table for `0..=limit`.
pub fn spf_table(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        for &p in &primes {
            let ip = i * p as usize;
            if p > spf[i] || ip > limit {
                break;
            }
            spf[ip] = p;
        }
    }
    spf
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_examples() {
        assert_eq!(mod_reduce(7, 3).unwrap().value(), 1);
        assert_eq!(mod_reduce(-1, 5).unwrap().value(), 4);
        assert_eq!(mod_reduce(0, 9).unwrap().value(), 0);
        assert!(mod_reduce(3, 0).is_err());
    }

    #[test]
    fn pow_examples() {
        assert_eq!(pow_mod(10, 6, 7).unwrap().value(), 1);
        assert_eq!(pow_mod(3, 8, 17).unwrap().value(), 16);
        assert_eq!(pow_mod(12345, 0, 97).unwrap().value(), 1);
        assert_eq!(pow_mod(5, 0, 1).unwrap().value(), 0);
        assert!(pow_mod(2, 3, 0).is_err());
        // near-word-size modulus exercises the wide intermediate
        let m = u64::MAX - 58; // prime
        assert_eq!(pow_mod(m - 1, 2, m).unwrap().value(), 1);
    }

    #[test]
    fn order_examples() {
        assert_eq!(mult_order(10, 7).unwrap(), 6);
        assert_eq!(mult_order(2, 7).unwrap(), 3);
        assert_eq!(mult_order(3, 5).unwrap(), 4);
        assert_eq!(mult_order(2, 9).unwrap(), 6);
        assert!(mult_order(4, 6).is_err());
    }

    #[test]
    fn primitive_root_examples() {
        assert!(is_primitive_root(10, 7).unwrap());
        assert!(!is_primitive_root(2, 7).unwrap());
        assert!(is_primitive_root(3, 17).unwrap());
        assert!(is_primitive_root(2, 9).is_err());
        assert_eq!(smallest_primitive_roots(7, 5).unwrap(), [3, 5]);
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(2, 15).unwrap(), 1);
        assert_eq!(jacobi(1, 21).unwrap(), 1);
        assert_eq!(jacobi(3, 5).unwrap(), -1);
        assert_eq!(jacobi(6, 15).unwrap(), 0);
        assert_eq!(jacobi(-1, 7).unwrap(), -1);
        assert!(jacobi(3, 8).is_err());
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(19));
        assert!(!is_prime(1));
        assert!(!is_prime(561));
        assert!(is_prime(u64::MAX - 58));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(11).unwrap().factors(), &[(11, 1)]);
        assert_eq!(
            factorize(999_999).unwrap().factors(),
            &[(3, 3), (7, 1), (11, 1), (13, 1), (37, 1)]
        );
        let big = 4_294_967_291u64 * 4_294_967_279;
        assert_eq!(
            factorize(big).unwrap().factors(),
            &[(4_294_967_279, 1), (4_294_967_291, 1)]
        );
        assert!(factorize(1).is_err());
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(primes_in(2, 10), [2, 3, 5, 7]);
        assert!(primes_in(14, 16).is_empty());
        assert!(primes_in(0, 1).is_empty());
        let lo = 9_000_000;
        let got = primes_in_segmented(lo, lo + 100, 64);
        let want: Vec<u64> = (lo..=lo + 100).filter(|&x| is_prime(x)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn exact_division() {
        assert!(exactly_divides(11, 11));
        assert!(!exactly_divides(3, 9));
        assert!(exactly_divides(3, 12));
        assert!(!exactly_divides(5, 12));
    }

    #[test]
    fn spf_matches_factorization() {
        let spf = spf_table(1000);
        for x in 2..=1000u64 {
            assert_eq!(spf[x as usize] as u64, factorize(x).unwrap().factors()[0].0);
        }
    }
}
