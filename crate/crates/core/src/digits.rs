//! Base-`n` expansions of `1/m`.
//!
//! For `gcd(n, m) = 1` the expansion is purely periodic with period equal to
//! the multiplicative order of `n` modulo `m`. Digits come from the remainder
//! recurrence `r_0 = 1`, `r_k = [n r_{k-1}]_m`, `a_k = (n r_{k-1} - r_k) / m`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{gcd, mult_order, pow_mod_raw};
use crate::error::{ensure_domain, Error, Result};

/// Default bound on the number of digits an expansion may store.
pub const DEFAULT_DIGIT_CAP: u64 = 100_000_000;

/// Largest `n^d` (in bits) that [`prefix_floor`] will materialize.
pub const PREFIX_FLOOR_BIT_CAP: u64 = 1 << 24;

fn check_pair(m: u64, n: u64) -> Result<()> {
    ensure_domain!(m >= 2, "modulus must be at least 2, got {m}");
    ensure_domain!(n >= 2, "base must be at least 2, got {n}");
    ensure_domain!(gcd(n, m) == 1, "base {n} is not coprime to {m}");
    Ok(())
}

/// Unbounded stream of `(a_k, r_k)` for `k = 1, 2, ...`.
#[derive(Debug, Clone)]
pub struct DigitStream {
    m: u64,
    n: u64,
    r: u64,
}

impl DigitStream {
    pub fn new(m: u64, n: u64) -> Result<Self> {
        check_pair(m, n)?;
        Ok(Self { m, n, r: 1 })
    }
}

impl Iterator for DigitStream {
    type Item = (u64, u64);

    #[inline]
    fn next(&mut self) -> Option<(u64, u64)> {
        let wide = self.n as u128 * self.r as u128;
        let r = (wide % self.m as u128) as u64;
        let a = ((wide - r as u128) / self.m as u128) as u64;
        self.r = r;
        Some((a, r))
    }
}

/// One full period of the base-`n` expansion of `1/m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitExpansion {
    modulus: u64,
    base: u64,
    digits: Vec<u64>,
}

impl DigitExpansion {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn period(&self) -> u64 {
        self.digits.len() as u64
    }

    /// `a_1 .. a_T`.
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// `a_k` for any `k >= 1`, extended periodically.
    pub fn digit(&self, k: u64) -> u64 {
        assert!(k >= 1, "digits are indexed from 1");
        self.digits[((k - 1) % self.period()) as usize]
    }

    /// Checks `m * sum a_k n^(T-k) = n^T - 1`, i.e. the stored period
    /// reproduces `1/m` exactly.
    pub fn reconstructs(&self) -> bool {
        let n = BigUint::from(self.base);
        let mut acc = BigUint::zero();
        for &a in &self.digits {
            acc = acc * &n + a;
        }
        acc * self.modulus + 1u32 == n.pow(self.period() as u32)
    }
}

/// Expands `1/m` in base `n` with the default storage cap.
pub fn expand(m: u64, n: u64) -> Result<DigitExpansion> {
    expand_with_cap(m, n, DEFAULT_DIGIT_CAP)
}

pub fn expand_with_cap(m: u64, n: u64, cap: u64) -> Result<DigitExpansion> {
    check_pair(m, n)?;
    let period = mult_order(n, m)?;
    if period > cap {
        return Err(Error::Resource(format!(
            "period {period} of 1/{m} in base {n} exceeds cap {cap}"
        )));
    }
    let mut stream = DigitStream::new(m, n)?;
    let mut digits = Vec::with_capacity(period as usize);
    let mut last = 1;
    for _ in 0..period {
        let (a, r) = stream.next().expect("stream is unbounded");
        digits.push(a);
        last = r;
    }
    if last != 1 {
        return Err(Error::InvariantViolation(format!(
            "remainder after {period} steps is {last}, not 1"
        )));
    }
    Ok(DigitExpansion {
        modulus: m,
        base: n,
        digits,
    })
}

/// `a_k(m)` from the closed form `(n [n^(k-1)]_m - [n^k]_m) / m`.
pub fn digit_at(m: u64, n: u64, k: u64) -> Result<u64> {
    check_pair(m, n)?;
    ensure_domain!(k >= 1, "digit index starts at 1");
    let prev = pow_mod_raw(n, k - 1, m) as u128;
    let cur = pow_mod_raw(n, k, m) as u128;
    Ok(((n as u128 * prev - cur) / m as u128) as u64)
}

/// A finite string `(a_1, ..., a_l)` of base-`n` digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitString {
    base: u64,
    digits: Vec<u64>,
}

impl DigitString {
    pub fn new(base: u64, digits: Vec<u64>) -> Result<Self> {
        ensure_domain!(base >= 2, "base must be at least 2");
        ensure_domain!(!digits.is_empty(), "digit string must be nonempty");
        ensure_domain!(
            digits.iter().all(|&a| a < base),
            "digit out of range for base {base}"
        );
        Ok(Self { base, digits })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }
}

/// `sum a_k n^(k-1)`: `a_1` is the least significant digit here.
pub fn string_value(s: &DigitString) -> BigUint {
    s.digits
        .iter()
        .rev()
        .fold(BigUint::zero(), |acc, &a| acc * s.base + a)
}

/// Value of the purely periodic expansion `0.(a_1 ... a_l)(a_1 ... a_l)...`,
/// which is `(sum a_k n^(l-k)) / (n^l - 1)` in lowest terms.
pub fn repeating_value(s: &DigitString) -> BigRational {
    let n = BigInt::from(s.base);
    let numer = s
        .digits
        .iter()
        .fold(BigInt::zero(), |acc, &a| acc * &n + a);
    let denom = n.pow(s.digits.len() as u32) - BigInt::one();
    BigRational::new(numer, denom)
}

/// Left rotation `(a_{t+1}, ..., a_T, a_1, ..., a_t)` of one period.
pub fn rotate(e: &DigitExpansion, t: u64) -> DigitString {
    let mut digits = e.digits.clone();
    let shift = (t % e.period()) as usize;
    digits.rotate_left(shift);
    DigitString {
        base: e.base,
        digits,
    }
}

/// `floor(n^d / m)`, computed as the digit polynomial `sum_{k<=d} a_k n^(d-k)`
/// and confirmed against direct division.
pub fn prefix_floor(m: u64, n: u64, d: u64) -> Result<BigUint> {
    check_pair(m, n)?;
    let bits = d.saturating_mul(64 - n.leading_zeros() as u64);
    if bits > PREFIX_FLOOR_BIT_CAP {
        return Err(Error::Resource(format!(
            "{n}^{d} exceeds {PREFIX_FLOOR_BIT_CAP} bits"
        )));
    }
    let mut digit_side = BigUint::zero();
    for (a, _) in DigitStream::new(m, n)?.take(d as usize) {
        digit_side = digit_side * n + a;
    }
    let floor_side = BigUint::from(n).pow(d as u32) / m;
    if digit_side != floor_side {
        return Err(Error::InvariantViolation(format!(
            "digit sum and floor(n^d/m) differ for m={m}, n={n}, d={d}"
        )));
    }
    Ok(digit_side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_bigint::BigInt;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn expand_examples() {
        let e = expand(7, 10).unwrap();
        assert_eq!(e.period(), 6);
        assert_eq!(e.digits(), &[1, 4, 2, 8, 5, 7]);
        let e = expand(3, 10).unwrap();
        assert_eq!(e.digits(), &[3]);
        let e = expand(5, 3).unwrap();
        assert_eq!(e.digits(), &[0, 1, 2, 1]);
        assert!(e.reconstructs());
    }

    #[test]
    fn expand_rejects_bad_input() {
        assert!(matches!(expand(4, 2), Err(Error::Domain(_))));
        assert!(matches!(expand(1, 10), Err(Error::Domain(_))));
        assert!(matches!(expand(10007, 10), Ok(_)));
        assert!(matches!(
            expand_with_cap(10007, 5, 100),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn digit_at_examples() {
        assert_eq!(digit_at(7, 10, 1).unwrap(), 1);
        assert_eq!(digit_at(7, 10, 7).unwrap(), 1);
        assert_eq!(digit_at(5, 3, 3).unwrap(), 2);
        assert!(digit_at(7, 10, 0).is_err());
    }

    #[test]
    fn string_value_examples() {
        let s = DigitString::new(10, vec![1, 4, 2, 8, 5, 7]).unwrap();
        assert_eq!(string_value(&s), BigUint::from(758_241u32));
        let s = DigitString::new(7, vec![0]).unwrap();
        assert_eq!(string_value(&s), BigUint::zero());
        let s = DigitString::new(9, vec![5]).unwrap();
        assert_eq!(string_value(&s), BigUint::from(5u32));
        assert!(DigitString::new(10, vec![10]).is_err());
        assert!(DigitString::new(10, vec![]).is_err());
    }

    #[test]
    fn repeating_value_examples() {
        let s = DigitString::new(10, vec![1, 4, 2, 8, 5, 7]).unwrap();
        assert_eq!(repeating_value(&s), ratio(1, 7));
        let s = DigitString::new(10, vec![4, 2, 8, 5, 7, 1]).unwrap();
        assert_eq!(repeating_value(&s), ratio(3, 7));
        let s = DigitString::new(6, vec![0, 0, 0]).unwrap();
        assert_eq!(repeating_value(&s), ratio(0, 1));
    }

    #[test]
    fn rotate_examples() {
        let e = expand(7, 10).unwrap();
        let r = rotate(&e, 1);
        assert_eq!(r.digits(), &[4, 2, 8, 5, 7, 1]);
        assert_eq!(repeating_value(&r), ratio(3, 7));
        assert_eq!(rotate(&e, 0).digits(), e.digits());
        assert_eq!(rotate(&e, 6).digits(), e.digits());
    }

    #[test]
    fn prefix_floor_examples() {
        assert_eq!(prefix_floor(7, 10, 3).unwrap(), BigUint::from(142u32));
        assert_eq!(prefix_floor(7, 10, 0).unwrap(), BigUint::zero());
        assert_eq!(prefix_floor(5, 3, 4).unwrap(), BigUint::from(16u32));
        assert!(matches!(
            prefix_floor(7, 10, u64::MAX / 8),
            Err(Error::Resource(_))
        ));
    }
}
