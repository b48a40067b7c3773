//! Base-`B` expansions of `1/P` over `F_q[x]` for prime `q`, and the digit
//! sum `S_B(P)` over one period.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{factorize, gcd as gcd_u64, is_prime, pow_mod_raw, Factorization};
use crate::error::{ensure_domain, Error, Result};

/// Default bound on the number of digits [`ff_expand`] will store.
pub const DEFAULT_FF_PERIOD_CAP: u64 = 10_000_000;

/// Largest field size `q^deg P` the subgroup scanner will tabulate.
pub const SCAN_FIELD_CAP: u64 = 1 << 24;

/// A polynomial over `F_q`, coefficients ascending, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyFq {
    q: u64,
    coeffs: Vec<u64>,
}

fn check_q(q: u64) -> Result<()> {
    ensure_domain!(q < (1 << 32) && is_prime(q), "q = {q} must be a prime below 2^32");
    Ok(())
}

impl PolyFq {
    /// Reduces `coeffs` mod `q` and trims trailing zeros.
    pub fn new(q: u64, coeffs: Vec<u64>) -> Result<Self> {
        check_q(q)?;
        Ok(Self::raw(q, coeffs.into_iter().map(|c| c % q).collect()))
    }

    /// Signed coefficients, reduced into `[0, q)`.
    pub fn from_signed(q: u64, coeffs: &[i64]) -> Result<Self> {
        check_q(q)?;
        let c = coeffs
            .iter()
            .map(|&c| c.rem_euclid(q as i64) as u64)
            .collect();
        Ok(Self::raw(q, c))
    }

    fn raw(q: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { q, coeffs }
    }

    pub fn zero(q: u64) -> Result<Self> {
        Self::new(q, Vec::new())
    }

    pub fn one(q: u64) -> Result<Self> {
        Self::new(q, vec![1])
    }

    /// The monomial `x`.
    pub fn x(q: u64) -> Result<Self> {
        Self::new(q, vec![0, 1])
    }

    /// The polynomial whose coefficients are the base-`q` digits of `index`.
    pub fn from_index(q: u64, mut index: u64) -> Result<Self> {
        check_q(q)?;
        let mut c = Vec::new();
        while index > 0 {
            c.push(index % q);
            index /= q;
        }
        Ok(Self::raw(q, c))
    }

    /// Parses a comma-separated ascending coefficient list such as `1,1,1`.
    pub fn parse(q: u64, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Self::zero(q);
        }
        let mut c = Vec::new();
        for part in s.split(',') {
            let v: i64 = part
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("bad coefficient {part:?}")))?;
            c.push(v);
        }
        Self::from_signed(q, &c)
    }

    /// Ascending coefficients joined by commas; the zero polynomial is `0`.
    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return String::from("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| format!("{c}")).collect();
        parts.join(",")
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod_raw(a, self.q - 2, self.q)
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.q, other.q, "polynomials over different fields");
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.q;
        Self::raw(
            self.q,
            self.coeffs.iter().map(|&a| a * c % self.q).collect(),
        )
    }

    /// Scales to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.inv(self.lead()))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| (self.coeff(i) + other.coeff(i)) % self.q)
            .collect();
        Self::raw(self.q, c)
    }

    pub fn neg(&self) -> Self {
        self.scale(self.q - 1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return Self::raw(self.q, Vec::new());
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.q;
            }
        }
        Self::raw(self.q, c)
    }

    /// `(quotient, remainder)` with `deg rem < deg v`.
    pub fn divmod(&self, v: &Self) -> Result<(Self, Self)> {
        self.same_field(v);
        let dv = v
            .degree()
            .ok_or_else(|| Error::Domain(String::from("division by the zero polynomial")))?;
        let q = self.q;
        let mut r = self.coeffs.clone();
        if r.len() <= dv {
            return Ok((Self::raw(q, Vec::new()), self.clone()));
        }
        let inv = self.inv(v.lead());
        let mut quot = vec![0u64; r.len() - dv];
        for i in (0..quot.len()).rev() {
            let c = r[i + dv] * inv % q;
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in v.coeffs.iter().enumerate() {
                r[i + j] = (r[i + j] + (q - c) * b) % q;
            }
        }
        r.truncate(dv);
        Ok((Self::raw(q, quot), Self::raw(q, r)))
    }

    pub fn rem(&self, v: &Self) -> Result<Self> {
        Ok(self.divmod(v)?.1)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        self.same_field(other);
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Result<Self> {
        let mut base = self.rem(modulus)?;
        let mut acc = Self::raw(self.q, vec![1]).rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus)?;
            }
            base = base.mul(&base).rem(modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::raw(self.q, vec![1]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for PolyFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    DivMod,
    Gcd,
}

/// Result of [`poly_arith`]: a single polynomial, or quotient and remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyValue {
    Single(PolyFq),
    Pair(PolyFq, PolyFq),
}

/// Checked entry point for the ring operations.
pub fn poly_arith(op: PolyOp, u: &PolyFq, v: &PolyFq) -> Result<PolyValue> {
    ensure_domain!(u.q == v.q, "operands over F_{} and F_{}", u.q, v.q);
    Ok(match op {
        PolyOp::Add => PolyValue::Single(u.add(v)),
        PolyOp::Sub => PolyValue::Single(u.sub(v)),
        PolyOp::Mul => PolyValue::Single(u.mul(v)),
        PolyOp::Gcd => PolyValue::Single(u.gcd(v)),
        PolyOp::DivMod => {
            let (a, b) = u.divmod(v)?;
            PolyValue::Pair(a, b)
        }
    })
}

/// Distinct-degree test: `gcd(x^(q^i) - x, P) = 1` for `1 ≤ i ≤ deg P / 2`.
/// Constants are not irreducible.
pub fn is_irreducible(p: &PolyFq) -> bool {
    let d = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    let x = PolyFq::raw(p.q, vec![0, 1]);
    let mut h = x.clone();
    for _ in 0..d / 2 {
        h = h.pow_mod(p.q, p).expect("p is nonzero");
        if !h.sub(&x).gcd(p).is_one() {
            return false;
        }
    }
    true
}

/// All polynomials of exact degree `d` (any nonzero leading coefficient).
pub fn polys_of_degree(q: u64, d: u32) -> Result<impl Iterator<Item = PolyFq>> {
    check_q(q)?;
    let lo = q.checked_pow(d).ok_or_else(|| Error::Resource(format!("{q}^{d} overflows")))?;
    let hi = lo
        .checked_mul(q)
        .ok_or_else(|| Error::Resource(format!("{q}^{} overflows", d + 1)))?;
    Ok((lo..hi).map(move |i| PolyFq::from_index(q, i).expect("q checked")))
}

pub fn monic_polys(q: u64, d: u32) -> Result<impl Iterator<Item = PolyFq>> {
    check_q(q)?;
    let lo = q.checked_pow(d).ok_or_else(|| Error::Resource(format!("{q}^{d} overflows")))?;
    Ok((lo..2 * lo).map(move |i| PolyFq::from_index(q, i).expect("q checked")))
}

pub fn monic_irreducibles(q: u64, d: u32) -> Result<Vec<PolyFq>> {
    Ok(monic_polys(q, d)?.filter(is_irreducible).collect())
}

fn unit_group(p: &PolyFq) -> Result<(u64, Factorization)> {
    let d = p.degree().unwrap_or(0) as u32;
    let size = p
        .q
        .checked_pow(d)
        .ok_or_else(|| Error::Resource(format!("{}^{d} overflows", p.q)))?;
    let order = size - 1;
    if order == 1 {
        return Ok((1, Factorization::one()));
    }
    Ok((order, factorize(order)?))
}

/// Multiplicative order of `b` modulo the irreducible `p`.
pub fn mult_order_mod(b: &PolyFq, p: &PolyFq) -> Result<u64> {
    ensure_domain!(is_irreducible(p), "P = {p} is not irreducible");
    ensure_domain!(!b.rem(p)?.is_zero(), "B = {b} is divisible by P = {p}");
    let (n, fac) = unit_group(p)?;
    let mut t = n;
    for &(ell, _) in fac.factors() {
        while t % ell == 0 && b.pow_mod(t / ell, p)?.is_one() {
            t /= ell;
        }
    }
    Ok(t)
}

/// One period of the base-`B` expansion of `1/P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FFExpansion {
    p: PolyFq,
    b: PolyFq,
    digits: Vec<PolyFq>,
}

impl FFExpansion {
    pub fn p(&self) -> &PolyFq {
        &self.p
    }

    pub fn b(&self) -> &PolyFq {
        &self.b
    }

    pub fn period(&self) -> u64 {
        self.digits.len() as u64
    }

    pub fn digits(&self) -> &[PolyFq] {
        &self.digits
    }

    /// `P Σ a_k B^(T-k) = B^T - 1` as polynomials.
    pub fn reconstructs(&self) -> bool {
        let mut acc = PolyFq::raw(self.p.q, Vec::new());
        for a in &self.digits {
            acc = acc.mul(&self.b).add(a);
        }
        let one = PolyFq::raw(self.p.q, vec![1]);
        acc.mul(&self.p) == self.b.pow(self.digits.len() as u32).sub(&one)
    }
}

fn check_expansion_input(p: &PolyFq, b: &PolyFq) -> Result<()> {
    ensure_domain!(p.q == b.q, "P and B over different fields");
    ensure_domain!(b.degree().unwrap_or(0) >= 1, "B = {b} must have degree at least 1");
    ensure_domain!(is_irreducible(p), "P = {p} is not irreducible");
    ensure_domain!(p.gcd(b).is_one(), "P = {p} is not coprime to B = {b}");
    Ok(())
}

/// Unbounded stream of `(a_k, r_k)` from `B r_{k-1} = P a_k + r_k`, `r_0 = 1`.
#[derive(Debug, Clone)]
pub struct FFDigitStream {
    p: PolyFq,
    b: PolyFq,
    r: PolyFq,
}

impl FFDigitStream {
    pub fn new(p: &PolyFq, b: &PolyFq) -> Result<Self> {
        check_expansion_input(p, b)?;
        Ok(Self {
            p: p.clone(),
            b: b.clone(),
            r: PolyFq::raw(p.q, vec![1]),
        })
    }
}

impl Iterator for FFDigitStream {
    type Item = (PolyFq, PolyFq);

    fn next(&mut self) -> Option<(PolyFq, PolyFq)> {
        let (a, r) = self.b.mul(&self.r).divmod(&self.p).expect("P is nonzero");
        self.r = r.clone();
        Some((a, r))
    }
}

pub fn ff_expand(p: &PolyFq, b: &PolyFq) -> Result<FFExpansion> {
    ff_expand_with_cap(p, b, DEFAULT_FF_PERIOD_CAP)
}

pub fn ff_expand_with_cap(p: &PolyFq, b: &PolyFq, cap: u64) -> Result<FFExpansion> {
    check_expansion_input(p, b)?;
    let period = mult_order_mod(b, p)?;
    if period > cap {
        return Err(Error::Resource(format!("period {period} exceeds cap {cap}")));
    }
    let mut digits = Vec::with_capacity(period as usize);
    let mut last = PolyFq::raw(p.q, vec![1]);
    for (a, r) in FFDigitStream::new(p, b)?.take(period as usize) {
        digits.push(a);
        last = r;
    }
    if !last.is_one() {
        return Err(Error::InvariantViolation(format!(
            "remainder after {period} steps is {last}, not 1"
        )));
    }
    Ok(FFExpansion {
        p: p.clone(),
        b: b.clone(),
        digits,
    })
}

/// `S_B(P)` together with the coprimality facts the vanishing theorem needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RudnickCase {
    pub p: PolyFq,
    pub b: PolyFq,
    pub period: u64,
    pub sum: PolyFq,
    /// `gcd(P, B - 1) = 1`; `gcd(P, B) = 1` is a precondition.
    pub coprime_b_minus_1: bool,
}

impl RudnickCase {
    pub fn hypothesis(&self) -> bool {
        self.coprime_b_minus_1
    }

    pub fn vanishes(&self) -> bool {
        self.sum.is_zero()
    }

    /// The theorem is silent when the hypothesis fails.
    pub fn pass(&self) -> bool {
        !self.hypothesis() || self.vanishes()
    }
}

fn coprime_b_minus_1(p: &PolyFq, b: &PolyFq) -> bool {
    let one = PolyFq::raw(p.q, vec![1]);
    p.gcd(&b.sub(&one)).is_one()
}

/// `a_1 + ... + a_T` by streaming the digit recurrence.
pub fn rudnick_sum(p: &PolyFq, b: &PolyFq) -> Result<RudnickCase> {
    check_expansion_input(p, b)?;
    let period = mult_order_mod(b, p)?;
    let mut sum = PolyFq::raw(p.q, Vec::new());
    let mut last = PolyFq::raw(p.q, vec![1]);
    for (a, r) in FFDigitStream::new(p, b)?.take(period as usize) {
        sum = sum.add(&a);
        last = r;
    }
    if !last.is_one() {
        return Err(Error::InvariantViolation(format!(
            "remainder after {period} steps is {last}, not 1"
        )));
    }
    Ok(RudnickCase {
        coprime_b_minus_1: coprime_b_minus_1(p, b),
        p: p.clone(),
        b: b.clone(),
        period,
        sum,
    })
}

/// Per-`P` tables for evaluating `S_B(P)` for many `B`.
///
/// The remainders of one period are the powers of `B`, which form the unique
/// subgroup `H_T` of order `T` in `(F_q[x]/P)^×`. Division by `P` is linear,
/// so `Σ a_k = quot(B · Σ_{h ∈ H_T} h, P)`: one pass over the unit group
/// serves every base.
#[derive(Debug, Clone)]
pub struct RudnickField {
    p: PolyFq,
    d: usize,
    order: u64,
    fac: Factorization,
    /// `index(g^i)` for `i` in `0..order`.
    powers: Vec<u32>,
    /// discrete log of each nonzero element, by index.
    log: Vec<u32>,
    subgroup_sums: Vec<(u64, PolyFq)>,
}

fn poly_index(p: &PolyFq) -> u64 {
    p.coeffs.iter().rev().fold(0, |acc, &c| acc * p.q + c)
}

impl RudnickField {
    pub fn new(p: &PolyFq) -> Result<Self> {
        ensure_domain!(is_irreducible(p), "P = {p} is not irreducible");
        let p = p.monic();
        let d = p.degree().expect("irreducible has degree") ;
        let (order, fac) = unit_group(&p)?;
        if order + 1 > SCAN_FIELD_CAP {
            return Err(Error::Resource(format!(
                "field of size {} exceeds {SCAN_FIELD_CAP}",
                order + 1
            )));
        }
        let g = Self::generator(&p, order, &fac)?;
        let q = p.q;
        // repeated multiplication by g on a dense coefficient vector
        let mut powers = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; (order + 1) as usize];
        let mut cur = vec![0u64; d];
        cur[0] = 1;
        let gmul = g.coeffs.clone();
        let pc = &p.coeffs;
        let mut tmp = vec![0u64; d];
        let mut shifted = vec![0u64; d];
        for i in 0..order {
            let idx = cur.iter().rev().fold(0u64, |acc, &c| acc * q + c);
            if log[idx as usize] != u32::MAX {
                return Err(Error::InvariantViolation(format!(
                    "{g} repeats before exhausting the units mod {p}"
                )));
            }
            log[idx as usize] = i as u32;
            powers.push(idx as u32);
            // cur <- cur * g mod p, via x^j cur
            tmp.iter_mut().for_each(|c| *c = 0);
            shifted.copy_from_slice(&cur);
            for (j, &gj) in gmul.iter().enumerate() {
                if j > 0 {
                    let top = shifted[d - 1];
                    for k in (1..d).rev() {
                        shifted[k] = shifted[k - 1];
                    }
                    shifted[0] = 0;
                    if top != 0 {
                        for k in 0..d {
                            shifted[k] = (shifted[k] + (q - top) * pc[k]) % q;
                        }
                    }
                }
                if gj != 0 {
                    for k in 0..d {
                        tmp[k] = (tmp[k] + gj * shifted[k]) % q;
                    }
                }
            }
            core::mem::swap(&mut cur, &mut tmp);
        }
        if cur.first() != Some(&1) || cur[1..].iter().any(|&c| c != 0) {
            return Err(Error::InvariantViolation(format!("{g}^{order} != 1 mod {p}")));
        }
        Ok(Self {
            p,
            d,
            order,
            fac,
            powers,
            log,
            subgroup_sums: Vec::new(),
        })
    }

    fn generator(p: &PolyFq, order: u64, fac: &Factorization) -> Result<PolyFq> {
        for i in p.q..order + 1 {
            let g = PolyFq::from_index(p.q, i)?;
            let mut ok = true;
            for &(ell, _) in fac.factors() {
                if g.pow_mod(order / ell, p)?.is_one() {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(g);
            }
        }
        // degree-1 P: the constants carry the whole unit group
        for c in 1..p.q {
            let g = PolyFq::raw(p.q, vec![c]);
            if fac.factors().iter().all(|&(ell, _)| {
                !g.pow_mod(order / ell, p).expect("p nonzero").is_one()
            }) {
                return Ok(g);
            }
        }
        Err(Error::InvariantViolation(format!("no generator found mod {p}")))
    }

    pub fn p(&self) -> &PolyFq {
        &self.p
    }

    /// `|(F_q[x]/P)^×|`.
    pub fn group_order(&self) -> u64 {
        self.order
    }

    /// Order of the residue of `b`; `None` when `P | b`.
    pub fn order_of(&self, b: &PolyFq) -> Option<u64> {
        let r = b.rem(&self.p).ok()?;
        if r.is_zero() {
            return None;
        }
        let e = self.log[poly_index(&r) as usize] as u64;
        Some(self.order / gcd_u64(self.order, e))
    }

    /// `Σ_{h ∈ H_T} h` as a polynomial of degree `< deg P`.
    pub fn subgroup_sum(&mut self, t: u64) -> PolyFq {
        if let Some((_, s)) = self.subgroup_sums.iter().find(|(tt, _)| *tt == t) {
            return s.clone();
        }
        let q = self.p.q;
        let stride = (self.order / t) as usize;
        let mut acc = vec![0u64; self.d];
        for &idx in self.powers.iter().step_by(stride) {
            let mut v = idx as u64;
            for c in acc.iter_mut() {
                *c += v % q;
                v /= q;
            }
        }
        let s = PolyFq::raw(q, acc.into_iter().map(|c| c % q).collect());
        self.subgroup_sums.push((t, s.clone()));
        s
    }

    /// `S_B(P)` via the subgroup sum.
    pub fn case(&mut self, b: &PolyFq) -> Result<RudnickCase> {
        ensure_domain!(b.q == self.p.q, "P and B over different fields");
        ensure_domain!(b.degree().unwrap_or(0) >= 1, "B = {b} must have degree at least 1");
        let t = self
            .order_of(b)
            .ok_or_else(|| Error::Domain(format!("P = {} is not coprime to B = {b}", self.p)))?;
        let r = self.subgroup_sum(t);
        let sum = b.mul(&r).divmod(&self.p)?.0;
        Ok(RudnickCase {
            coprime_b_minus_1: coprime_b_minus_1(&self.p, b),
            p: self.p.clone(),
            b: b.clone(),
            period: t,
            sum,
        })
    }

    pub fn factorization(&self) -> &Factorization {
        &self.fac
    }
}

/// Tallies from [`rudnick_scan`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RudnickSummary {
    pub q: u64,
    /// Pairs with `gcd(P, B(B-1)) = 1`.
    pub tested: u64,
    pub passed: u64,
    pub failed: u64,
    /// Pairs with `gcd(P, B) = 1` but `P | B - 1`.
    pub outside_hypothesis: u64,
    /// Of those, how many still had a zero sum.
    pub outside_vanishing: u64,
    /// Pairs skipped because `P | B`.
    pub skipped: u64,
    /// Pairs also evaluated by the streaming recurrence.
    pub cross_checked: u64,
}

impl RudnickSummary {
    pub fn new(q: u64) -> Self {
        Self {
            q,
            ..Default::default()
        }
    }

    pub fn add(&mut self, case: &RudnickCase) {
        if case.hypothesis() {
            self.tested += 1;
            if case.vanishes() {
                self.passed += 1;
            } else {
                self.failed += 1;
            }
        } else {
            self.outside_hypothesis += 1;
            self.outside_vanishing += case.vanishes() as u64;
        }
    }

    pub fn merge(&mut self, other: &Self) {
        self.tested += other.tested;
        self.passed += other.passed;
        self.failed += other.failed;
        self.outside_hypothesis += other.outside_hypothesis;
        self.outside_vanishing += other.outside_vanishing;
        self.skipped += other.skipped;
        self.cross_checked += other.cross_checked;
    }
}

/// All `B` with `1 ≤ deg B ≤ max_deg`, any leading coefficient.
pub fn bases_up_to(q: u64, max_deg: u32) -> Result<Vec<PolyFq>> {
    let mut bases = Vec::new();
    for d in 1..=max_deg {
        bases.extend(polys_of_degree(q, d)?);
    }
    Ok(bases)
}

/// Monic irreducibles of degree `1..=max_deg`, by degree then index.
pub fn irreducibles_up_to(q: u64, max_deg: u32) -> Result<Vec<PolyFq>> {
    let mut out = Vec::new();
    for d in 1..=max_deg {
        out.extend(monic_irreducibles(q, d)?);
    }
    Ok(out)
}

/// `S_B(P)` for every base coprime to `P`, in the order of `bases`.
///
/// When `deg P ≤ stream_deg`, and for `B = x` always, the case is recomputed
/// with [`rudnick_sum`]; a disagreement is an invariant violation.
pub fn rudnick_cases(
    p: &PolyFq,
    bases: &[PolyFq],
    stream_deg: u32,
) -> Result<(Vec<RudnickCase>, RudnickSummary)> {
    let mut field = RudnickField::new(p)?;
    let x = PolyFq::x(p.q)?;
    let dp = p.degree().unwrap_or(0) as u32;
    let mut s = RudnickSummary::new(p.q);
    let mut cases = Vec::with_capacity(bases.len());
    for b in bases {
        if field.order_of(b).is_none() {
            s.skipped += 1;
            continue;
        }
        let case = field.case(b)?;
        if dp <= stream_deg || *b == x {
            let direct = rudnick_sum(p, b)?;
            if direct != case {
                return Err(Error::InvariantViolation(format!(
                    "S_B(P) for P = {p}, B = {b}: streamed {} vs subgroup {}",
                    direct.sum, case.sum
                )));
            }
            s.cross_checked += 1;
        }
        s.add(&case);
        cases.push(case);
    }
    Ok((cases, s))
}

/// Every monic irreducible `P` with `deg P ≤ max_deg_p` against `bases`.
pub fn rudnick_scan(
    q: u64,
    max_deg_p: u32,
    bases: &[PolyFq],
    stream_deg: u32,
    mut visit: impl FnMut(&RudnickCase),
) -> Result<RudnickSummary> {
    check_q(q)?;
    let mut s = RudnickSummary::new(q);
    for p in irreducibles_up_to(q, max_deg_p)? {
        let (cases, part) = rudnick_cases(&p, bases, stream_deg)?;
        cases.iter().for_each(&mut visit);
        s.merge(&part);
    }
    Ok(s)
}
