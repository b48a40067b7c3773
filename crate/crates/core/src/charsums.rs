//! Quadratic characters, the σ counts, Γ_α and c_k sums, and B₁(χ).
//!
//! Throughout, `χ = χ₁χ₂` with `χ₁ = (·/n)` odd (`n ≡ 3 mod 4`, squarefree)
//! and `χ₂ = (·/m)` even (`m ≡ 1 mod 4` prime), so `χ` has modulus `D = nm`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{gcd, is_prime, is_primitive_root, is_squarefree, jacobi_raw, rem_i};
use crate::digits::DigitStream;
use crate::error::{ensure_domain, Error, Result};
use crate::Exact;

/// Default upper bound on `D = nm`.
pub const DEFAULT_MODULUS_CAP: u64 = 1 << 31;

// Above this, χ₂ is evaluated by reciprocity instead of from a table.
const CHI2_TABLE_LIMIT: u64 = 1 << 27;

/// Which σ(a, α) definition to use: counting residues `l ≤ m` in class `a`
/// mod `n`, or counting digit indices `k` with `m a_k ≡ a (mod n)` and parity
/// of `k` matching `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SigmaConvention {
    Residue,
    DigitParity,
}

impl SigmaConvention {
    pub const ALL: [SigmaConvention; 2] = [SigmaConvention::Residue, SigmaConvention::DigitParity];

    pub fn name(self) -> &'static str {
        match self {
            SigmaConvention::Residue => "residue",
            SigmaConvention::DigitParity => "digit",
        }
    }
}

/// A factored odd real character of modulus `n m`.
#[derive(Debug, Clone)]
pub struct CharPair {
    n: u64,
    m: u64,
    chi1: Vec<i8>,
    chi2: Option<Vec<i8>>,
}

impl CharPair {
    pub fn new(n: u64, m: u64) -> Result<Self> {
        Self::with_cap(n, m, DEFAULT_MODULUS_CAP)
    }

    /// Like [`CharPair::new`] but evaluates χ₂ by reciprocity instead of
    /// building an `O(m)` table.
    pub fn without_table(n: u64, m: u64) -> Result<Self> {
        let mut pair = Self::build(n, m, DEFAULT_MODULUS_CAP)?;
        pair.chi2 = None;
        Ok(pair)
    }

    pub fn with_cap(n: u64, m: u64, cap: u64) -> Result<Self> {
        let mut pair = Self::build(n, m, cap)?;
        if m <= CHI2_TABLE_LIMIT {
            pair.chi2 = Some(legendre_table(m));
        }
        Ok(pair)
    }

    fn build(n: u64, m: u64, cap: u64) -> Result<Self> {
        ensure_domain!(n >= 3 && n % 4 == 3, "n = {n} must be 3 mod 4");
        ensure_domain!(is_squarefree(n), "n = {n} must be squarefree");
        ensure_domain!(m % 4 == 1 && is_prime(m), "m = {m} must be a prime 1 mod 4");
        ensure_domain!(gcd(n, m) == 1, "gcd({n}, {m}) != 1");
        match n.checked_mul(m) {
            Some(d) if d <= cap => {}
            _ => {
                return Err(Error::Resource(format!(
                    "modulus {n}*{m} exceeds cap {cap}"
                )))
            }
        }
        let chi1 = (0..n).map(|a| jacobi_raw(a, n)).collect();
        Ok(Self {
            n,
            m,
            chi1,
            chi2: None,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.n * self.m
    }

    #[inline]
    pub fn chi1(&self, a: i128) -> i8 {
        self.chi1[rem_i(a, self.n) as usize]
    }

    #[inline]
    pub fn chi2(&self, a: i128) -> i8 {
        let r = rem_i(a, self.m);
        match &self.chi2 {
            Some(t) => t[r as usize],
            None => jacobi_raw(r, self.m),
        }
    }

    #[inline]
    pub fn chi(&self, a: i128) -> i8 {
        self.chi1(a) * self.chi2(a)
    }
}

/// Legendre symbol `(l / m)` for `l` in `0..m`, from the set of squares.
pub fn legendre_table(m: u64) -> Vec<i8> {
    let mut t = vec![-1i8; m as usize];
    t[0] = 0;
    for_each_square(m, |s| t[s as usize] = 1);
    t
}

// Visits x² mod m for x = 1..=(m-1)/2: each nonzero square once when m is an odd prime.
#[inline]
fn for_each_square(m: u64, mut f: impl FnMut(u64)) {
    let mut s = 0u64;
    let mut step = 1u64;
    for _ in 0..(m - 1) / 2 {
        s += step;
        while s >= m {
            s -= m;
        }
        f(s);
        step += 2;
        if step >= m {
            step -= m;
        }
    }
}

/// Table of `(a / D)` for `a` in `0..D`, filled multiplicatively from
/// a smallest-prime-factor table covering `0..D`.
#[derive(Debug, Clone)]
pub struct QuadraticCharacter {
    modulus: u64,
    values: Vec<i8>,
}

impl QuadraticCharacter {
    pub fn new(modulus: u64) -> Result<Self> {
        ensure_domain!(modulus % 2 == 1, "modulus {modulus} must be odd");
        let spf = crate::arith::spf_table(modulus as usize);
        Self::with_spf(modulus, &spf)
    }

    pub fn with_spf(modulus: u64, spf: &[u32]) -> Result<Self> {
        ensure_domain!(modulus % 2 == 1, "modulus {modulus} must be odd");
        ensure_domain!(spf.len() as u64 >= modulus, "factor table too short");
        let d = modulus as usize;
        let mut values = vec![0i8; d];
        if d > 1 {
            values[1] = 1;
        }
        for a in 2..d {
            let p = spf[a] as usize;
            values[a] = if p == a {
                jacobi_raw(a as u64, modulus)
            } else {
                values[p] * values[a / p]
            };
        }
        Ok(Self { modulus, values })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn value(&self, a: u64) -> i8 {
        self.values[(a % self.modulus) as usize]
    }
}

/// `B₁(χ) = (1/D) Σ_{a=1}^{D} χ(a) a`.
pub fn b1_direct(modulus: u64, chi: impl Fn(u64) -> i8) -> Exact {
    let sum: i128 = (1..=modulus).map(|a| chi(a) as i128 * a as i128).sum();
    Exact::new(sum, modulus as i128)
}

#[inline]
fn alpha_slot(alpha: i8) -> usize {
    match alpha {
        -1 => 0,
        0 => 1,
        1 => 2,
        _ => panic!("character value {alpha} is not in {{-1, 0, 1}}"),
    }
}

/// Number of `l` in `[1, m-1]` with `l ≡ a (mod n)`.
fn class_size(m: u64, n: u64, a: u64) -> u64 {
    let top = m - 1;
    if a == 0 {
        top / n
    } else if a > top {
        0
    } else {
        (top - a) / n + 1
    }
}

/// σ(a, α) for every class `a` mod `n`, in the residue convention and
/// (when `n` is a primitive root mod `m`) the digit-parity convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaTable {
    n: u64,
    m: u64,
    residue: Vec<[u64; 3]>,
    digit: Option<Vec<[u64; 2]>>,
}

impl SigmaTable {
    /// Residue convention only, in `O(m)` without character evaluations.
    pub fn residue(pair: &CharPair) -> Self {
        let (n, m) = (pair.n, pair.m);
        let mut residue = vec![[0u64; 3]; n as usize];
        for_each_square(m, |s| residue[(s % n) as usize][2] += 1);
        for (a, row) in residue.iter_mut().enumerate() {
            row[0] = class_size(m, n, a as u64) - row[2];
        }
        residue[(m % n) as usize][1] = 1;
        Self {
            n,
            m,
            residue,
            digit: None,
        }
    }

    /// Both conventions. Fails unless `n` is a primitive root modulo `m`.
    pub fn with_digits(pair: &CharPair) -> Result<Self> {
        let mut table = Self::residue(pair);
        table.digit = Some(digit_counts(pair)?);
        Ok(table)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn res(&self, a: u64, alpha: i8) -> u64 {
        self.residue[(a % self.n) as usize][alpha_slot(alpha)]
    }

    /// Digit-parity count; `sign` is +1 for even `k`, -1 for odd `k`.
    pub fn digit(&self, a: u64, sign: i8) -> Option<u64> {
        let rows = self.digit.as_ref()?;
        let row = &rows[(a % self.n) as usize];
        match sign {
            1 => Some(row[1]),
            -1 => Some(row[0]),
            _ => Some(0),
        }
    }

    pub fn has_digits(&self) -> bool {
        self.digit.is_some()
    }

    /// σ(a, α) in the requested convention. The digit convention has no
    /// α = 0 class and reports 0 there.
    pub fn get(&self, convention: SigmaConvention, a: u64, alpha: i8) -> Result<u64> {
        match convention {
            SigmaConvention::Residue => Ok(self.res(a, alpha)),
            SigmaConvention::DigitParity => self.digit(a, alpha).ok_or_else(|| {
                crate::error::Error::Domain(String::from("digit-parity counts were not computed"))
            }),
        }
    }
}

fn digit_counts(pair: &CharPair) -> Result<Vec<[u64; 2]>> {
    let (n, m) = (pair.n, pair.m);
    ensure_domain!(
        is_primitive_root(n, m)?,
        "{n} is not a primitive root modulo {m}"
    );
    let mut rows = vec![[0u64; 2]; n as usize];
    for (k, (a, _)) in (1..m).zip(DigitStream::new(m, n)?) {
        let class = ((m as u128 * a as u128) % n as u128) as usize;
        rows[class][(k % 2 == 0) as usize] += 1;
    }
    Ok(rows)
}

/// `#{1 ≤ l ≤ m : χ₂(l) = α, l ≡ a (mod n)}` by direct count.
pub fn sigma_res(pair: &CharPair, a: u64, alpha: i8) -> u64 {
    let a = a % pair.n;
    (1..=pair.m)
        .filter(|&l| l % pair.n == a && pair.chi2(l as i128) == alpha)
        .count() as u64
}

/// `#{1 ≤ k ≤ m-1 : m a_k ≡ a (mod n), (-1)^k = sign}` from the digits of `1/m`.
pub fn sigma_digit(pair: &CharPair, a: u64, sign: i8) -> Result<u64> {
    let rows = digit_counts(pair)?;
    let row = rows[(a % pair.n) as usize];
    Ok(match sign {
        1 => row[1],
        -1 => row[0],
        _ => 0,
    })
}

/// `Γ_α = Σ_{1 ≤ a ≤ nm, χ₂(a) = α} χ₁(a) a`.
pub fn gamma(pair: &CharPair, alpha: i8) -> i128 {
    (1..=pair.modulus() as i128)
        .filter(|&a| pair.chi2(a) == alpha)
        .map(|a| pair.chi1(a) as i128 * a)
        .sum()
}

/// `c_k(α) = Σ_{1 ≤ a ≤ m, χ₂(a) = α} χ₁(a + k m)`, summed directly.
pub fn c_k_direct(pair: &CharPair, k: i64, alpha: i8) -> i64 {
    let shift = k as i128 * pair.m as i128;
    (1..=pair.m as i128)
        .filter(|&a| pair.chi2(a) == alpha)
        .map(|a| pair.chi1(a + shift) as i64)
        .sum()
}

/// `c_k(α) = Σ_{a=1}^{n} χ₁(a + k [m]_n) σ(a, α)` in the given convention.
pub fn c_k_sigma(
    pair: &CharPair,
    table: &SigmaTable,
    convention: SigmaConvention,
    k: i64,
    alpha: i8,
) -> Result<i64> {
    let shift = k as i128 * (pair.m % pair.n) as i128;
    let mut sum = 0i64;
    for a in 1..=pair.n {
        let weight = table.get(convention, a, alpha)? as i64;
        sum += pair.chi1(a as i128 + shift) as i64 * weight;
    }
    Ok(sum)
}

/// `c_k(α)` by both routes; disagreement is reported as an invariant violation.
pub fn c_k(pair: &CharPair, k: i64, alpha: i8) -> Result<i64> {
    let direct = c_k_direct(pair, k, alpha);
    let table = SigmaTable::residue(pair);
    let weighted = c_k_sigma(pair, &table, SigmaConvention::Residue, k, alpha)?;
    if direct != weighted {
        return Err(Error::InvariantViolation(format!(
            "c_{k}({alpha}) for n={}, m={}: direct {direct} vs sigma-weighted {weighted}",
            pair.n, pair.m
        )));
    }
    Ok(direct)
}

/// `Σ_α α Σ_{k=0}^{n-1} k c_k(α)` with c_k taken from σ in `convention`.
pub fn weighted_c_sum(pair: &CharPair, table: &SigmaTable, convention: SigmaConvention) -> Result<i128> {
    let mut total = 0i128;
    for alpha in [-1i8, 1] {
        for k in 0..pair.n as i64 {
            total += alpha as i128 * k as i128 * c_k_sigma(pair, table, convention, k, alpha)? as i128;
        }
    }
    Ok(total)
}

/// `(factor / n) Σ_α α Σ_{k=0}^{n-1} k Σ_a χ₁(a + k[m]_n) σ(a, α)` with the
/// residue-convention σ.
pub fn weighted_sigma_rhs(pair: &CharPair, factor: Exact) -> Exact {
    let table = SigmaTable::residue(pair);
    weighted_sigma_rhs_with(pair, &table, SigmaConvention::Residue, factor)
        .expect("residue convention is always available")
}

pub fn weighted_sigma_rhs_with(
    pair: &CharPair,
    table: &SigmaTable,
    convention: SigmaConvention,
    factor: Exact,
) -> Result<Exact> {
    let sum = weighted_c_sum(pair, table, convention)?;
    Ok(factor * Exact::new(sum, pair.n as i128))
}

/// `B₁` of the full character `χ = χ₁χ₂` mod `nm`.
pub fn b1_of_pair(pair: &CharPair) -> Exact {
    b1_direct(pair.modulus(), |a| pair.chi(a as i128))
}

/// `B₁(χ₁)` for `χ₁` mod `n`.
pub fn b1_of_chi1(pair: &CharPair) -> Exact {
    b1_direct(pair.n, |a| pair.chi1(a as i128))
}

/// Two sides of one exact identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub name: &'static str,
    pub lhs: Exact,
    pub rhs: Exact,
}

impl Identity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The exact identities underlying the character-sum formula for `B₁(χ)`,
/// each evaluated from its own definitions.
pub fn bernoulli_identities(pair: &CharPair) -> Vec<Identity> {
    let nm = Exact::from_integer(pair.modulus() as i128);
    let b1 = b1_of_pair(pair);
    let b1_chi1 = b1_of_chi1(pair);
    let chi1_m = Exact::from_integer(pair.chi1(pair.m as i128) as i128);
    let one = Exact::from_integer(1);
    let g_plus = gamma(pair, 1);
    let g_minus = gamma(pair, -1);
    let g_zero = gamma(pair, 0);
    let chi1_weighted: i128 = (1..=pair.modulus() as i128)
        .map(|a| pair.chi1(a) as i128 * a)
        .sum();
    let vanish_1: i128 = (1..=pair.n as i128).map(|a| pair.chi1(a) as i128).sum();
    let vanish_2: i128 = (1..=pair.m as i128)
        .map(|a| pair.chi2(a) as i128 * a)
        .sum();
    let int = Exact::from_integer;
    vec![
        Identity {
            name: "d1d2b1",
            lhs: nm * b1_chi1,
            rhs: int(chi1_weighted),
        },
        Identity {
            name: "intermediate_minus",
            lhs: nm * (b1 - (one - chi1_m) * b1_chi1),
            rhs: int(-2 * g_minus),
        },
        Identity {
            name: "intermediate_plus",
            lhs: nm * (b1 + (one - chi1_m) * b1_chi1),
            rhs: int(2 * g_plus),
        },
        Identity {
            name: "gamma0",
            lhs: int(g_zero),
            rhs: chi1_m * nm * b1_chi1,
        },
        Identity {
            name: "character_vanish_chi1",
            lhs: int(vanish_1),
            rhs: int(0),
        },
        Identity {
            name: "character_vanish_chi2",
            lhs: int(vanish_2),
            rhs: int(0),
        },
    ]
}

/// Observed `σ(a,1) + σ(a,-1)` against the printed two-case formula
/// `⌊m/n⌋ + 1` for `a ≠ 0`, `⌊m/n⌋` for `a = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowSum {
    pub a: u64,
    pub observed: u64,
    pub printed: u64,
}

pub fn row_sums(table: &SigmaTable) -> Vec<RowSum> {
    (0..table.n)
        .map(|a| RowSum {
            a,
            observed: table.res(a, 1) + table.res(a, -1),
            printed: table.m / table.n + (a != 0) as u64,
        })
        .collect()
}

/// Coefficient matrix of the four σ-relations for `n = 3`.
pub const MATRIX_A: [[i64; 4]; 4] = [[1, 1, 0, 0], [0, 0, 1, 1], [2, 0, 1, 0], [0, 2, 0, 1]];

/// Claimed kernel vector of [`MATRIX_A`].
pub const NULL_VECTOR: [i64; 4] = [1, -1, -2, 2];

/// Rank of a small integer matrix by exact elimination over the rationals.
pub fn matrix_rank<const R: usize, const C: usize>(m: &[[i64; C]; R]) -> usize {
    let mut rows: Vec<Vec<Exact>> = m
        .iter()
        .map(|r| r.iter().map(|&v| Exact::from_integer(v as i128)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..C {
        let Some(pivot) = (rank..R).find(|&r| rows[r][col] != Exact::from_integer(0)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col];
        for r in 0..R {
            if r != rank {
                let f = rows[r][col] / lead;
                for c in 0..C {
                    let v = rows[rank][c];
                    rows[r][c] -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn mat_vec(m: &[[i64; 4]; 4], v: &[i64; 4]) -> [i64; 4] {
    let mut out = [0i64; 4];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

/// The `n = 3` system `A x = b` evaluated on the actual σ values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystemReport {
    /// `(σ(0,1), σ(0,-1), σ(1,1), σ(1,-1))`.
    pub x: [i64; 4],
    /// `A x`.
    pub ax: [i64; 4],
    /// `(⌊(m-1)/3⌋, ⌊(m-1)/3⌋, (m-1)/2, (m-1)/2)`.
    pub printed_rhs: [i64; 4],
    /// `σ(0,α) = σ(2,α)` for both signs.
    pub symmetric: bool,
    /// `c_1(α) = 0` for both signs.
    pub c1_vanishes: bool,
}

impl LinearSystemReport {
    /// Row-wise `A x - b`.
    pub fn residuals(&self) -> [i64; 4] {
        let mut r = [0; 4];
        for i in 0..4 {
            r[i] = self.ax[i] - self.printed_rhs[i];
        }
        r
    }
}

pub fn linear_system_n3(pair: &CharPair, table: &SigmaTable) -> Result<LinearSystemReport> {
    ensure_domain!(pair.n == 3, "the linear system is stated for n = 3 only");
    let m = pair.m as i64;
    let s = |a, alpha| table.res(a, alpha) as i64;
    let x = [s(0, 1), s(0, -1), s(1, 1), s(1, -1)];
    let symmetric = s(0, 1) == s(2, 1) && s(0, -1) == s(2, -1);
    let c1_vanishes = [-1i8, 1]
        .iter()
        .all(|&alpha| c_k_sigma(pair, table, SigmaConvention::Residue, 1, alpha) == Ok(0));
    Ok(LinearSystemReport {
        x,
        ax: mat_vec(&MATRIX_A, &x),
        printed_rhs: [(m - 1) / 3, (m - 1) / 3, (m - 1) / 2, (m - 1) / 2],
        symmetric,
        c1_vanishes,
    })
}
