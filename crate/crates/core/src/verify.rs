//! Theorem evaluators. Each check recomputes its auxiliary quantities (class
//! numbers, `q`, `k`) from `m` and returns a [`VerificationRecord`]; a false
//! `pass` is data, never an error. Errors are reserved for inputs outside a
//! check's hypotheses.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{
    exactly_divides, factorize, gcd, is_prime, is_primitive_root, is_squarefree, mult_order,
    rem_i, Residue,
};
use crate::charsums::{
    b1_of_pair, weighted_sigma_rhs_with, CharPair, SigmaConvention, SigmaTable,
};
use crate::classnum::{class_number_imag, class_number_real};
use crate::digits::DigitStream;
use crate::error::{ensure_domain, Result};
use crate::Exact;

/// Stable check identifiers, as they appear in serialized records.
pub mod names {
    pub const GIRSTMAIR: &str = "girstmair";
    pub const HALF_ORDER: &str = "half_order";
    pub const S_CONGRUENCE_PART1: &str = "s_congruence_part1";
    pub const S_CONGRUENCE_PART2: &str = "s_congruence_part2";
    pub const MAIN_PRIME: &str = "main_prime";
    pub const CLASS_NUMBER_NM: &str = "class_number_nm";
    pub const CLASS_NUMBER_3M: &str = "class_number_3m";
    pub const SCHOLZ_1: &str = "scholz_1";
    pub const STEP_S_CLASS_RELATION: &str = "step_s_class_relation";
    pub const STEP_S_EXPANSION: &str = "step_s_expansion";
    pub const STEP_FIRST_TERM_INTERMEDIATE: &str = "step_first_term_intermediate";
    pub const STEP_FIRST_TERM: &str = "step_first_term";
    pub const STEP_SECOND_TERM: &str = "step_second_term";
    pub const STEP_COMBINED: &str = "step_combined";
    pub const STEP_ALT_DIGIT_SUM: &str = "step_alt_digit_sum";
    pub const STEP_FRAC_PAIRING: &str = "step_frac_pairing";
    pub const STEP_FRAC_ALT_SUM: &str = "step_frac_alt_sum";
    pub const STEP_FRAC_HALF_SUM: &str = "step_frac_half_sum";
}

/// Outcome of one theorem check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationRecord {
    pub check: String,
    pub m: u64,
    pub n: Option<u64>,
    pub p: Option<u64>,
    pub lhs: Exact,
    pub rhs: Exact,
    pub pass: bool,
    pub aux: BTreeMap<String, Exact>,
}

impl VerificationRecord {
    /// Exact identity: passes iff `lhs == rhs`.
    pub fn identity(check: &str, m: u64, n: Option<u64>, p: Option<u64>, lhs: Exact, rhs: Exact) -> Self {
        Self {
            check: check.to_string(),
            m,
            n,
            p,
            pass: lhs == rhs,
            lhs,
            rhs,
            aux: BTreeMap::new(),
        }
    }

    /// Congruence mod `p`: both sides are stored as canonical residues.
    pub fn congruence(check: &str, m: u64, n: Option<u64>, p: u64, lhs: i128, rhs: i128) -> Self {
        let l = Exact::from_integer(rem_i(lhs, p) as i128);
        let r = Exact::from_integer(rem_i(rhs, p) as i128);
        Self::identity(check, m, n, Some(p), l, r)
    }

    pub fn with(mut self, key: &str, value: impl Into<Exact>) -> Self {
        self.aux.insert(key.to_string(), value.into());
        self
    }

    /// Ordering key used to merge records deterministically.
    pub fn sort_key(&self) -> (u64, Option<u64>, Option<u64>, &str) {
        (self.m, self.n, self.p, &self.check)
    }
}

fn int(v: impl Into<i128>) -> Exact {
    Exact::from_integer(v.into())
}

fn flag(b: bool) -> Exact {
    int(b as i128)
}

/// `S = Σ_{k=1}^{T} a_k n^(T-k) k` reduced mod `p` and `p²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightedDigitSum {
    pub m: u64,
    pub n: u64,
    pub p: u64,
    pub value_mod_p: Residue,
    pub value_mod_p2: Residue,
}

/// Streams the digits of `1/m` and accumulates `S` by Horner's rule mod `p²`.
pub fn s_mod(m: u64, n: u64, p: u64) -> Result<WeightedDigitSum> {
    ensure_domain!(p > 2 && is_prime(p), "p = {p} must be an odd prime");
    ensure_domain!(p < (1 << 31), "p = {p} too large for p² arithmetic");
    let period = mult_order(n, m)?;
    let p2 = (p * p) as u128;
    let mut acc = 0u128;
    for (k, (a, _)) in (1..=period).zip(DigitStream::new(m, n)?) {
        acc = (acc * (n as u128 % p2) + (a as u128 % p2) * (k as u128 % p2)) % p2;
    }
    let acc = acc as i128;
    Ok(WeightedDigitSum {
        m,
        n,
        p,
        value_mod_p: crate::arith::mod_reduce(acc, p)?,
        value_mod_p2: crate::arith::mod_reduce(acc, p * p)?,
    })
}

fn require_prime_3_mod_4(m: u64) -> Result<()> {
    ensure_domain!(m % 4 == 3 && is_prime(m), "m = {m} must be a prime 3 mod 4");
    Ok(())
}

fn h_of(m: u64) -> Result<u64> {
    Ok(class_number_imag(m)?.h)
}

/// `m` prime `≡ 3 (mod 4)`, `n ≥ 2` a primitive root mod `m`. Bases above
/// `m` are allowed; only `n mod m` enters the digit recurrence's period.
pub fn girstmair_tuple(m: u64, n: u64) -> bool {
    m % 4 == 3 && is_prime(m) && n >= 2 && is_primitive_root(n, m).unwrap_or(false)
}

/// `m` prime `≡ 3 (mod 4)`, `n ≥ 2` coprime to `m` of order `(m-1)/2`.
pub fn half_order_tuple(m: u64, n: u64) -> bool {
    m % 4 == 3
        && is_prime(m)
        && n >= 2
        && gcd(n, m) == 1
        && mult_order(n, m).is_ok_and(|t| t == (m - 1) / 2)
}

/// Odd primes `p ≠ m` with `p ‖ (n+1)`.
pub fn part1_primes(n: u64, m: u64) -> Vec<u64> {
    factorize(n + 1)
        .map(|f| {
            f.primes()
                .filter(|&p| p > 2 && p != m && exactly_divides(p, n + 1))
                .collect()
        })
        .unwrap_or_default()
}

/// Odd primes `p ≠ m` with `p | (n-1)`.
pub fn part2_primes(n: u64, m: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    factorize(n - 1)
        .map(|f| f.primes().filter(|&p| p > 2 && p != m).collect())
        .unwrap_or_default()
}

/// `m` prime `≡ 1 (mod 4)`, `n ≡ 3 (mod 4)` squarefree and a primitive root mod `m`.
pub fn class_nm_tuple(m: u64, n: u64) -> bool {
    m % 4 == 1
        && n % 4 == 3
        && is_prime(m)
        && gcd(n, m) == 1
        && is_squarefree(n)
        && is_primitive_root(n, m).unwrap_or(false)
}

/// `m` prime `≡ 1 (mod 4)` with 3 a primitive root.
pub fn class_number_3m_modulus(m: u64) -> bool {
    class_nm_tuple(m, 3)
}

/// Alternating digit sum against `(n+1) h(m)`.
pub fn check_girstmair(m: u64, n: u64) -> Result<VerificationRecord> {
    require_prime_3_mod_4(m)?;
    ensure_domain!(n >= 2, "base must be at least 2, got {n}");
    ensure_domain!(is_primitive_root(n, m)?, "{n} is not a primitive root mod {m}");
    let h = h_of(m)?;
    let alt: i128 = (1..m)
        .zip(DigitStream::new(m, n)?)
        .map(|(k, (a, _))| if k % 2 == 0 { a as i128 } else { -(a as i128) })
        .sum();
    Ok(
        VerificationRecord::identity(names::GIRSTMAIR, m, Some(n), None, int(alt), int((n as i128 + 1) * h as i128))
            .with("h", int(h)),
    )
}

/// `((n-1)/2)((m-1)/2 - h(m))` against the first `(m-1)/2` digits.
pub fn check_half_order(m: u64, n: u64) -> Result<VerificationRecord> {
    require_prime_3_mod_4(m)?;
    ensure_domain!(n >= 2 && gcd(n, m) == 1, "n = {n} must be a base coprime to {m}");
    let order = mult_order(n, m)?;
    let q = (m - 1) / 2;
    ensure_domain!(order == q, "order of {n} mod {m} is {order}, not {q}");
    let h = h_of(m)?;
    let lhs = Exact::new(n as i128 - 1, 2) * int(q as i128 - h as i128);
    let rhs: i128 = DigitStream::new(m, n)?
        .take(q as usize)
        .map(|(a, _)| a as i128)
        .sum();
    Ok(
        VerificationRecord::identity(names::HALF_ORDER, m, Some(n), None, lhs, int(rhs))
            .with("h", int(h))
            .with("order", int(order)),
    )
}

/// Hypotheses shared by the S congruences and the main-prime checks.
fn require_main_tuple(m: u64, n: u64, p: u64) -> Result<()> {
    require_prime_3_mod_4(m)?;
    ensure_domain!(n >= 2, "base must be at least 2, got {n}");
    ensure_domain!(is_primitive_root(n, m)?, "{n} is not a primitive root mod {m}");
    ensure_domain!(p > 2 && is_prime(p), "p = {p} must be an odd prime");
    ensure_domain!(p != m, "p must differ from m");
    Ok(())
}

/// `m S ≡ 1 - m - m h(m)` (part 1, `p ‖ n+1`) or `m S ≡ 1 - m + m q`
/// (part 2, `p | n-1`), mod `p`.
pub fn check_s_congruence(m: u64, n: u64, p: u64, part: u8) -> Result<VerificationRecord> {
    require_main_tuple(m, n, p)?;
    let (m_i, q) = (m as i128, (m as i128 - 1) / 2);
    let s = s_mod(m, n, p)?;
    let lhs = m_i * s.value_mod_p.value() as i128;
    let rec = match part {
        1 => {
            ensure_domain!(exactly_divides(p, n + 1), "{p} does not exactly divide {}", n + 1);
            let h = h_of(m)? as i128;
            VerificationRecord::congruence(names::S_CONGRUENCE_PART1, m, Some(n), p, lhs, 1 - m_i - m_i * h)
                .with("h", int(h))
        }
        2 => {
            ensure_domain!((n - 1) % p == 0, "{p} does not divide {}", n - 1);
            VerificationRecord::congruence(names::S_CONGRUENCE_PART2, m, Some(n), p, lhs, 1 - m_i + m_i * q)
        }
        _ => return Err(crate::error::domain!("part must be 1 or 2, got {part}")),
    };
    Ok(rec
        .with("q", int(q))
        .with("s_mod_p", int(s.value_mod_p.value()))
        .with("s_mod_p2", int(s.value_mod_p2.value())))
}

/// `(m-5)(m+1) ≡ 0 (mod p)` as printed, with the sibling product
/// `(m-1)(m+5)` and `m mod p` kept alongside.
pub fn check_main_prime(m: u64, n: u64, p: u64) -> Result<VerificationRecord> {
    require_main_tuple(m, n, p)?;
    ensure_domain!(exactly_divides(p, n + 1), "{p} does not exactly divide {}", n + 1);
    let m_i = m as i128;
    let printed = rem_i((m_i - 5) * (m_i + 1), p);
    let sibling = rem_i((m_i - 1) * (m_i + 5), p);
    let h = h_of(m)?;
    Ok(
        VerificationRecord::congruence(names::MAIN_PRIME, m, Some(n), p, printed as i128, 0)
            .with("m_mod_p", int(m % p))
            .with("printed_product_mod_p", int(printed))
            .with("sibling_product_mod_p", int(sibling))
            .with("h", int(h))
            .with("q", int((m - 1) / 2)),
    )
}

/// Every displayed congruence of the proof of the `(m-5)(m+1)` statement,
/// evaluated independently.
pub fn check_proof_steps(m: u64, n: u64, p: u64) -> Result<Vec<VerificationRecord>> {
    require_main_tuple(m, n, p)?;
    ensure_domain!(exactly_divides(p, n + 1), "{p} does not exactly divide {}", n + 1);
    let m_i = m as i128;
    let q = (m - 1) / 2;
    let q_i = q as i128;
    let h = h_of(m)? as i128;
    let s = s_mod(m, n, p)?.value_mod_p.value() as i128;

    let mut alt_ak_k = 0i128; // Σ_{k≤q} (-1)^k a_k k
    let mut alt_ak_half = 0i128; // Σ_{k≤q} (-1)^k a_k
    let mut alt_rk_half = 0i128; // Σ_{k≤q} (-1)^k r_k
    let mut alt_ak_full = 0i128; // Σ_{k<m} (-1)^k a_k
    let mut alt_rk_full = 0i128; // Σ_{k<m} (-1)^k r_k
    let mut rems = Vec::with_capacity(m as usize);
    rems.push(1u64);
    for (k, (a, r)) in (1..m).zip(DigitStream::new(m, n)?) {
        let sign: i128 = if k % 2 == 0 { 1 } else { -1 };
        if k <= q {
            alt_ak_k += sign * a as i128 * k as i128;
            alt_ak_half += sign * a as i128;
            alt_rk_half += sign * r as i128;
        }
        alt_ak_full += sign * a as i128;
        alt_rk_full += sign * r as i128;
        rems.push(r);
    }
    let pairing_holds = (1..=q as usize).filter(|&k| rems[k] + rems[k + q as usize] == m).count();
    let first_bad = (1..=q as usize).find(|&k| rems[k] + rems[k + q as usize] != m);
    // the printed sum runs to k = m, adding (-1)^m [n^m]_m = -[n]_m
    let literal_to_m = Exact::new(alt_rk_full - (n % m) as i128, m_i);
    // Σ_{k≤q} (-1)^k (2 r_k/m - 1) = (2/m) Σ_{k≤q} (-1)^k r_k + 1, as q is odd
    let half_sum = int(2) * Exact::new(alt_rk_half, m_i) + int(1);

    let nn = Some(n);
    let mut out = vec![
        VerificationRecord::congruence(names::STEP_S_CLASS_RELATION, m, nn, p, 2 * q_i, -m_i * (h + s))
            .with("m_minus_1_mod_p", int(rem_i(m_i - 1, p))),
        VerificationRecord::congruence(
            names::STEP_S_EXPANSION,
            m,
            nn,
            p,
            s,
            2 * alt_ak_k + q_i * alt_ak_half - 3 * q_i - 1,
        ),
        VerificationRecord::congruence(
            names::STEP_FIRST_TERM_INTERMEDIATE,
            m,
            nn,
            p,
            m_i * alt_ak_k,
            -m_i * q_i - q_i + 1 + alt_rk_half,
        ),
        VerificationRecord::congruence(
            names::STEP_FIRST_TERM,
            m,
            nn,
            p,
            2 * m_i * alt_ak_k,
            -2 * m_i * q_i - 2 * q_i + 2 - m_i * h - m_i,
        ),
        VerificationRecord::congruence(names::STEP_SECOND_TERM, m, nn, p, alt_ak_half, 1),
        VerificationRecord::congruence(
            names::STEP_COMBINED,
            m,
            nn,
            p,
            m_i * s,
            1 - m_i * h - 5 * q_i - m_i * q_i - m_i,
        ),
        VerificationRecord::congruence(names::STEP_ALT_DIGIT_SUM, m, nn, p, alt_ak_full, 0)
            .with("alt_digit_sum", int(alt_ak_full)),
        VerificationRecord::identity(
            names::STEP_FRAC_PAIRING,
            m,
            nn,
            Some(p),
            int(pairing_holds as i128),
            int(q_i),
        )
        .with("first_failing_k", int(first_bad.map_or(0, |k| k as i128))),
        VerificationRecord::identity(
            names::STEP_FRAC_ALT_SUM,
            m,
            nn,
            Some(p),
            Exact::new(alt_rk_full, m_i),
            int(-h),
        )
        .with("literal_sum_to_m", literal_to_m),
        VerificationRecord::identity(
            names::STEP_FRAC_HALF_SUM,
            m,
            nn,
            Some(p),
            half_sum,
            Exact::new(alt_rk_full, m_i),
        ),
    ];
    for rec in &mut out {
        rec.aux.insert("h".to_string(), int(h));
        rec.aux.insert("s_mod_p".to_string(), int(s));
    }
    Ok(out)
}

/// Factors tried when calibrating the prefactor of the character-sum formula.
pub const FACTOR_CANDIDATES: [i128; 2] = [1, 2];

fn combo_key(prefix: &str, factor: i128, conv: SigmaConvention) -> String {
    alloc::format!("{prefix}_f{factor}_{}", conv.name())
}

/// `h(nm)` from forms against `-(factor/n) Σ_α α Σ_k k Σ_a χ₁(a + k[m]_n) σ(a, α)`.
///
/// `pass` uses `factor` with residue-convention σ. The aux map carries the
/// right-hand side and a match flag for every factor candidate and σ
/// convention.
pub fn check_class_number_nm(m: u64, n: u64, factor: Exact) -> Result<VerificationRecord> {
    ensure_domain!(m % 4 == 1 && is_prime(m), "m = {m} must be a prime 1 mod 4");
    let pair = CharPair::new(n, m)?;
    ensure_domain!(is_primitive_root(n, m)?, "{n} is not a primitive root mod {m}");
    let nm = pair.modulus();
    let h = class_number_imag(nm)?.h;
    let table = SigmaTable::with_digits(&pair)?;
    let lhs = int(h);
    let rhs = -weighted_sigma_rhs_with(&pair, &table, SigmaConvention::Residue, factor)?;
    let mut rec = VerificationRecord::identity(names::CLASS_NUMBER_NM, m, Some(n), None, lhs, rhs)
        .with("b1", b1_of_pair(&pair));
    for f in FACTOR_CANDIDATES {
        for conv in SigmaConvention::ALL {
            let value = -weighted_sigma_rhs_with(&pair, &table, conv, int(f))?;
            rec = rec
                .with(&combo_key("rhs", f, conv), value)
                .with(&combo_key("match", f, conv), flag(value == lhs));
        }
    }
    Ok(rec)
}

/// The prefactor and σ conventions that reproduce the class number on every
/// record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Calibration {
    pub tested: usize,
    /// `(factor, convention, tuples matched)` for every combination.
    pub combos: Vec<(i128, SigmaConvention, usize)>,
    /// Set when exactly one factor has a convention matching every tuple.
    pub factor: Option<i128>,
    pub conventions: Vec<SigmaConvention>,
}

pub fn calibrate(records: &[VerificationRecord]) -> Calibration {
    let rows: Vec<&VerificationRecord> = records
        .iter()
        .filter(|r| r.check == names::CLASS_NUMBER_NM)
        .collect();
    let tested = rows.len();
    let mut combos = Vec::new();
    for f in FACTOR_CANDIDATES {
        for conv in SigmaConvention::ALL {
            let key = combo_key("match", f, conv);
            let hits = rows
                .iter()
                .filter(|r| r.aux.get(&key) == Some(&int(1)))
                .count();
            combos.push((f, conv, hits));
        }
    }
    let winners: Vec<(i128, SigmaConvention)> = combos
        .iter()
        .filter(|&&(_, _, hits)| tested > 0 && hits == tested)
        .map(|&(f, c, _)| (f, c))
        .collect();
    let mut factors: Vec<i128> = winners.iter().map(|&(f, _)| f).collect();
    factors.dedup();
    let factor = (factors.len() == 1).then(|| factors[0]);
    let conventions = winners
        .iter()
        .filter(|&&(f, _)| Some(f) == factor)
        .map(|&(_, c)| c)
        .collect();
    Calibration {
        tested,
        combos,
        factor,
        conventions,
    }
}

/// `σ(0,1)` for `n = 3`: quadratic residues mod `m` divisible by 3.
pub fn sigma_zero_plus(m: u64) -> Result<u64> {
    ensure_domain!(m > 3 && m % 4 == 1 && is_prime(m), "m = {m} must be a prime 1 mod 4");
    // Each nonzero square class mod m is x² for exactly one x in [1, (m-1)/2].
    let (mut s, mut count) = (0u64, 0u64);
    for x in 1..=(m - 1) / 2 {
        s += 2 * x - 1;
        if s >= m {
            s -= m;
        }
        count += (s % 3 == 0) as u64;
    }
    Ok(count)
}

/// `h(3m) = 2k - 4σ(0,1)` with `m = 3k + 2`.
pub fn check_class_number_3m(m: u64) -> Result<VerificationRecord> {
    ensure_domain!(class_number_3m_modulus(m), "m = {m} must be a prime 1 mod 4 with 3 a primitive root");
    let k = (m - 2) / 3;
    let sigma = sigma_zero_plus(m)?;
    let h = class_number_imag(3 * m)?.h;
    Ok(VerificationRecord::identity(
        names::CLASS_NUMBER_3M,
        m,
        Some(3),
        None,
        int(h),
        int(2 * k as i128 - 4 * sigma as i128),
    )
    .with("k", int(k))
    .with("sigma01", int(sigma)))
}

/// Divisibility consequences for `h_>(m)`: assertion (1) and assertion (2)
/// for `s = 1, 2, 3`. Each record has `lhs = [premise ⇒ conclusion]`, `rhs = 1`.
pub fn check_scholz(m: u64) -> Result<Vec<VerificationRecord>> {
    ensure_domain!(class_number_3m_modulus(m), "m = {m} must be a prime 1 mod 4 with 3 a primitive root");
    let k = (m - 2) / 3;
    let sigma = sigma_zero_plus(m)?;
    let h_real = class_number_real(m)?.h;
    let h_imag = class_number_imag(3 * m)?.h;
    let diff = k as i128 - 2 * sigma as i128;
    let base = |name: &str, premise: bool, conclusion: bool| {
        VerificationRecord::identity(name, m, Some(3), None, flag(!premise || conclusion), int(1))
            .with("premise", flag(premise))
            .with("conclusion", flag(conclusion))
            .with("k", int(k))
            .with("sigma01", int(sigma))
            .with("h_real", int(h_real))
            .with("h_3m", int(h_imag))
    };
    let mut out = vec![base(names::SCHOLZ_1, diff.rem_euclid(3) != 0, h_real % 3 != 0)];
    for s in 1..=3u32 {
        let name = alloc::format!("scholz_2_s{s}");
        let premise = diff.rem_euclid(3i128.pow(s)) == 0;
        let conclusion = h_real % 3u64.pow(s - 1) == 0;
        out.push(base(&name, premise, conclusion).with("s", int(s)));
    }
    Ok(out)
}

/// One modulus in the `σ(0,1) ≈ m/6` statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaDeviation {
    pub m: u64,
    pub sigma: u64,
    /// `σ(0,1) - m/6`.
    pub delta: Exact,
    /// `|δ| / (√m ln m)`.
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaDeviationSummary {
    pub entries: Vec<SigmaDeviation>,
    pub max_normalized: f64,
    pub argmax: Option<u64>,
    pub mean_normalized: f64,
}

pub fn sigma_deviation(m: u64) -> Result<SigmaDeviation> {
    ensure_domain!(class_number_3m_modulus(m), "m = {m} must be a prime 1 mod 4 with 3 a primitive root");
    let sigma = sigma_zero_plus(m)?;
    let delta = int(sigma) - Exact::new(m as i128, 6);
    let abs = libm::fabs(*delta.numer() as f64 / *delta.denom() as f64);
    let mf = m as f64;
    Ok(SigmaDeviation {
        m,
        sigma,
        delta,
        normalized: abs / (libm::sqrt(mf) * libm::log(mf)),
    })
}

/// Summary over the qualifying moduli in `ms` (others are skipped).
pub fn sigma_deviation_stats(ms: impl IntoIterator<Item = u64>) -> Result<SigmaDeviationSummary> {
    let mut entries = Vec::new();
    for m in ms {
        if class_number_3m_modulus(m) {
            entries.push(sigma_deviation(m)?);
        }
    }
    Ok(summarize_deviations(entries))
}

pub fn summarize_deviations(entries: Vec<SigmaDeviation>) -> SigmaDeviationSummary {
    let mut max_normalized = 0.0;
    let mut argmax = None;
    let mut total = 0.0;
    for e in &entries {
        total += e.normalized;
        if argmax.is_none() || e.normalized > max_normalized {
            max_normalized = e.normalized;
            argmax = Some(e.m);
        }
    }
    let mean_normalized = if entries.is_empty() {
        0.0
    } else {
        total / entries.len() as f64
    };
    SigmaDeviationSummary {
        entries,
        max_normalized,
        argmax,
        mean_normalized,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_mod_examples() {
        assert_eq!(s_mod(7, 10, 11).unwrap().value_mod_p.value(), 6);
        assert_eq!(s_mod(7, 10, 3).unwrap().value_mod_p.value(), 0);
        // 1/3 in base 10 has period 1, so S = a_1 = 3
        assert_eq!(s_mod(3, 10, 7).unwrap().value_mod_p.value(), 3);
        assert!(s_mod(7, 10, 2).is_err());
        let s = s_mod(19, 10, 11).unwrap();
        assert_eq!(s.value_mod_p2.value() % 11, s.value_mod_p.value());
    }

    #[test]
    fn girstmair_examples() {
        let r = check_girstmair(7, 10).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (int(11), int(11), true));
        let r = check_girstmair(19, 10).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (int(11), int(11), true));
        let r = check_girstmair(7, 3).unwrap();
        assert_eq!((r.lhs, r.pass), (int(4), true));
        assert!(check_girstmair(8, 10).is_err());
        assert!(check_girstmair(7, 2).is_err());
        assert!(check_girstmair(7, 1).is_err());
    }

    #[test]
    fn half_order_examples() {
        let r = check_half_order(7, 2).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (int(1), int(1), true));
        let r = check_half_order(11, 3).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (int(4), int(4), true));
        let r = check_half_order(7, 4).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (int(3), int(3), true));
        assert!(check_half_order(7, 3).is_err());
    }

    #[test]
    fn s_congruence_examples() {
        let r = check_s_congruence(7, 10, 11, 1).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (int(9), int(9), true));
        let r = check_s_congruence(7, 10, 3, 2).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (int(0), int(0), true));
        let r = check_s_congruence(19, 10, 11, 1).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (int(7), int(7), true));
        assert!(check_s_congruence(7, 10, 3, 1).is_err());
        assert!(check_s_congruence(7, 10, 11, 2).is_err());
    }

    #[test]
    fn main_prime_examples() {
        let r = check_main_prime(19, 10, 11).unwrap();
        assert!(!r.pass);
        assert_eq!(r.aux["m_mod_p"], int(8));
        assert_eq!(r.aux["printed_product_mod_p"], int(5));
        assert_eq!(r.aux["sibling_product_mod_p"], int(rem_i(18 * 24, 11)));
        // m ≡ 5 (mod 3): first factor vanishes
        let r = check_main_prime(11, 2, 3).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn proof_steps_examples() {
        let recs = check_proof_steps(19, 10, 11).unwrap();
        let get = |name: &str| recs.iter().find(|r| r.check == name).unwrap();
        let second = get(names::STEP_SECOND_TERM);
        assert_eq!((second.lhs, second.pass), (int(1), true));
        assert!(get(names::STEP_FRAC_PAIRING).pass);
        assert!(get(names::STEP_FRAC_ALT_SUM).pass);
        assert!(get(names::STEP_FRAC_HALF_SUM).pass);
        assert!(get(names::STEP_ALT_DIGIT_SUM).pass);
        let recs = check_proof_steps(7, 10, 11).unwrap();
        assert!(recs.iter().find(|r| r.check == names::STEP_S_CLASS_RELATION).unwrap().pass);
    }

    #[test]
    fn class_number_main_examples() {
        let r = check_class_number_nm(5, 3, int(1)).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (int(2), int(2), true));
        assert_eq!(r.aux["rhs_f2_residue"], int(4));
        let r = check_class_number_nm(17, 3, int(1)).unwrap();
        assert_eq!((r.lhs, r.pass), (int(2), true));
        let r = check_class_number_nm(5, 3, int(0)).unwrap();
        assert_eq!((r.rhs, r.pass), (int(0), false));
        assert!(check_class_number_nm(13, 3, int(1)).is_err());
    }

    #[test]
    fn class_number_3m_examples() {
        let r = check_class_number_3m(5).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (int(2), int(2), true));
        let r = check_class_number_3m(17).unwrap();
        assert_eq!((r.lhs, r.rhs, r.aux["sigma01"]), (int(2), int(2), int(2)));
        assert!(check_class_number_3m(29).unwrap().pass);
        assert!(check_class_number_3m(13).is_err());
    }

    #[test]
    fn scholz_examples() {
        for m in [5u64, 17] {
            let recs = check_scholz(m).unwrap();
            assert_eq!(recs.len(), 4);
            assert!(recs.iter().all(|r| r.pass), "m={m}");
        }
        let recs = check_scholz(5).unwrap();
        assert_eq!(recs[0].aux["premise"], int(1));
        // s = 1 is vacuous
        assert!(recs.iter().find(|r| r.check == "scholz_2_s1").unwrap().pass);
    }

    #[test]
    fn sigma_walk_matches_table() {
        for m in (5..3000u64).filter(|&m| m % 4 == 1 && is_prime(m)) {
            let pair = CharPair::without_table(3, m).unwrap();
            assert_eq!(sigma_zero_plus(m).unwrap(), crate::charsums::sigma_res(&pair, 0, 1), "m = {m}");
        }
        assert!(sigma_zero_plus(7).is_err());
    }

    #[test]
    fn sigma_deviation_examples() {
        assert_eq!(sigma_deviation(5).unwrap().delta, Exact::new(-5, 6));
        assert_eq!(sigma_deviation(17).unwrap().delta, Exact::new(-5, 6));
        let s = sigma_deviation_stats(1..100).unwrap();
        assert_eq!(s.entries.iter().map(|e| e.m).collect::<Vec<_>>(), [5, 17, 29, 53, 89]);
        assert!(s.max_normalized.is_finite());
        assert!(sigma_deviation_stats(core::iter::empty()).unwrap().entries.is_empty());
    }

    #[test]
    fn calibration_picks_unit_factor() {
        let recs: Vec<_> = [(5u64, 3u64), (17, 3), (29, 3), (5, 7), (13, 7)]
            .iter()
            .filter(|&&(m, n)| class_nm_tuple(m, n))
            .map(|&(m, n)| check_class_number_nm(m, n, int(1)).unwrap())
            .collect();
        let c = calibrate(&recs);
        assert_eq!(c.factor, Some(1));
        assert_eq!(c.conventions, [SigmaConvention::Residue]);
    }

    #[test]
    fn tuple_filters() {
        assert_eq!(part1_primes(10, 19), [11]);
        assert!(part1_primes(17, 19).is_empty()); // 18 = 2·3²
        assert_eq!(part2_primes(10, 19), [3]);
        assert!(girstmair_tuple(7, 3));
        assert!(!girstmair_tuple(7, 2));
        assert!(girstmair_tuple(7, 10));
    }
}
