//! Class numbers of quadratic fields by brute-force form enumeration, and by
//! the character sum `B₁(χ) = -h`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::arith::{is_prime, is_squarefree, isqrt};
use crate::charsums::{b1_direct, QuadraticCharacter};
use crate::error::{ensure_domain, Error, Result};

/// Default bound on the number of reduced indefinite forms visited.
pub const DEFAULT_FORM_CAP: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassNumberMethod {
    FormEnumeration,
    CharacterSum,
    CycleCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassNumberResult {
    /// Field discriminant (`-D` or `m`).
    pub discriminant: i64,
    pub h: u64,
    pub method: ClassNumberMethod,
    /// Narrow class number, for real fields.
    pub narrow: Option<u64>,
    /// Norm of the fundamental unit, for real fields.
    pub unit_norm: Option<i8>,
}

/// The binary quadratic form `a x² + b x y + c y²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn discriminant(&self) -> i128 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        b * b - 4 * a * c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// Reduced positive definite: `|b| ≤ a ≤ c`, `b ≥ 0` if `|b| = a` or `a = c`.
    pub fn is_reduced_definite(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        self.discriminant() < 0
            && a > 0
            && b.abs() <= a
            && a <= c
            && (b >= 0 || (b.abs() != a && a != c))
    }

    /// Reduced indefinite: `0 < b < √Δ` and `√Δ - b < 2|a| < √Δ + b`.
    pub fn is_reduced_indefinite(&self) -> bool {
        let disc = self.discriminant();
        if disc <= 0 {
            return false;
        }
        let s = isqrt(disc as u64) as i64;
        if s * s == disc as i64 {
            return false;
        }
        let (a2, b) = (2 * self.a.abs(), self.b);
        0 < b && b <= s && a2 + b > s && a2 - b <= s
    }
}

/// Every primitive reduced positive definite form of discriminant `disc < 0`,
/// ascending in `(a, b)`.
pub fn reduced_forms_definite(disc: i64) -> Vec<QuadForm> {
    assert!(disc < 0 && disc.rem_euclid(4) <= 1, "not a negative discriminant");
    let d = -disc;
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= d {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let form = QuadForm::new(a, b, c);
            if form.is_reduced_definite() && form.is_primitive() {
                out.push(form);
            }
        }
        a += 1;
    }
    out
}

fn check_imag(d: u64) -> Result<()> {
    ensure_domain!(d >= 3 && d % 4 == 3, "D = {d} must be 3 mod 4");
    ensure_domain!(is_squarefree(d), "D = {d} must be squarefree");
    ensure_domain!(d <= i64::MAX as u64 / 4, "D = {d} too large");
    Ok(())
}

/// `h(D)` for `ℚ(√-D)`, `D ≡ 3 (mod 4)` squarefree, counting reduced forms of
/// discriminant `-D`.
pub fn class_number_imag(d: u64) -> Result<ClassNumberResult> {
    check_imag(d)?;
    let h = reduced_forms_definite(-(d as i64)).len() as u64;
    Ok(ClassNumberResult {
        discriminant: -(d as i64),
        h,
        method: ClassNumberMethod::FormEnumeration,
        narrow: None,
        unit_norm: None,
    })
}

/// `h(D) = -B₁(χ)` with `χ = (·/D)` summed over `[1, D]`.
pub fn class_number_via_character(d: u64) -> Result<ClassNumberResult> {
    check_imag(d)?;
    let chi = QuadraticCharacter::new(d)?;
    class_number_via_table(&chi)
}

/// Same as [`class_number_via_character`] with a prebuilt character table.
pub fn class_number_via_table(chi: &QuadraticCharacter) -> Result<ClassNumberResult> {
    let d = chi.modulus();
    let h = -b1_direct(d, |a| chi.value(a));
    if !h.is_integer() || *h.numer() < 1 {
        return Err(Error::InvariantViolation(format!(
            "-B1(chi_{d}) = {h} is not a positive integer"
        )));
    }
    Ok(ClassNumberResult {
        discriminant: -(d as i64),
        h: *h.numer() as u64,
        method: ClassNumberMethod::CharacterSum,
        narrow: None,
        unit_norm: None,
    })
}

/// Every reduced indefinite primitive form of nonsquare discriminant `disc > 0`.
pub fn reduced_forms_indefinite(disc: u64, cap: usize) -> Result<Vec<QuadForm>> {
    let s = isqrt(disc);
    ensure_domain!(s * s != disc, "{disc} is a square");
    ensure_domain!(disc % 4 <= 1, "{disc} is not a discriminant");
    let disc_i = disc as i64;
    let mut out = BTreeSet::new();
    for b in 1..=s as i64 {
        if (b - disc_i).rem_euclid(2) != 0 {
            continue;
        }
        // -ac = (Δ - b²)/4 > 0
        let neg_ac = (disc_i - b * b) / 4;
        let mut div = 1i64;
        while div * div <= neg_ac {
            if neg_ac % div == 0 {
                for abs_a in [div, neg_ac / div] {
                    for a in [abs_a, -abs_a] {
                        let form = QuadForm::new(a, b, -neg_ac / a);
                        if form.is_reduced_indefinite() && form.is_primitive() {
                            out.insert(form);
                        }
                    }
                    if div * div == neg_ac {
                        break;
                    }
                }
            }
            div += 1;
        }
        if out.len() > cap {
            return Err(Error::Resource(format!(
                "more than {cap} reduced forms of discriminant {disc}"
            )));
        }
    }
    Ok(out.into_iter().collect())
}

/// The reduction step `(a, b, c) -> (c, b', (b'² - Δ)/(4c))`, with
/// `b' ≡ -b (mod 2c)` taken in `(√Δ - 2|c|, √Δ)`.
pub fn rho(form: QuadForm) -> QuadForm {
    let disc = form.discriminant();
    let s = isqrt(disc as u64) as i64;
    let two_c = 2 * form.c.abs();
    // largest b' <= s with b' ≡ -b (mod 2|c|)
    let b_new = s - (s + form.b).rem_euclid(two_c);
    let c_new = ((b_new as i128 * b_new as i128 - disc) / (4 * form.c as i128)) as i64;
    QuadForm::new(form.c, b_new, c_new)
}

/// Number of ρ-cycles among the reduced forms of discriminant `disc`: the
/// narrow class number.
pub fn narrow_class_number(disc: u64, cap: usize) -> Result<u64> {
    let forms = reduced_forms_indefinite(disc, cap)?;
    let mut unvisited: BTreeSet<QuadForm> = forms.into_iter().collect();
    let mut cycles = 0;
    while let Some(&start) = unvisited.iter().next() {
        let mut f = start;
        loop {
            if !unvisited.remove(&f) {
                return Err(Error::InvariantViolation(format!(
                    "rho left the reduced set at {f:?} for discriminant {disc}"
                )));
            }
            f = rho(f);
            if f == start {
                break;
            }
        }
        cycles += 1;
    }
    Ok(cycles)
}

/// Partial quotients of one period of the continued fraction of `√m`.
pub fn sqrt_cf_period(m: u64) -> Vec<u64> {
    let s = isqrt(m);
    assert!(s * s != m, "{m} is a square");
    let (mut mk, mut dk, mut ak) = (0u64, 1u64, s);
    let mut out = Vec::new();
    loop {
        mk = dk * ak - mk;
        dk = (m - mk * mk) / dk;
        ak = (s + mk) / dk;
        out.push(ak);
        if ak == 2 * s {
            return out;
        }
    }
}

/// Norm of the fundamental unit of `ℚ(√m)`, from the parity of the period of `√m`.
pub fn fundamental_unit_norm(m: u64) -> i8 {
    if sqrt_cf_period(m).len() % 2 == 1 {
        -1
    } else {
        1
    }
}

/// `h_>(m)` for `ℚ(√m)` with `m ≡ 1 (mod 4)` prime.
pub fn class_number_real(m: u64) -> Result<ClassNumberResult> {
    class_number_real_with_cap(m, DEFAULT_FORM_CAP)
}

pub fn class_number_real_with_cap(m: u64, cap: usize) -> Result<ClassNumberResult> {
    ensure_domain!(m % 4 == 1 && is_prime(m), "m = {m} must be a prime 1 mod 4");
    let narrow = narrow_class_number(m, cap)?;
    let norm = fundamental_unit_norm(m);
    let h = if norm == -1 { narrow } else { narrow / 2 };
    Ok(ClassNumberResult {
        discriminant: m as i64,
        h,
        method: ClassNumberMethod::CycleCount,
        narrow: Some(narrow),
        unit_norm: Some(norm),
    })
}

/// Siegel-style sanity band: `log₂ h / log₂ D` for a class number `h` of
/// discriminant size `D`.
pub fn growth_exponent(h: u64, d: u64) -> f64 {
    libm::log2(h as f64) / libm::log2(d as f64)
}
