//! Range scans: chunk the `m` range, evaluate chunks on a worker pool, and
//! append them to `records.jsonl` in ascending order so output does not
//! depend on the worker count.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use basen_core::arith::{primes_in, smallest_primitive_roots};
use basen_core::charsums::SigmaConvention;
use basen_core::verify::{self, names, VerificationRecord};
use basen_core::Exact;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::record::{read_records, write_records};

pub const RECORDS_FILE: &str = "records.jsonl";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const HISTOGRAM_FILE: &str = "histograms.csv";
pub const CALIBRATION_FILE: &str = "calibration.json";

/// `n` values tried for the character-sum calibration when none are given.
pub const CLASS_NM_BASES: [u64; 5] = [3, 7, 11, 19, 23];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Check {
    Girstmair,
    HalfOrder,
    SCongruence,
    /// The `(m-5)(m+1)` congruence plus every step of its proof.
    MainPrime,
    ClassNm,
    Cor1,
    Scholz,
}

impl Check {
    /// Record names this check can emit.
    pub fn record_names(self) -> Vec<&'static str> {
        match self {
            Check::Girstmair => vec![names::GIRSTMAIR],
            Check::HalfOrder => vec![names::HALF_ORDER],
            Check::SCongruence => vec![names::S_CONGRUENCE_PART1, names::S_CONGRUENCE_PART2],
            Check::MainPrime => vec![
                names::MAIN_PRIME,
                names::STEP_S_CLASS_RELATION,
                names::STEP_S_EXPANSION,
                names::STEP_FIRST_TERM_INTERMEDIATE,
                names::STEP_FIRST_TERM,
                names::STEP_SECOND_TERM,
                names::STEP_COMBINED,
                names::STEP_ALT_DIGIT_SUM,
                names::STEP_FRAC_PAIRING,
                names::STEP_FRAC_ALT_SUM,
                names::STEP_FRAC_HALF_SUM,
            ],
            Check::ClassNm => vec![names::CLASS_NUMBER_NM],
            Check::Cor1 => vec![names::CLASS_NUMBER_3M],
            Check::Scholz => vec![names::SCHOLZ_1, "scholz_2_s1", "scholz_2_s2", "scholz_2_s3"],
        }
    }
}

/// How the bases `n` are chosen for each `m`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum NPolicy {
    /// Per-check defaults (see [`candidate_bases`]).
    #[default]
    Default,
    /// The `k` smallest primitive roots of `m`.
    Smallest(usize),
    List(Vec<u64>),
    /// `2 ≤ n ≤ max`, and `n < m`.
    UpTo(u64),
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub checks: Vec<Check>,
    pub m_min: u64,
    /// Exclusive.
    pub m_max: u64,
    pub n_policy: NPolicy,
    pub p_list: Option<Vec<u64>>,
    pub factor: Exact,
    pub workers: usize,
    /// Width of one chunk of the `m` range.
    pub segment: u64,
    pub out_dir: PathBuf,
    /// Keep records with `m` below this and continue from there.
    pub resume_from: Option<u64>,
}

impl ScanConfig {
    pub fn new(checks: Vec<Check>, m_max: u64, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            checks,
            m_min: 2,
            m_max,
            n_policy: NPolicy::Default,
            p_list: None,
            factor: Exact::from_integer(1),
            workers: 1,
            segment: 1000,
            out_dir: out_dir.into(),
            resume_from: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |s: &str| Err(CliError::Usage(s.to_string()));
        if self.checks.is_empty() {
            return usage("no checks selected");
        }
        if self.m_min >= self.m_max {
            return usage("m range is empty");
        }
        if self.workers == 0 {
            return usage("worker count must be at least 1");
        }
        if self.segment == 0 {
            return usage("segment size must be at least 1");
        }
        Ok(())
    }
}

/// Output directory: `RESULT_DIR` when set, else `results`.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os("RESULT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("results"))
}

/// Bases tried for `check` at modulus `m`, before the check's own filter.
pub fn candidate_bases(check: Check, m: u64, policy: &NPolicy) -> Vec<u64> {
    match policy {
        NPolicy::Smallest(k) => smallest_primitive_roots(m, *k).unwrap_or_default(),
        NPolicy::List(v) => v.clone(),
        NPolicy::UpTo(hi) => (2..=(*hi).min(m.saturating_sub(1))).collect(),
        NPolicy::Default => match check {
            Check::Girstmair => smallest_primitive_roots(m, 5).unwrap_or_default(),
            Check::HalfOrder => (2..m).collect(),
            Check::SCongruence => (2..m.min(200)).collect(),
            Check::MainPrime => (2..=50u64.min(m.saturating_sub(1))).collect(),
            Check::ClassNm => CLASS_NM_BASES.to_vec(),
            Check::Cor1 | Check::Scholz => vec![3],
        },
    }
}

fn allowed(p: u64, p_list: &Option<Vec<u64>>) -> bool {
    p_list.as_ref().is_none_or(|l| l.contains(&p))
}

/// Every record `check` produces at the prime `m`.
pub fn evaluate(check: Check, m: u64, cfg: &ScanConfig) -> Result<Vec<VerificationRecord>, CliError> {
    let mut out = Vec::new();
    let bases = candidate_bases(check, m, &cfg.n_policy);
    match check {
        Check::Girstmair => {
            for n in bases.into_iter().filter(|&n| verify::girstmair_tuple(m, n)) {
                out.push(verify::check_girstmair(m, n)?);
            }
        }
        Check::HalfOrder => {
            for n in bases.into_iter().filter(|&n| verify::half_order_tuple(m, n)) {
                out.push(verify::check_half_order(m, n)?);
            }
        }
        Check::SCongruence => {
            for n in bases.into_iter().filter(|&n| verify::girstmair_tuple(m, n)) {
                for p in verify::part1_primes(n, m) {
                    if allowed(p, &cfg.p_list) {
                        out.push(verify::check_s_congruence(m, n, p, 1)?);
                    }
                }
                for p in verify::part2_primes(n, m) {
                    if allowed(p, &cfg.p_list) {
                        out.push(verify::check_s_congruence(m, n, p, 2)?);
                    }
                }
            }
        }
        Check::MainPrime => {
            for n in bases.into_iter().filter(|&n| verify::girstmair_tuple(m, n)) {
                for p in verify::part1_primes(n, m) {
                    if allowed(p, &cfg.p_list) {
                        out.push(verify::check_main_prime(m, n, p)?);
                        out.extend(verify::check_proof_steps(m, n, p)?);
                    }
                }
            }
        }
        Check::ClassNm => {
            for n in bases.into_iter().filter(|&n| verify::class_nm_tuple(m, n)) {
                out.push(verify::check_class_number_nm(m, n, cfg.factor)?);
            }
        }
        Check::Cor1 => {
            if verify::class_number_3m_modulus(m) {
                out.push(verify::check_class_number_3m(m)?);
            }
        }
        Check::Scholz => {
            if verify::class_number_3m_modulus(m) {
                out.extend(verify::check_scholz(m)?);
            }
        }
    }
    Ok(out)
}

/// All records for primes in `[lo, hi)`, in canonical order.
pub fn evaluate_chunk(lo: u64, hi: u64, cfg: &ScanConfig) -> Result<Vec<VerificationRecord>, CliError> {
    let mut out = Vec::new();
    if hi <= lo {
        return Ok(Vec::new());
    }
    for m in primes_in(lo, hi - 1) {
        for &check in &cfg.checks {
            out.extend(evaluate(check, m, cfg)?);
        }
    }
    sort_records(&mut out);
    Ok(out)
}

pub fn sort_records(records: &mut [VerificationRecord]) {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct SummaryRow {
    pub check: String,
    pub tested: u64,
    pub passed: u64,
    pub failed: u64,
    pub first_fail_m: Option<u64>,
    pub first_fail_n: Option<u64>,
    pub first_fail_p: Option<u64>,
}

/// Per-check tallies; `expected` names get a row even with no records.
pub fn summarize(records: &[VerificationRecord], expected: &[&str]) -> Vec<SummaryRow> {
    let mut rows: BTreeMap<String, SummaryRow> = BTreeMap::new();
    let blank = |name: &str| SummaryRow {
        check: name.to_string(),
        tested: 0,
        passed: 0,
        failed: 0,
        first_fail_m: None,
        first_fail_n: None,
        first_fail_p: None,
    };
    for name in expected {
        rows.insert(name.to_string(), blank(name));
    }
    for r in records {
        let row = rows.entry(r.check.clone()).or_insert_with(|| blank(&r.check));
        row.tested += 1;
        if r.pass {
            row.passed += 1;
        } else {
            row.failed += 1;
            if row.first_fail_m.is_none() {
                row.first_fail_m = Some(r.m);
                row.first_fail_n = r.n;
                row.first_fail_p = r.p;
            }
        }
    }
    rows.into_values().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HistogramRow {
    pub p: u64,
    pub m_mod_p: u64,
    pub tuples: u64,
    pub printed_product_zero: u64,
}

/// Distribution of `m mod p` over the `(m-5)(m+1)` records.
pub fn main_prime_histogram(records: &[VerificationRecord]) -> Vec<HistogramRow> {
    let mut bins: BTreeMap<(u64, u64), (u64, u64)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.check == names::MAIN_PRIME) {
        let p = r.p.unwrap_or(0);
        let bin = bins.entry((p, r.m % p.max(1))).or_default();
        bin.0 += 1;
        bin.1 += r.pass as u64;
    }
    bins.into_iter()
        .map(|((p, m_mod_p), (tuples, zero))| HistogramRow {
            p,
            m_mod_p,
            tuples,
            printed_product_zero: zero,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CalibrationCombo {
    pub factor: i128,
    pub convention: &'static str,
    pub matched: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CalibrationReport {
    pub tested: usize,
    pub factor: Option<i128>,
    pub conventions: Vec<&'static str>,
    pub combos: Vec<CalibrationCombo>,
}

pub fn calibration_report(records: &[VerificationRecord]) -> CalibrationReport {
    let c = verify::calibrate(records);
    CalibrationReport {
        tested: c.tested,
        factor: c.factor,
        conventions: c.conventions.iter().map(|&v: &SigmaConvention| v.name()).collect(),
        combos: c
            .combos
            .iter()
            .map(|&(factor, conv, matched)| CalibrationCombo {
                factor,
                convention: conv.name(),
                matched,
            })
            .collect(),
    }
}

#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub records: Vec<VerificationRecord>,
    pub summary: Vec<SummaryRow>,
    pub records_path: PathBuf,
}

impl ScanOutcome {
    pub fn failed(&self) -> u64 {
        self.summary.iter().map(|r| r.failed).sum()
    }
}

fn load(path: &Path) -> Result<Vec<VerificationRecord>, CliError> {
    read_records(BufReader::new(File::open(path)?))
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))
}

/// Runs the scan and writes records, summary and the per-check extras.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanOutcome, CliError> {
    cfg.validate()?;
    create_dir(&cfg.out_dir)?;
    let records_path = cfg.out_dir.join(RECORDS_FILE);
    let mut start = cfg.m_min;
    let kept = match cfg.resume_from {
        Some(w) => {
            start = start.max(w);
            if records_path.exists() {
                load(&records_path)?.into_iter().filter(|r| r.m < w).collect()
            } else {
                Vec::new()
            }
        }
        None => Vec::new(),
    };
    let file = File::create(&records_path)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", records_path.display())))?;
    let mut out = BufWriter::new(file);
    write_records(&mut out, &kept)?;
    out.flush()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start workers: {e}")))?;
    let chunks: Vec<(u64, u64)> = (start..cfg.m_max)
        .step_by(cfg.segment as usize)
        .map(|lo| (lo, lo.saturating_add(cfg.segment).min(cfg.m_max)))
        .collect();
    // bounded batches keep memory flat on long scans; each batch is flushed
    // before the next starts, so an interrupted run resumes from a chunk edge
    for batch in chunks.chunks(cfg.workers * 4) {
        let done: Vec<Result<Vec<VerificationRecord>, CliError>> = pool.install(|| {
            batch
                .par_iter()
                .map(|&(lo, hi)| evaluate_chunk(lo, hi, cfg))
                .collect()
        });
        for part in done {
            write_records(&mut out, &part?)?;
        }
        out.flush()?;
    }
    drop(out);

    let records = load(&records_path)?;
    let expected: Vec<&str> = cfg.checks.iter().flat_map(|c| c.record_names()).collect();
    let summary = summarize(&records, &expected);
    let mut w = csv::Writer::from_path(cfg.out_dir.join(SUMMARY_FILE))?;
    for row in &summary {
        w.serialize(row)?;
    }
    w.flush()?;
    if cfg.checks.contains(&Check::MainPrime) {
        let mut w = csv::Writer::from_path(cfg.out_dir.join(HISTOGRAM_FILE))?;
        for row in main_prime_histogram(&records) {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    if cfg.checks.contains(&Check::ClassNm) {
        let report = calibration_report(&records);
        let mut f = File::create(cfg.out_dir.join(CALIBRATION_FILE))?;
        serde_json::to_writer_pretty(&mut f, &report)?;
        writeln!(f)?;
    }
    Ok(ScanOutcome {
        records,
        summary,
        records_path,
    })
}
