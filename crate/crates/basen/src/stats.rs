//! Empirical statistics: the `σ(0,1) - m/6` deviation and the share of
//! primes for which a fixed base is a primitive root.

use std::io::Write;

use basen_core::arith::{for_each_prime, is_primitive_root, primes_in, DEFAULT_SEGMENT};
use basen_core::verify::{class_number_3m_modulus, sigma_deviation, summarize_deviations, SigmaDeviationSummary};
use rayon::prelude::*;

use crate::error::CliError;
use crate::record::render_exact;

/// Deviations for every qualifying prime in `[m_min, m_max)`.
pub fn sigma_summary(m_min: u64, m_max: u64, workers: usize) -> Result<SigmaDeviationSummary, CliError> {
    if m_min >= m_max {
        return Ok(summarize_deviations(Vec::new()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start workers: {e}")))?;
    let ms: Vec<u64> = primes_in(m_min, m_max - 1)
        .into_iter()
        .filter(|&m| class_number_3m_modulus(m))
        .collect();
    let entries = pool.install(|| {
        ms.par_iter()
            .map(|&m| sigma_deviation(m))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(summarize_deviations(entries))
}

pub fn write_sigma_csv(out: impl Write, s: &SigmaDeviationSummary) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "sigma", "delta", "normalized"])?;
    for e in &s.entries {
        w.write_record([
            e.m.to_string(),
            e.sigma.to_string(),
            render_exact(&e.delta),
            format!("{:.9}", e.normalized),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ArtinRow {
    pub x: u64,
    pub primes: u64,
    pub hits: u64,
    pub ratio: f64,
}

/// Running share of primes `p ≤ x`, `p ∤ n`, with `n` a primitive root,
/// reported at powers of ten and at `x_max`.
pub fn artin_rows(n: u64, x_max: u64) -> Result<Vec<ArtinRow>, CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("base must be at least 2, got {n}")));
    }
    let mut rows = Vec::new();
    let (mut primes, mut hits) = (0u64, 0u64);
    let mut next = 10u64;
    let push = |x: u64, primes: u64, hits: u64, rows: &mut Vec<ArtinRow>| {
        let ratio = if primes == 0 { 0.0 } else { hits as f64 / primes as f64 };
        rows.push(ArtinRow { x, primes, hits, ratio });
    };
    let mut err = None;
    for_each_prime(2, x_max.saturating_add(1), DEFAULT_SEGMENT, |p| {
        while p > next && next < x_max {
            push(next, primes, hits, &mut rows);
            next = next.saturating_mul(10);
        }
        if n % p == 0 {
            return;
        }
        primes += 1;
        match is_primitive_root(n, p) {
            Ok(true) => hits += 1,
            Ok(false) => {}
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    while next < x_max {
        push(next, primes, hits, &mut rows);
        next = next.saturating_mul(10);
    }
    if x_max >= 2 {
        push(x_max, primes, hits, &mut rows);
    }
    Ok(rows)
}

pub fn write_artin_csv(out: impl Write, rows: &[ArtinRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "primes", "hits", "ratio"])?;
    for r in rows {
        w.write_record([
            r.x.to_string(),
            r.primes.to_string(),
            r.hits.to_string(),
            format!("{:.6}", r.ratio),
        ])?;
    }
    w.flush()?;
    Ok(())
}
