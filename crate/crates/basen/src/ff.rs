//! Exhaustive digit-sum sweeps over `F_q[x]`, parallel over `P`.

use std::collections::BTreeMap;

use basen_core::ffield::{
    bases_up_to, irreducibles_up_to, rudnick_cases, PolyFq, RudnickCase, RudnickSummary,
};
use rayon::prelude::*;

use crate::error::CliError;
use crate::record::JsonRecord;

pub const RUDNICK_CHECK: &str = "rudnick";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseSpec {
    X,
    /// Every `B` with `1 ≤ deg B ≤ d`.
    All(u32),
    Explicit(PolyFq),
}

impl BaseSpec {
    pub fn bases(&self, q: u64) -> Result<Vec<PolyFq>, CliError> {
        Ok(match self {
            BaseSpec::X => vec![PolyFq::x(q)?],
            BaseSpec::All(d) => bases_up_to(q, *d)?,
            BaseSpec::Explicit(b) => vec![b.clone()],
        })
    }
}

pub fn sweep(
    q: u64,
    deg_max: u32,
    bases: &[PolyFq],
    stream_deg: u32,
    workers: usize,
) -> Result<(Vec<RudnickCase>, RudnickSummary), CliError> {
    let ps = irreducibles_up_to(q, deg_max)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start workers: {e}")))?;
    let parts = pool.install(|| {
        ps.par_iter()
            .map(|p| rudnick_cases(p, bases, stream_deg))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut summary = RudnickSummary::new(q);
    let mut cases = Vec::new();
    for (c, s) in parts {
        summary.merge(&s);
        cases.extend(c);
    }
    Ok((cases, summary))
}

/// `P` and `B` go in the `m` and `n` fields as coefficient lists, `q` in `p`.
pub fn case_record(c: &RudnickCase) -> JsonRecord {
    let mut aux = BTreeMap::new();
    aux.insert("period".to_string(), c.period.to_string());
    aux.insert(
        "coprime_b_minus_1".to_string(),
        (c.coprime_b_minus_1 as u8).to_string(),
    );
    aux.insert("sum".to_string(), c.sum.render());
    JsonRecord {
        check: RUDNICK_CHECK.to_string(),
        m: c.p.render(),
        n: Some(c.b.render()),
        p: Some(c.p.q().to_string()),
        lhs: c.sum.render(),
        rhs: "0".to_string(),
        pass: c.pass(),
        aux,
    }
}
