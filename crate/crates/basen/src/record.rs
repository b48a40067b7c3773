//! JSON-lines form of verification records. Every number is a decimal
//! string (`"a"` or `"a/b"`) so nothing passes through a float.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use basen_core::verify::VerificationRecord;
use basen_core::Exact;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonRecord {
    pub check: String,
    pub m: String,
    pub n: Option<String>,
    pub p: Option<String>,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    pub aux: BTreeMap<String, String>,
}

pub fn render_exact(v: &Exact) -> String {
    if *v.denom() == 1 {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn parse_exact(s: &str) -> Result<Exact, CliError> {
    let bad = || CliError::Format(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        None => Ok(Exact::from_integer(s.parse().map_err(|_| bad())?)),
        Some((a, b)) => {
            let a: i128 = a.parse().map_err(|_| bad())?;
            let b: i128 = b.parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Exact::new(a, b))
        }
    }
}

fn parse_u64(s: &str) -> Result<u64, CliError> {
    s.parse()
        .map_err(|_| CliError::Format(format!("not an unsigned integer: {s:?}")))
}

impl From<&VerificationRecord> for JsonRecord {
    fn from(r: &VerificationRecord) -> Self {
        Self {
            check: r.check.clone(),
            m: r.m.to_string(),
            n: r.n.map(|n| n.to_string()),
            p: r.p.map(|p| p.to_string()),
            lhs: render_exact(&r.lhs),
            rhs: render_exact(&r.rhs),
            pass: r.pass,
            aux: r
                .aux
                .iter()
                .map(|(k, v)| (k.clone(), render_exact(v)))
                .collect(),
        }
    }
}

impl TryFrom<&JsonRecord> for VerificationRecord {
    type Error = CliError;

    fn try_from(j: &JsonRecord) -> Result<Self, CliError> {
        let mut aux = BTreeMap::new();
        for (k, v) in &j.aux {
            aux.insert(k.clone(), parse_exact(v)?);
        }
        Ok(VerificationRecord {
            check: j.check.clone(),
            m: parse_u64(&j.m)?,
            n: j.n.as_deref().map(parse_u64).transpose()?,
            p: j.p.as_deref().map(parse_u64).transpose()?,
            lhs: parse_exact(&j.lhs)?,
            rhs: parse_exact(&j.rhs)?,
            pass: j.pass,
            aux,
        })
    }
}

pub fn to_line(r: &JsonRecord) -> String {
    serde_json::to_string(r).expect("record serializes")
}

pub fn write_records<'a>(
    out: &mut (impl Write + ?Sized),
    records: impl IntoIterator<Item = &'a VerificationRecord>,
) -> std::io::Result<()> {
    for r in records {
        writeln!(out, "{}", to_line(&JsonRecord::from(r)))?;
    }
    Ok(())
}

pub fn read_json_records(input: impl BufRead) -> Result<Vec<JsonRecord>, CliError> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

pub fn read_records(input: impl BufRead) -> Result<Vec<VerificationRecord>, CliError> {
    read_json_records(input)?
        .iter()
        .map(VerificationRecord::try_from)
        .collect()
}
