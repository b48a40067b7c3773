use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use basen_core::digits::{expand_with_cap, DEFAULT_DIGIT_CAP};
use basen_core::ffield::PolyFq;
use basen_core::verify::{self, VerificationRecord};
use basen_core::Exact;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;
use crate::ff::{self, BaseSpec};
use crate::record::{parse_exact, to_line, write_records};
use crate::scan::{self, Check, NPolicy, ScanConfig};
use crate::stats;

#[derive(Debug, Parser)]
#[command(name = "basen", version, about = "Digit expansions of 1/m and the class-number identities they satisfy")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print one period of 1/m in base n.
    Expand {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        /// Digits shown before truncating.
        #[arg(long, default_value_t = 200)]
        limit: usize,
    },
    /// Evaluate one check and print its records as JSON lines.
    Verify(VerifyArgs),
    /// Run checks over a range of m and write result files.
    Scan(ScanArgs),
    #[command(subcommand)]
    Stats(StatsCommand),
    #[command(subcommand)]
    Ff(FfCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyCheck {
    Girstmair,
    HalfOrder,
    SCongruence,
    MainPrime,
    ProofSteps,
    ClassNm,
    Cor1,
    Scholz,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub check: VerifyCheck,
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    /// Part of the S congruence; inferred from p when omitted.
    #[arg(long)]
    pub part: Option<u8>,
    /// Prefactor for class-nm, as an integer or a/b.
    #[arg(long, default_value = "1")]
    pub factor: String,
    /// Exit 1 when any record fails.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NPolicyArg {
    Default,
    Smallest5,
    All,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long = "check", required = true, value_delimiter = ',')]
    pub checks: Vec<Check>,
    #[arg(long, default_value_t = 2)]
    pub m_min: u64,
    /// Exclusive upper bound on m.
    #[arg(long)]
    pub m_max: u64,
    #[arg(long, value_enum, default_value_t = NPolicyArg::Default)]
    pub n_policy: NPolicyArg,
    /// Explicit bases; overrides --n-policy.
    #[arg(long = "n", value_delimiter = ',')]
    pub n_list: Vec<u64>,
    /// Bases 2..=N below m; overrides --n-policy.
    #[arg(long)]
    pub n_max: Option<u64>,
    #[arg(long = "p", value_delimiter = ',')]
    pub p_list: Vec<u64>,
    #[arg(long, default_value = "1")]
    pub factor: String,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Width of one chunk of the m range.
    #[arg(long, default_value_t = 1000)]
    pub segment: u64,
    /// Output directory (default: $RESULT_DIR, else ./results).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Keep existing records with m below this value and continue from it.
    #[arg(long)]
    pub resume_from: Option<u64>,
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum StatsCommand {
    /// Per-m deviation of σ(0,1) from m/6 as CSV.
    Sigma {
        #[arg(long, default_value_t = 2)]
        m_min: u64,
        /// Inclusive.
        #[arg(long)]
        m_max: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Share of primes up to x with n as a primitive root.
    Artin {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        x_max: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum FfCommand {
    /// Digit sums S_B(P) for every monic irreducible P up to a degree.
    Rudnick {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        deg_max: u32,
        /// `x`, `all`, or an ascending coefficient list such as 1,1.
        #[arg(long, default_value = "x")]
        base: String,
        /// Largest deg B when --base all.
        #[arg(long, default_value_t = 2)]
        base_deg_max: u32,
        /// Also stream every digit when deg P is at most this.
        #[arg(long, default_value_t = 4)]
        stream_deg: u32,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        strict: bool,
    },
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Expand { m, n, limit } => cmd_expand(m, n, limit, out),
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::Scan(a) => cmd_scan(&a, out),
        Command::Stats(s) => cmd_stats(s, out, err),
        Command::Ff(f) => cmd_ff(f, out, err),
    }
}

fn cmd_expand(m: u64, n: u64, limit: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let e = expand_with_cap(m, n, DEFAULT_DIGIT_CAP)?;
    let shown: Vec<String> = e.digits().iter().take(limit).map(|d| d.to_string()).collect();
    let mut line = format!("period={} digits={}", e.period(), shown.join(","));
    if e.digits().len() > limit {
        line.push_str(&format!(",... ({} more)", e.digits().len() - limit));
    }
    writeln!(out, "{line}")?;
    let ok = e.period() > 20_000 || e.reconstructs();
    if e.period() > 20_000 {
        writeln!(out, "reconstruction=skipped")?;
    } else {
        writeln!(out, "reconstruction={}", if ok { "ok" } else { "FAILED" })?;
    }
    Ok(if ok { 0 } else { 1 })
}

fn need(v: Option<u64>, name: &str) -> Result<u64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{name} is required for this check")))
}

fn parse_factor(s: &str) -> Result<Exact, CliError> {
    parse_exact(s).map_err(|_| CliError::Usage(format!("bad factor {s:?}")))
}

pub fn verify_records(a: &VerifyArgs) -> Result<Vec<VerificationRecord>, CliError> {
    let m = a.m;
    Ok(match a.check {
        VerifyCheck::Girstmair => vec![verify::check_girstmair(m, need(a.n, "n")?)?],
        VerifyCheck::HalfOrder => vec![verify::check_half_order(m, need(a.n, "n")?)?],
        VerifyCheck::SCongruence => {
            let (n, p) = (need(a.n, "n")?, need(a.p, "p")?);
            let part = a.part.unwrap_or(if p != 0 && (n + 1) % p == 0 { 1 } else { 2 });
            vec![verify::check_s_congruence(m, n, p, part)?]
        }
        VerifyCheck::MainPrime => {
            vec![verify::check_main_prime(m, need(a.n, "n")?, need(a.p, "p")?)?]
        }
        VerifyCheck::ProofSteps => {
            verify::check_proof_steps(m, need(a.n, "n")?, need(a.p, "p")?)?
        }
        VerifyCheck::ClassNm => vec![verify::check_class_number_nm(
            m,
            need(a.n, "n")?,
            parse_factor(&a.factor)?,
        )?],
        VerifyCheck::Cor1 => vec![verify::check_class_number_3m(m)?],
        VerifyCheck::Scholz => verify::check_scholz(m)?,
    })
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let records = verify_records(a)?;
    write_records(out, &records)?;
    let failed = records.iter().filter(|r| !r.pass).count();
    writeln!(err, "records={} passed={} failed={}", records.len(), records.len() - failed, failed)?;
    Ok(if a.strict && failed > 0 { 1 } else { 0 })
}

pub fn scan_config(a: &ScanArgs) -> Result<ScanConfig, CliError> {
    let n_policy = if !a.n_list.is_empty() {
        NPolicy::List(a.n_list.clone())
    } else if let Some(hi) = a.n_max {
        NPolicy::UpTo(hi)
    } else {
        match a.n_policy {
            NPolicyArg::Default => NPolicy::Default,
            NPolicyArg::Smallest5 => NPolicy::Smallest(5),
            NPolicyArg::All => NPolicy::UpTo(u64::MAX),
        }
    };
    let cfg = ScanConfig {
        checks: a.checks.clone(),
        m_min: a.m_min,
        m_max: a.m_max,
        n_policy,
        p_list: (!a.p_list.is_empty()).then(|| a.p_list.clone()),
        factor: parse_factor(&a.factor)?,
        workers: a.workers,
        segment: a.segment,
        out_dir: a.out.clone().unwrap_or_else(scan::default_out_dir),
        resume_from: a.resume_from,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_scan(a: &ScanArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = scan_config(a)?;
    let outcome = scan::run_scan(&cfg)?;
    for row in &outcome.summary {
        writeln!(
            out,
            "{} tested={} passed={} failed={}",
            row.check, row.tested, row.passed, row.failed
        )?;
    }
    writeln!(out, "records written to {}", outcome.records_path.display())?;
    Ok(if a.strict && outcome.failed() > 0 { 1 } else { 0 })
}

fn cmd_stats(s: StatsCommand, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match s {
        StatsCommand::Sigma {
            m_min,
            m_max,
            workers,
            out: path,
        } => {
            let summary = stats::sigma_summary(m_min, m_max.saturating_add(1), workers)?;
            match path {
                Some(p) => stats::write_sigma_csv(File::create(p)?, &summary)?,
                None => stats::write_sigma_csv(&mut *out, &summary)?,
            }
            writeln!(
                err,
                "count={} max_normalized={:.9} argmax={} mean_normalized={:.9}",
                summary.entries.len(),
                summary.max_normalized,
                summary.argmax.map_or(String::from("none"), |m| m.to_string()),
                summary.mean_normalized
            )?;
        }
        StatsCommand::Artin { n, x_max } => {
            let rows = stats::artin_rows(n, x_max)?;
            stats::write_artin_csv(&mut *out, &rows)?;
        }
    }
    Ok(0)
}

fn cmd_ff(f: FfCommand, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let FfCommand::Rudnick {
        q,
        deg_max,
        base,
        base_deg_max,
        stream_deg,
        workers,
        strict,
    } = f;
    let spec = match base.as_str() {
        "x" => BaseSpec::X,
        "all" => BaseSpec::All(base_deg_max),
        coeffs => BaseSpec::Explicit(PolyFq::parse(q, coeffs)?),
    };
    let bases = spec.bases(q)?;
    let (cases, s) = ff::sweep(q, deg_max, &bases, stream_deg, workers)?;
    for c in &cases {
        writeln!(out, "{}", to_line(&ff::case_record(c)))?;
    }
    writeln!(
        err,
        "q={} tested={} passed={} failed={} outside_hypothesis={} outside_vanishing={} skipped={} cross_checked={}",
        s.q, s.tested, s.passed, s.failed, s.outside_hypothesis, s.outside_vanishing, s.skipped, s.cross_checked
    )?;
    Ok(if strict && s.failed > 0 { 1 } else { 0 })
}
