use std::path::Path;
use std::process::Command;

use basen::cli::run;
use basen::record::{read_json_records, JsonRecord};

fn basen(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("basen").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn records(stdout: &str) -> Vec<JsonRecord> {
    stdout
        .lines()
        .filter(|l| l.starts_with('{'))
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn expand_examples() {
    let (code, out, _) = basen(&["expand", "--m", "7", "--n", "10"]);
    assert_eq!(code, 0);
    assert!(out.contains("period=6 digits=1,4,2,8,5,7"), "{out}");
    assert!(out.contains("reconstruction=ok"));

    let (code, out, _) = basen(&["expand", "--m", "3", "--n", "10"]);
    assert_eq!(code, 0);
    assert!(out.contains("period=1 digits=3"));

    let (code, _, err) = basen(&["expand", "--m", "4", "--n", "2"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn verify_examples() {
    let (code, out, _) = basen(&["verify", "girstmair", "--m", "7", "--n", "10"]);
    assert_eq!(code, 0);
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    assert!(recs[0].pass);

    let (code, out, _) = basen(&["verify", "cor1", "--m", "5"]);
    assert_eq!(code, 0);
    let recs = records(&out);
    assert_eq!((recs[0].lhs.as_str(), recs[0].rhs.as_str()), ("2", "2"));

    let (code, _, _) = basen(&["verify", "girstmair", "--m", "8", "--n", "10"]);
    assert_eq!(code, 2);
}

#[test]
fn strict_exit_code_tracks_failures() {
    // The printed product is nonzero mod 11 here.
    let args = ["verify", "main-prime", "--m", "19", "--n", "10", "--p", "11"];
    let (code, out, err) = basen(&args);
    assert_eq!(code, 0);
    assert!(err.contains("failed=1"), "{err}");
    let rec = &records(&out)[0];
    assert_eq!(rec.aux["m_mod_p"], "8");
    assert_eq!(rec.aux["printed_product_mod_p"], "5");

    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(basen(&strict).0, 1);
    assert_eq!(basen(&["verify", "girstmair", "--m", "7", "--n", "10", "--strict"]).0, 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(basen(&["frobnicate"]).0, 2);
    assert_eq!(basen(&["expand", "--m", "7"]).0, 2);
    assert_eq!(basen(&["expand", "--m", "x", "--n", "10"]).0, 2);
    assert_eq!(basen(&["scan", "--check", "girstmair", "--m-min", "50", "--m-max", "10"]).0, 2);
    assert_eq!(basen(&["scan", "--check", "girstmair", "--m-max", "50", "--workers", "0"]).0, 2);
    assert_eq!(basen(&["ff", "rudnick", "--q", "4", "--deg-max", "2"]).0, 2);
    assert_eq!(basen(&["verify", "cor1", "--m", "7"]).0, 2);
}

#[test]
fn stats_sigma_rows() {
    let (code, out, _) = basen(&["stats", "sigma", "--m-max", "100"]);
    assert_eq!(code, 0);
    let ms: Vec<u64> = out
        .lines()
        .skip(1)
        .filter_map(|l| l.split(',').next()?.parse().ok())
        .collect();
    assert_eq!(ms, [5, 17, 29, 53, 89]);

    let (code, out, _) = basen(&["stats", "sigma", "--m-min", "50", "--m-max", "52"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.chars().next().is_some_and(|c| c.is_ascii_digit())).count(), 0);
}

#[test]
fn stats_artin_window() {
    let (code, out, _) = basen(&["stats", "artin", "--n", "2", "--x-max", "10000"]);
    assert_eq!(code, 0);
    let last = out.lines().last().unwrap();
    let ratio: f64 = last.rsplit(',').next().unwrap().parse().unwrap();
    assert!((0.37..0.40).contains(&ratio), "{last}");
}

#[test]
fn ff_examples() {
    let (code, out, _) = basen(&["ff", "rudnick", "--q", "2", "--deg-max", "4", "--base", "x", "--strict"]);
    assert_eq!(code, 0);
    assert!(records(&out).iter().all(|r| r.pass));

    let (code, out, _) = basen(&["ff", "rudnick", "--q", "3", "--deg-max", "2", "--base", "x"]);
    assert_eq!(code, 0);
    assert!(records(&out).iter().any(|r| r.m == "1,0,1"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_basen");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["expand", "--m", "7", "--n", "10"]), Some(0));
    assert_eq!(status(&["expand", "--m", "4", "--n", "2"]), Some(2));
    assert_eq!(status(&["verify", "main-prime", "--m", "19", "--n", "10", "--p", "11", "--strict"]), Some(1));
    assert_eq!(status(&["--help"]), Some(0));
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out = blocker.join("sub");
    let (code, _, _) = basen(&["scan", "--check", "girstmair", "--m-max", "50", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(!Path::new(&out).exists());
}

#[test]
fn scan_writes_parseable_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, err) = basen(&["scan", "--check", "girstmair,cor1", "--m-max", "200", "--out", out]);
    assert_eq!(code, 0, "{err}");
    let recs = read_json_records(std::io::BufReader::new(std::fs::File::open(dir.path().join("records.jsonl")).unwrap())).unwrap();
    assert!(recs.iter().any(|r| r.check == "class_number_3m" && r.m == "17"));
}
