use std::fs;
use std::io::BufReader;
use std::path::Path;

use basen::record::{read_json_records, read_records, write_records, JsonRecord};
use basen::scan::{run_scan, Check, NPolicy, ScanConfig, RECORDS_FILE, SUMMARY_FILE};
use basen_core::verify::{check_class_number_3m, check_main_prime, check_proof_steps, VerificationRecord};
use basen_core::Exact;

fn read(dir: &Path, name: &str) -> Vec<u8> {
    fs::read(dir.join(name)).unwrap()
}

fn config(dir: &Path, checks: Vec<Check>, m_max: u64, workers: usize, segment: u64) -> ScanConfig {
    let mut cfg = ScanConfig::new(checks, m_max, dir);
    cfg.workers = workers;
    cfg.segment = segment;
    cfg
}

#[test]
fn json_round_trip_is_lossless() {
    let mut records = vec![check_class_number_3m(17).unwrap(), check_main_prime(19, 10, 11).unwrap()];
    records.push(
        VerificationRecord::identity("fraction", 5, None, Some(3), Exact::new(-5, 6), Exact::new(7, 2))
            .with("big", Exact::from_integer(i128::MAX)),
    );
    records.extend(check_proof_steps(19, 10, 11).unwrap());
    let mut buf = Vec::new();
    write_records(&mut buf, records.iter()).unwrap();
    let back = read_records(BufReader::new(&buf[..])).unwrap();
    assert_eq!(back, records);

    let json = read_json_records(BufReader::new(&buf[..])).unwrap();
    for line in &json {
        let text = serde_json::to_string(line).unwrap();
        assert_eq!(&serde_json::from_str::<JsonRecord>(&text).unwrap(), line);
    }
    let frac = json.iter().find(|r| r.check == "fraction").unwrap();
    assert_eq!((frac.lhs.as_str(), frac.rhs.as_str()), ("-5/6", "7/2"));
    assert_eq!(frac.aux["big"], i128::MAX.to_string());
}

#[test]
fn malformed_lines_are_rejected() {
    let bad = b"{\"check\":\"x\",\"m\":\"7\",\"n\":null,\"p\":null,\"lhs\":\"1.5\",\"rhs\":\"0\",\"pass\":true,\"aux\":{}}\n";
    assert!(read_records(BufReader::new(&bad[..])).is_err());
    assert!(read_json_records(BufReader::new(&b"not json\n"[..])).is_err());
}

#[test]
fn output_is_independent_of_workers_and_segments() {
    let checks = vec![Check::Girstmair, Check::SCongruence, Check::Cor1, Check::MainPrime];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_scan(&config(a.path(), checks.clone(), 700, 1, 1000)).unwrap();
    run_scan(&config(b.path(), checks, 700, 3, 61)).unwrap();
    for name in fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()) {
        let name = name.to_str().unwrap();
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
}

#[test]
fn resume_reproduces_full_run() {
    let checks = vec![Check::Girstmair, Check::HalfOrder];
    let full = tempfile::tempdir().unwrap();
    run_scan(&config(full.path(), checks.clone(), 400, 1, 100)).unwrap();

    let part = tempfile::tempdir().unwrap();
    run_scan(&config(part.path(), checks.clone(), 250, 1, 100)).unwrap();
    let mut resumed = config(part.path(), checks, 400, 2, 100);
    resumed.resume_from = Some(250);
    run_scan(&resumed).unwrap();

    assert_eq!(read(full.path(), RECORDS_FILE), read(part.path(), RECORDS_FILE));
    assert_eq!(read(full.path(), SUMMARY_FILE), read(part.path(), SUMMARY_FILE));
}

#[test]
fn empty_qualifying_set() {
    let dir = tempfile::tempdir().unwrap();
    // No primes in [24, 29).
    let mut cfg = config(dir.path(), vec![Check::Girstmair, Check::Cor1], 29, 1, 1000);
    cfg.m_min = 24;
    let outcome = run_scan(&cfg).unwrap();
    assert!(outcome.records.is_empty());
    assert!(read(dir.path(), RECORDS_FILE).is_empty());
    assert_eq!(outcome.summary.len(), 2);
    assert!(outcome.summary.iter().all(|r| r.tested == 0));
    let csv = String::from_utf8(read(dir.path(), SUMMARY_FILE)).unwrap();
    assert!(csv.starts_with("check,tested,passed,failed,first_fail_m,first_fail_n,first_fail_p"));
}

#[test]
fn explicit_n_list_and_p_filter() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), vec![Check::MainPrime], 200, 1, 1000);
    cfg.n_policy = NPolicy::List(vec![10]);
    cfg.p_list = Some(vec![11]);
    let outcome = run_scan(&cfg).unwrap();
    assert!(!outcome.records.is_empty());
    assert!(outcome.records.iter().all(|r| r.n == Some(10) && r.p == Some(11)));
    assert!(dir.path().join("histograms.csv").exists());
}
