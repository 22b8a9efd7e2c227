use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bmv_measure::io::InstanceFile;
use bmv_measure::{Matrix, RepresentingMeasure, VerificationReport};

fn bmv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bmv")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_instance(path: &Path, a: &Matrix, b: &Matrix) {
    fs::write(path, InstanceFile::from_matrices(a, b).to_json()).unwrap();
}

#[test]
fn random_is_deterministic_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert!(bmv(&["random", "--n", "3", "--seed", "42", "--out", s(&p1)]).status.success());
    assert!(bmv(&["random", "--n", "3", "--seed", "42", "--out", s(&p2)]).status.success());
    assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
    let f = InstanceFile::parse(&fs::read_to_string(&p1).unwrap()).unwrap();
    assert_eq!(f.seed, Some(42));
    assert!(f.to_pair().is_ok());

    let out = bmv(&["random", "--n", "1", "--out", s(&dir.path().join("c.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 2"));
}

#[test]
fn commuting_measure_has_header_only_density() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.json");
    write_instance(&inst, &Matrix::from_diag(&[1.0, 2.0]), &Matrix::from_diag(&[3.0, 4.0]));
    let out = dir.path().join("out");
    assert!(bmv(&["measure", s(&inst), "--out", s(&out)]).status.success());
    assert_eq!(fs::read_to_string(out.join("density.csv")).unwrap(), "t,w,imag_residual\n");
    let mu: RepresentingMeasure = serde_json::from_str(&fs::read_to_string(out.join("measure.json")).unwrap()).unwrap();
    assert_eq!(mu.atoms.len(), 2);
    assert!((mu.atoms[0].location - 3.0).abs() < 1e-12 && (mu.atoms[0].weight - 1f64.exp()).abs() < 1e-12);
}

#[test]
fn two_by_two_measure_rows_are_positive_and_sorted() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.json");
    let a = Matrix::from_real_rows(&[&[0.2, 0.9], &[0.9, -0.4]]).unwrap();
    write_instance(&inst, &a, &Matrix::from_diag(&[0.3, 1.8]));
    let out = dir.path().join("out");
    assert!(bmv(&["measure", s(&inst), "--grid", "32", "--out", s(&out)]).status.success());
    let csv = fs::read_to_string(out.join("density.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,w,imag_residual"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 32);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    assert!(rows.iter().all(|r| r[1] > 0.0));
}

#[test]
fn verify_writes_report_and_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.json");
    assert!(bmv(&["random", "--n", "3", "--seed", "7", "--out", s(&inst)]).status.success());
    let out = dir.path().join("v");
    let r = bmv(&["verify", s(&inst), "--m-max", "6", "--t-samples", "0,1,3", "--out", s(&out)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let rep: VerificationReport = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert!(rep.passed());
    assert!(rep.checks.iter().any(|c| c.name == "laplace t=3"));
    assert!(rep.checks.iter().any(|c| c.name == "complete monotonicity m=6"));
    assert_eq!(rep.instance_digest.len(), 64);
}

#[test]
fn closed_form2_midpoint_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cf");
    let r = bmv(&["closed-form2", "--a11", "0", "--a22", "0", "--a12", "1", "--b1", "0", "--b2", "1", "--grid", "16", "--out", s(&out)]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let csv = fs::read_to_string(out.join("density.csv")).unwrap();
    assert!(csv.starts_with("x,w_integral,w_series,w_contour,max_pair_diff\n"));
    let mid = csv.lines().find(|l| l.starts_with("0.5,")).unwrap();
    let v: Vec<f64> = mid.split(',').map(|x| x.parse().unwrap()).collect();
    for w in &v[1..4] {
        assert!((w - 1.13032).abs() < 1e-5);
    }
    assert!(v[4] < 1e-8);

    let bad = bmv(&["closed-form2", "--b1", "1", "--b2", "0", "--out", s(&out)]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn parse_errors_are_located() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.json");
    fs::write(&inst, "{\"n\": 2, \"A\": [[[0,0],[1,0]],[[1,0],[0,0]]],\n \"B\": [[[1,0]],[[0,0],[1,0]]]}").unwrap();
    let r = bmv(&["measure", s(&inst), "--out", s(dir.path())]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("B row 0"));
    let r = bmv(&["measure", s(&dir.path().join("missing.json"))]);
    assert_eq!(r.status.code(), Some(2));
}
