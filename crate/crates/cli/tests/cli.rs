use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use conjloc::io::{algebra_file, matrix_file};
use conjloc::report::{AnalyzeReport, CompareReport, FractionReport, GenericityFileReport, LocusReport};
use conjloc_core::algebra::conjugate_plane;
use conjloc_core::grassmann::{random_orthogonal, sample_plane, SamplerConfig};
use conjloc_core::spectral::SkewMatrix;
use serde_json::json;

fn conjloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conjloc")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, value: serde_json::Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, value.to_string()).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn heisenberg_locus() {
    let dir = tempfile::tempdir().unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = write(dir.path(), "z.json", json!({"q": 2, "rows": [[0, s], [-s, 0]]}));
    let out = stdout(&conjloc(&["locus", "--input", z.to_str().unwrap(), "--horizon", "20"]));
    let r: LocusReport = serde_json::from_str(&out).unwrap();
    let got: Vec<(f64, usize)> = r.values.iter().map(|v| (v.t, v.mult)).collect();
    let want = [2.0 * 2f64.sqrt() * PI, 4.0 * 2f64.sqrt() * PI];
    assert_eq!(got.len(), 2);
    for ((t, m), w) in got.iter().zip(want) {
        assert!((t - w).abs() < 1e-12);
        assert_eq!(*m, 2);
    }
    assert_eq!(r.config.horizon, Some(20.0));
    assert!(r.maximal);

    // Round trip: the report re-serializes to the same bytes.
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", out);
}

#[test]
fn zero_matrix_has_no_conjugate_points() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(dir.path(), "z.json", json!({"q": 3, "rows": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}));
    let r: AnalyzeReport = serde_json::from_str(&stdout(&conjloc(&["analyze", "--input", z.to_str().unwrap()]))).unwrap();
    assert_eq!(r.pair_count, 0);
    assert_eq!(r.summary, "no conjugate points");
    assert_eq!(r.first_conjugate, None);
    assert!(!r.genericity.member);
}

#[test]
fn exact_genericity_report() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(dir.path(), "z.json", json!({"q": 4, "rows": [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, "2"], [0, 0, "-2", 0]]}));
    let out = stdout(&conjloc(&["genericity", "--input", z.to_str().unwrap()]));
    let r: GenericityFileReport = serde_json::from_str(&out).unwrap();
    assert!(r.report.exact && r.report.distinct && !r.report.member);
    assert_eq!(r.report.bad_ratios.len(), 1);
    assert_eq!(r.report.bad_ratios[0].m, 2);
    assert_eq!(r.report.discriminant.as_deref(), Some("5184"));
    assert_eq!(r.report.char_poly.as_ref().unwrap(), &["4", "0", "5", "0", "1"]);
    assert_eq!(r.config.mode, "exact");
}

#[test]
fn compare_conjugated_planes() {
    let dir = tempfile::tempdir().unwrap();
    let w = sample_plane(&SamplerConfig { seed: 9, p: 2, q: 4, samples: 1 }, 0).unwrap();
    let gw = conjugate_plane(&random_orthogonal(4, 9, 0).unwrap(), &w).unwrap();
    let a = write(dir.path(), "a.json", serde_json::to_value(algebra_file(&w)).unwrap());
    let b = write(dir.path(), "b.json", serde_json::to_value(algebra_file(&gw)).unwrap());
    let o = conjloc(&["compare", "--input", a.to_str().unwrap(), b.to_str().unwrap(), "--samples", "10"]);
    let r: CompareReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.verdict, "consistent");
    assert_eq!(r.tested, 2 + 1 + 10);

    let swap = write(dir.path(), "phi.json", json!([[2, 0], [0, 1]]));
    let o = conjloc(&["compare", "--input", a.to_str().unwrap(), b.to_str().unwrap(), "--phi", swap.to_str().unwrap()]);
    let r: CompareReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.verdict, "refuted");
    assert!(r.discrepancy.unwrap() > 1e-8);
}

#[test]
fn sample_and_measure() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&conjloc(&["sample", "--p", "2", "--q", "5", "--samples", "100", "--seed", "1"]));
    let r: FractionReport = serde_json::from_str(&out).unwrap();
    assert_eq!((r.p, r.q, r.samples, r.seed), (2, 5, 100, 1));
    assert!(r.fraction > 0.95);

    let csv = stdout(&conjloc(&["sample", "--p", "1", "--q", "2", "--samples", "5", "--dir-samples", "2", "--format", "csv"]));
    assert_eq!(csv, "index,generic\n0,1\n1,1\n2,1\n3,1\n4,1\n");

    let line = SkewMatrix::canonical(4, &[1.0, 2.0]).unwrap();
    let w = conjloc_core::algebra::SubspaceW::orthonormalize(4, &[line]).unwrap();
    let a = write(dir.path(), "w.json", serde_json::to_value(algebra_file(&w)).unwrap());
    let r: FractionReport =
        serde_json::from_str(&stdout(&conjloc(&["measure", "--input", a.to_str().unwrap(), "--samples", "50"]))).unwrap();
    assert_eq!(r.fraction, 0.0);
    assert_eq!(r.estimator, "directions");
}

#[test]
fn jacobi_scan_csv() {
    let dir = tempfile::tempdir().unwrap();
    let z = SkewMatrix::canonical(5, &[1.0, 2.0]).unwrap();
    let p = write(dir.path(), "z.json", serde_json::to_value(matrix_file(&z)).unwrap());
    let csv = stdout(&conjloc(&["jacobi-verify", "--input", p.to_str().unwrap(), "--points", "10"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,conjugate,expected_nullity,nullity,sigma_min,sigma_max,determinant");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.iter().all(|r| r[2] == r[3]));
    // t = 2π: both frequencies contribute
    let at_2pi = rows.iter().find(|r| r[1] == "1" && (r[0].parse::<f64>().unwrap() - 2.0 * PI).abs() < 1e-12).unwrap();
    assert_eq!(at_2pi[3], "4");
}

#[test]
fn output_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let z = SkewMatrix::canonical(4, &[1.0, 3f64.sqrt()]).unwrap();
    let p = write(dir.path(), "z.json", serde_json::to_value(matrix_file(&z)).unwrap());
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let o = conjloc(&["locus", "--input", p.to_str().unwrap(), "--format", "csv", "--output", out.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let text = String::from_utf8(text).unwrap();
    let first = text.lines().nth(1).unwrap();
    let t: f64 = first.split(',').next().unwrap().parse().unwrap();
    assert_eq!(t, 2.0 * PI / 3f64.sqrt());
}

#[test]
fn input_errors_exit_with_status_1() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = write(dir.path(), "r.json", json!({"q": 3, "rows": [[0, 1, 0], [-1, 0]]}));
    let o = conjloc(&["analyze", "--input", ragged.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("matrix.rows"));

    let not_skew = write(dir.path(), "s.json", json!({"q": 2, "rows": [[0, 1], [1, 0]]}));
    assert_eq!(conjloc(&["locus", "--input", not_skew.to_str().unwrap()]).status.code(), Some(1));

    let broken = dir.path().join("b.json");
    std::fs::write(&broken, "{not json").unwrap();
    let o = conjloc(&["genericity", "--input", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed JSON"));

    let missing = dir.path().join("missing.json");
    assert_eq!(conjloc(&["analyze", "--input", missing.to_str().unwrap()]).status.code(), Some(1));

    let good = write(dir.path(), "g.json", json!({"q": 2, "rows": [[0, 1], [-1, 0]]}));
    let o = conjloc(&["locus", "--input", good.to_str().unwrap(), "--tol-integer=-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--tol-integer"));
    assert_eq!(conjloc(&["sample", "--p", "4", "--q", "3"]).status.code(), Some(1));
}

#[test]
fn numerical_failures_exit_with_status_2() {
    let dir = tempfile::tempdir().unwrap();
    let z = write(dir.path(), "z.json", json!({"q": 2, "rows": [[0, 1], [-1, 0]]}));
    // An absurd nullity threshold makes the scan disagree with the prediction.
    let o = conjloc(&["jacobi-verify", "--input", z.to_str().unwrap(), "--tol-nullity", "0.99", "--points", "7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nullity"));
}

#[test]
fn usage_errors_exit_with_status_1() {
    assert_eq!(conjloc(&["locus"]).status.code(), Some(1));
    assert_eq!(conjloc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(conjloc(&["--help"]).status.code(), Some(0));
}
