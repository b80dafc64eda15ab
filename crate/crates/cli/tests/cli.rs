use std::path::PathBuf;
use std::process::{Command, Output};

use merozero::criterion::{Classification, Residual};
use merozero::nevanlinna::{NevanlinnaSample, OrderEstimate, SequenceOrder};
use merozero::oracle::ZeroList;
use merozero::power_sums::ZeroPowerSums;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

fn run(args: &[&str], spec: &PathBuf) -> Output {
    Command::new(env!("CARGO_BIN_EXE_merozero"))
        .args(args)
        .arg("--spec")
        .arg(spec)
        .env_remove("MEROZERO_MAX_TERMS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str], spec: &PathBuf) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all, spec);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn csv_rows(args: &[&str], spec: &PathBuf) -> (Vec<String>, Vec<Vec<String>>) {
    let mut all = args.to_vec();
    all.extend(["--format", "csv"]);
    let out = run(&all, spec);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn criterion_on_first_example_certifies_zeros() {
    let v = json(&["criterion"], &fixture("example1"));
    assert_eq!(v["command"], "criterion");
    assert_eq!(v["decision"], "has-zeros-certified");
    let residuals: Vec<Residual> = serde_json::from_value(v["residuals"].clone()).unwrap();
    assert_eq!(residuals[0].n, 0);
    let want = std::f64::consts::PI.powi(2) / 10.0;
    assert!((residuals[0].value.value.re - want).abs() < 1e-8);
}

#[test]
fn criterion_on_second_example_is_zero_free() {
    let v = json(&["criterion"], &fixture("example2"));
    assert_eq!(v["decision"], "candidate-zero-free");
    let residuals: Vec<Residual> = serde_json::from_value(v["residuals"].clone()).unwrap();
    assert!(residuals[0].value.value.norm() < 1e-8);
}

#[test]
fn vanishing_constant_term_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("odd.json");
    std::fs::write(
        &spec,
        r#"{"kernel_order":1,"poles":{"kind":"list","values":[[1,0],[-1,0]]},"coeffs":{"kind":"constant","value":[1,0]}}"#,
    )
    .unwrap();
    let out = run(&["zeros"], &spec);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("f(0) ≠ 0"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_and_missing_specs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.json");
    std::fs::write(&spec, r#"{"kernel_order":1}"#).unwrap();
    assert_eq!(run(&["zeros"], &spec).status.code(), Some(2));
    assert_eq!(run(&["zeros"], &dir.path().join("absent.json")).status.code(), Some(2));
    assert_eq!(run(&["zeros", "--tol", "0"], &fixture("example1")).status.code(), Some(2));
}

#[test]
fn term_ceiling_from_environment() {
    let go = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_merozero"))
            .args(["zeros", "--tol", "1e-15", "--spec"])
            .arg(fixture("example1"))
            .env("MEROZERO_MAX_TERMS", value)
            .output()
            .unwrap()
    };
    assert_eq!(go("10").status.code(), Some(3));
    assert_eq!(go("many").status.code(), Some(2));
}

#[test]
fn machine_output_is_deterministic() {
    for cmd in ["zeros", "criterion", "oracle", "classify", "nevanlinna"] {
        for format in ["json", "csv"] {
            let a = run(&[cmd, "--format", format], &fixture("single_pole"));
            let b = run(&[cmd, "--format", format], &fixture("single_pole"));
            assert!(a.status.success(), "{cmd}: {}", String::from_utf8_lossy(&a.stderr));
            assert_eq!(a.stdout, b.stdout, "{cmd} {format}");
        }
    }
    let a = run(&["report", "--format", "json"], &fixture("example1"));
    let b = run(&["report", "--format", "json"], &fixture("example1"));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_columns_are_fixed() {
    let spec = fixture("example1");
    let cases: [(&str, &[&str]); 6] = [
        ("zeros", &["target", "N", "re", "im", "error"]),
        ("criterion", &["N", "re", "im", "error", "nonzero"]),
        ("oracle", &["re", "im", "multiplicity", "refinement_error"]),
        ("nevanlinna", &["r", "n", "N", "m", "T"]),
        ("classify", &["kernel_order", "outcome", "param_re", "param_im", "max_residual"]),
        ("report", &["section", "key", "value"]),
    ];
    for (cmd, want) in cases {
        let (header, rows) = csv_rows(&[cmd], &spec);
        assert_eq!(header, want.iter().map(|s| s.to_string()).collect::<Vec<_>>(), "{cmd}");
        assert!(!rows.is_empty(), "{cmd}");
        assert!(rows.iter().all(|r| r.len() == want.len()), "{cmd}");
    }
}

#[test]
fn nevanlinna_csv_has_six_significant_digits() {
    let (_, rows) = csv_rows(&["nevanlinna"], &fixture("example1"));
    let mantissa = rows[5][0].split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 6, "{:?}", rows[5]);
}

#[test]
fn json_sections_parse_as_library_types() {
    let spec = fixture("example1");
    let z = json(&["zeros"], &spec);
    let _: ZeroPowerSums = serde_json::from_value(z["zeros_of_f"].clone()).unwrap();
    let _: ZeroPowerSums = serde_json::from_value(z["zeros_of_fprime_via_poles"].clone()).unwrap();
    let o = json(&["oracle"], &spec);
    let zl: ZeroList = serde_json::from_value(o["zeros"].clone()).unwrap();
    assert!(zl.exhaustive_in.is_some());
    let n = json(&["nevanlinna"], &spec);
    let samples: Vec<NevanlinnaSample> = serde_json::from_value(n["samples"].clone()).unwrap();
    assert!(samples.windows(2).all(|w| w[0].counting <= w[1].counting));
    let _: OrderEstimate = serde_json::from_value(n["order"].clone()).unwrap();
    let _: SequenceOrder = serde_json::from_value(n["sequence_order"].clone()).unwrap();
    let c = json(&["classify"], &fixture("single_pole"));
    let class: Classification = serde_json::from_value(c).unwrap();
    match class.outcome {
        merozero::criterion::ClassOutcome::UnitPole { c } => assert!((c.re - 2.0).abs() < 1e-9 && c.im.abs() < 1e-9),
        other => panic!("{other:?}"),
    }
}

#[test]
fn report_collects_every_section() {
    let v = json(&["report"], &fixture("rational_two_pole"));
    for key in ["zeros", "criterion", "oracle", "nevanlinna"] {
        assert!(v[key].get("ok").is_some(), "{key}: {}", v[key]);
    }
    assert!(v["classify"].get("ok").is_some() || v["classify"].get("not-applicable").is_some());
}

#[test]
fn report_marks_failed_sections_and_exits_three() {
    let out = run(&["report", "--format", "json"], &fixture("example2"));
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["oracle"]["failed"]["numeric"], true);
    assert!(v["classify"].get("not-applicable").is_some());
    assert!(v["criterion"].get("ok").is_some());
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeros.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_merozero"))
        .args(["zeros", "--format", "csv", "--out"])
        .arg(&path)
        .arg("--spec")
        .arg(fixture("example1"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("target,N,re,im,error\n"));
}
