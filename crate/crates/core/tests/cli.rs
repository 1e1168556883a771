//! End-to-end tests of the `fqc` binary: flag plumbing, output formats,
//! and the exit-code contract (0 pass, 1 check failure, 2 config error,
//! 3 numerical refusal).

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", stdout(out));
    })
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fqc-cli-{name}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

const LASSO_PAIR_JSON: &str = r#"{"n": 2, "terms": [
  {"exp": [0, 0], "coeff": {"num": 1, "den": 1}},
  {"exp": [1, 0], "coeff": {"num": -1, "den": 3}},
  {"exp": [0, 2], "coeff": {"num": 1, "den": 3}},
  {"exp": [1, 2], "coeff": {"num": -1, "den": 1}}
], "ell": [1, 2], "eta": {"num": -1, "den": 1}}"#;

#[test]
fn verify_poisson_closes_to_machine_precision() {
    let out = fqc(&[
        "verify",
        "--builtin",
        "poisson",
        "--xi",
        "1",
        "--window",
        "300",
        "--degree-max",
        "20",
        "--sigma",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert!(report["residual"].as_f64().unwrap() < 1e-10);
    assert!(report["tail_estimate"].as_f64().unwrap() < 1e-12);
}

#[test]
fn zeros_csv_lists_the_poisson_lattice() {
    let out = fqc(&[
        "zeros",
        "--builtin",
        "poisson",
        "--window",
        "20",
        "--emit",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("gamma,multiplicity,residual"));
    let tau = std::f64::consts::TAU;
    let mut count = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3, "row: {line}");
        let gamma: f64 = fields[0].parse().unwrap();
        assert_eq!(fields[1], "1");
        assert!((gamma - tau * (gamma / tau).round()).abs() < 1e-9);
        count += 1;
    }
    assert_eq!(count, 7); // 2 pi n for |n| <= 3
}

#[test]
fn pair_file_matches_the_builtin() {
    let dir = scratch_dir("pairfile");
    let path = dir.join("lasso.json");
    std::fs::write(&path, LASSO_PAIR_JSON).unwrap();
    let from_file = fqc(&[
        "zeros",
        "--pair",
        path.to_str().unwrap(),
        "--xi",
        "1,1.4142135623730951",
        "--window",
        "30",
    ]);
    let from_builtin = fqc(&["zeros", "--builtin", "lasso", "--window", "30"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    assert_eq!(stdout(&from_file), stdout(&from_builtin));
}

#[test]
fn stability_counterexample_exits_one() {
    let out = fqc(&["stability", "--builtin", "unstable", "--budget", "100000"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["verdict"], "CounterexampleFound");
    assert!(report["witness_value"].as_f64().unwrap() < 1e-9);
}

#[test]
fn stability_clean_run_exits_zero_and_is_seed_deterministic() {
    let run = |seed: &str| {
        fqc(&[
            "stability",
            "--builtin",
            "lasso",
            "--budget",
            "20000",
            "--seed",
            seed,
        ])
    };
    let a = run("5");
    let b = run("5");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b), "same seed, same bytes");
}

#[test]
fn config_errors_exit_two() {
    for args in [
        vec!["zeros", "--builtin", "nope"],
        vec!["zeros", "--pair", "/does/not/exist.json", "--xi", "1"],
        vec!["zeros", "--builtin", "lasso", "--xi", "1"], // arity mismatch
        vec!["verify", "--no-such-flag"],
        vec!["relations", "--values", "1"], // too few values
    ] {
        let out = fqc(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}: {}", stderr(&out));
    }
}

#[test]
fn hopeless_truncation_exits_three() {
    let out = fqc(&[
        "verify",
        "--builtin",
        "lasso",
        "--window",
        "1",
        "--degree-max",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("tail"));
}

#[test]
fn curve_csv_separates_components_with_blank_lines() {
    let out = fqc(&[
        "curve",
        "--builtin",
        "lasso",
        "--resolution",
        "128",
        "--emit",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("x,y\n"));
    let components: Vec<&str> = text.trim_end().split("\n\n").collect();
    assert_eq!(components.len(), 2, "expected a blank-line separator");
    for block in components {
        for line in block.lines().filter(|l| *l != "x,y") {
            let (x, y) = line.split_once(',').expect("two columns");
            let x: f64 = x.parse().unwrap();
            let y: f64 = y.parse().unwrap();
            assert!((3.0 * (x / 2.0 + y).sin() + (x / 2.0 - y).sin()).abs() < 1e-6);
        }
    }
}

#[test]
fn spectrum_csv_has_pinned_columns() {
    let out = fqc(&[
        "spectrum",
        "--builtin",
        "poisson",
        "--window",
        "15",
        "--emit",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("position,re_weight,im_weight"));
    // Unit comb: weight 1 at 2 pi n, total frequency at the origin.
    for line in lines {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert!((fields[1] - 1.0).abs() < 1e-12);
        assert_eq!(fields[2], 0.0);
    }
}

#[test]
fn growth_flag_adds_the_fitted_slope() {
    let out = fqc(&[
        "spectrum",
        "--builtin",
        "poisson",
        "--window",
        "40",
        "--growth",
        "10,20,40",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let slope = report["growth"]["slope"].as_f64().unwrap();
    assert!((slope - 1.0).abs() < 0.1, "slope {slope}");
}

#[test]
fn delone_exit_code_tracks_the_verdict() {
    let pass = fqc(&[
        "delone",
        "--builtin",
        "lasso",
        "--window",
        "200",
        "--r",
        "0.01",
        "--big-r",
        "3.29",
    ]);
    assert_eq!(pass.status.code(), Some(0), "{}", stderr(&pass));
    let fail = fqc(&[
        "delone",
        "--builtin",
        "lasso",
        "--window",
        "200",
        "--r",
        "1.4",
        "--big-r",
        "3.29",
    ]);
    assert_eq!(fail.status.code(), Some(1));
    assert_eq!(json(&fail)["pass"], false);
}

#[test]
fn progression_decompose_splits_rational_from_irrational() {
    let rational = fqc(&[
        "progression",
        "--builtin",
        "lasso",
        "--xi",
        "1,0.5",
        "--window",
        "200",
        "--decompose",
    ]);
    assert_eq!(rational.status.code(), Some(0), "{}", stderr(&rational));
    let dec = json(&rational);
    assert_eq!(dec["offsets"].as_array().unwrap().len(), 4);
    assert_eq!(dec["leftover"].as_array().unwrap().len(), 0);

    let irrational = fqc(&[
        "progression",
        "--builtin",
        "lasso",
        "--window",
        "50",
        "--decompose",
    ]);
    assert_eq!(irrational.status.code(), Some(1));
    assert!(stderr(&irrational).contains("rational"));
}

#[test]
fn relations_probe_on_explicit_values() {
    let out = fqc(&["relations", "--values", "1,2", "--max-coeff", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let probe = json(&out);
    let q: Vec<i64> = probe["found"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_i64().unwrap())
        .collect();
    assert_eq!(q[0] + 2 * q[1], 0);
}

#[test]
fn out_dir_receives_the_file() {
    let dir = scratch_dir("outdir");
    let out = fqc(&[
        "gaps",
        "--builtin",
        "poisson",
        "--window",
        "30",
        "--emit",
        "csv",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("wrote "));
    let text = std::fs::read_to_string(dir.join("gaps.csv")).unwrap();
    assert!(text.starts_with("min_gap,max_gap,count"));
}

#[test]
fn reproduce_all_filter_runs_the_named_subset() {
    let out = fqc(&["reproduce-all", "--filter", "coefficient"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("coefficient-cross-check"));
    assert!(text.contains("coefficient-bound"));
    assert!(text.contains("2 of 2 criteria passed"));

    let none = fqc(&["reproduce-all", "--filter", "no-such-criterion"]);
    assert_eq!(none.status.code(), Some(2));
}
