use std::process::Command;

use bwspin::linsys::LinearSystem;
use bwspin_cli::*;
use num_complex::Complex;
use serde_json::Value;

fn bwspin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_bwspin")).args(args).output().expect("binary runs")
}

fn config(args: &[&str]) -> RunConfig {
    RunConfig::from_args(std::iter::once("bwspin").chain(args.iter().copied())).unwrap()
}

#[test]
fn parses_complex_numbers() {
    assert_eq!(parse_complex("1.5").unwrap(), Complex::new(1.5, 0.0));
    assert_eq!(parse_complex("2i").unwrap(), Complex::new(0.0, 2.0));
    assert_eq!(parse_complex("-i").unwrap(), Complex::new(0.0, -1.0));
    assert_eq!(parse_complex("1-2i").unwrap(), Complex::new(1.0, -2.0));
    assert_eq!(parse_complex("-0.5+0.25i").unwrap(), Complex::new(-0.5, 0.25));
    assert!(parse_complex("abc").is_err());
    assert!(parse_complex("").is_err());
}

#[test]
fn same_seed_same_bytes() {
    let args = ["verify", "spin1", "--a", "0.7", "--b", "0.2", "--c", "0.3", "--d", "0.1", "--momenta", "6", "--seed", "11"];
    let a = bwspin(&args);
    let b = bwspin(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = bwspin(&["verify", "spin1", "--a", "0.7", "--b", "0.2", "--c", "0.3", "--d", "0.1", "--momenta", "6", "--seed", "12"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn example_commands_exit_cleanly() {
    let out = bwspin(&["verify", "spin2-standard", "--m", "1", "--momenta", "20", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let samples = v["results"]["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 20);
    assert!(samples.iter().all(|s| s["report"]["nullspace_dim"] == 0));

    let out = bwspin(&["enumerate", "spin1-signs", "--m1", "1", "--m2", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["variant_count"], 16);
    assert!(v["results"]["distinct_classes"].as_u64().unwrap() >= 1);
    assert_eq!(v["systems"].as_array().unwrap().len(), 16);

    let out = bwspin(&["spectrum", "--a", "0", "--b", "1", "--c", "0", "--d", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["roots"], serde_json::json!([[0.0, 0.0], [0.0, 0.0]]));
}

#[test]
fn config_errors_exit_two_with_json() {
    for args in [
        &["verify", "spin1", "--bogus"][..],
        &["verify", "nothing"][..],
        &["spectrum", "--a", "x"][..],
        &["verify", "spin1", "--momenta", "0"][..],
        &["enumerate", "spin1", "--m1", "1"][..],
        &["derive", "spin1-signs", "--eps", "1,2,1,1"][..],
        &["verify", "spin2-standard", "--m", "0"][..],
    ] {
        let out = bwspin(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap_or_else(|_| panic!("{args:?}"));
        assert!(err["error"].is_string() && err["message"].is_string());
    }
}

#[test]
fn engine_errors_exit_one() {
    let out = bwspin(&["spectrum", "--a", "1", "--b", "1", "--c", "1", "--d", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["message"].as_str().unwrap().contains("identically zero"));
    let out = bwspin(&["derive", "spin1", "--a", "0", "--b", "0", "--c", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert_eq!(bwspin(&["--help"]).status.code(), Some(0));
}

#[test]
fn writes_to_a_file() {
    let dir = std::env::temp_dir().join(format!("bwspin-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spectrum.json");
    let out = bwspin(&["spectrum", "--a", "1", "--b", "0.5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["results"]["degree"], 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn latex_for_empty_and_single_row_systems() {
    let empty = LinearSystem::<f64>::new(vec!["x".into()]).unwrap();
    let text = emit_latex(&empty);
    assert_eq!(text, "% 0 rows, 1 unknowns\n\\begin{align*}\n\\end{align*}\n");
    let mut one = LinearSystem::<f64>::new(vec!["A[0]".into(), "phi~".into()]).unwrap();
    one.push_row(vec![Complex::new(1.0, 0.0), Complex::new(0.0, -2.0)], "plumbing").unwrap();
    let text = emit_latex(&one);
    let body: Vec<&str> = text.lines().filter(|l| l.contains("&= 0")).collect();
    assert_eq!(body, ["  A_{0} - 2i\\,\\tilde{\\phi} &= 0 && \\text{plumbing} \\\\"]);
}

#[test]
fn latex_and_json_agree_on_rows() {
    let cfg = config(&["derive", "spin2-standard", "--m", "1.5", "--seed", "3"]);
    let out = run(&cfg).unwrap();
    let latex = out.render(Format::Latex);
    let json: Value = serde_json::from_str(&out.render(Format::Json)).unwrap();
    let json_rows: usize = json["systems"].as_array().unwrap().iter().map(|s| s["rows"].as_array().unwrap().len()).sum();
    assert_eq!(latex.lines().filter(|l| l.contains("&= 0")).count(), json_rows);
    for s in json["systems"].as_array().unwrap() {
        for row in s["rows"].as_array().unwrap() {
            assert!(bwspin::is_known_provenance(row["provenance"].as_str().unwrap()));
        }
    }
}

#[test]
fn reports_are_self_describing() {
    let out = run(&config(&["derive", "spin1", "--a", "1", "--b", "0.3"])).unwrap();
    assert!(out.passed);
    for key in ["config", "conventions", "systems", "results"] {
        assert!(out.report.get(key).is_some(), "{key}");
    }
    assert_eq!(out.report["conventions"]["metric"], "diag(+1,-1,-1,-1)");
    assert!(out.render(Format::Text).contains("system proca"));
}

#[test]
fn g_equation_and_signs_verify() {
    assert!(run(&config(&["verify", "g-equation", "--momenta", "4"])).unwrap().passed);
    assert!(run(&config(&["verify", "spin1-signs", "--m1", "1.3", "--m2", "0.6", "--momenta", "2"])).unwrap().passed);
}

#[test]
fn modified_verify_reports_the_surviving_perturbations() {
    let out = run(&config(&["verify", "spin2-modified", "--momenta", "2", "--seed", "1"])).unwrap();
    assert!(!out.passed);
    assert_eq!(out.exit_code(), 1);
    assert_eq!(out.report["results"]["recovered"], true);
    assert_eq!(out.report["results"]["every_perturbation_breaks"], false);
}
