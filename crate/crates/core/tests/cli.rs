use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use crystal_euler::cli::{execute_command, parse_group_spec, Command as Cmd, Options, CORPUS};
use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crystal-euler"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on(command: &str, file: &Path, extra: &[&str]) -> Output {
    let mut args = vec![command, "--input", file.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn temp_spec(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("crystal-euler-{}-{name}.json", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn euler_reports_match_golden_files() {
    for (name, _, _) in CORPUS {
        let golden = std::fs::read_to_string(corpus(&format!("{name}.euler.json"))).unwrap();
        for extra in [&[][..], &["--parallel"][..]] {
            let out = run_on("euler", &corpus(&format!("{name}.json")), extra);
            assert_eq!(out.status.code(), Some(0), "{name}");
            assert_eq!(String::from_utf8(out.stdout).unwrap(), golden, "{name} {extra:?}");
        }
    }
}

#[test]
fn kummer_euler_report_contents() {
    let out = run_on("euler", &corpus("kummer.json"), &[]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let coefficients: Vec<&str> = report["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["coefficient"].as_str().unwrap())
        .collect();
    assert_eq!(coefficients[0], "-8");
    assert_eq!(coefficients.len(), 17);
    assert!(coefficients[1..].iter().all(|c| *c == "1"));
    assert_eq!(report["specializations"]["string"], "24");
    assert_eq!(report["specializations"]["orbifold"], "0");
    assert_eq!(report["vcd"], 4);
    assert_eq!(report["omega_multiplicities"][0]["a_f"], 16);
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("5/5 examples pass"), "{text}");
    assert!(!text.contains("FAIL"));
    let json = run(&["selftest"]);
    let v: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["passed"], 5);
    assert_eq!(v["total"], 5);
}

#[test]
fn s3_classification() {
    let out = run_on("classify", &corpus("s3-plane.json"), &[]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let classes = v["classes"].as_array().unwrap();
    let labels: Vec<&str> = classes.iter().map(|c| c["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["C1#1", "C2#1", "C3#1", "C3#2", "C6#1"]);
    let omega: Vec<&str> = classes
        .iter()
        .filter(|c| c["in_omega"] == true)
        .map(|c| c["label"].as_str().unwrap())
        .collect();
    assert_eq!(omega, ["C3#2", "C6#1"]);
}

#[test]
fn every_command_runs_in_both_formats() {
    for command in ["classify", "euler", "specialize", "h1", "fixed-lattice", "poset", "subgroups"] {
        for format in ["json", "table"] {
            let a = run_on(command, &corpus("a5-torus4.json"), &["--format", format]);
            assert_eq!(a.status.code(), Some(0), "{command} {format}");
            assert!(!a.stdout.is_empty());
            let b = run_on(command, &corpus("a5-torus4.json"), &["--format", format]);
            assert_eq!(a.stdout, b.stdout, "byte-stable output for {command}");
        }
    }
    let out = run_on("specialize", &corpus("s3-plane.json"), &["--map", "string"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v, serde_json::json!({"string": "4"}));
}

#[test]
fn input_errors_exit_with_two() {
    let cases = [
        ("not-json", "{rank: 2"),
        ("non-square", r#"{"rank": 2, "generators": [[[1, 0], [0, 1], [9]]]}"#),
        ("rank-mismatch", r#"{"rank": 3, "generators": [[[1, 0], [0, 1]]]}"#),
        ("bad-action", r#"{"rank": 1, "action": "left", "generators": []}"#),
        ("singular", r#"{"rank": 1, "generators": [[[2]]]}"#),
    ];
    for (name, text) in cases {
        let path = temp_spec(name, text);
        let out = run_on("euler", &path, &[]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.starts_with("error: "), "{err}");
        let _ = std::fs::remove_file(path);
    }
    assert_eq!(run(&["euler"]).status.code(), Some(2));
    assert_eq!(
        run_on("euler", Path::new("/nonexistent/spec.json"), &[]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn computational_errors_exit_with_one() {
    let shear = temp_spec("shear", r#"{"rank": 2, "generators": [[[1, 1], [0, 1]]]}"#);
    let out = run_on("euler", &shear, &["--order-cap", "100"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("100"));
    let out = run_on("h1", &corpus("kummer.json"), &["--h1-cap", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let _ = std::fs::remove_file(shear);
}

#[test]
fn trivial_group_has_empty_euler_class() {
    let spec = parse_group_spec(r#"{"rank": 3, "generators": []}"#).unwrap();
    let report = execute_command(Cmd::Euler, Some(&spec), &Options::default()).unwrap();
    let v: Value = serde_json::from_str(&report.output).unwrap();
    assert_eq!(v["terms"], serde_json::json!([]));
    assert_eq!(v["classes"], 1);
    assert_eq!(v["specializations"]["quotient"], "0");
}

#[test]
fn caps_in_the_spec_are_honoured() {
    let spec = parse_group_spec(
        r#"{"rank": 2, "generators": [[[0, -1], [1, 0]]], "caps": {"order_cap": 2}}"#,
    )
    .unwrap();
    let err = execute_command(Cmd::Classify, Some(&spec), &Options::default()).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    let options = Options {
        order_cap: Some(8),
        ..Options::default()
    };
    assert!(execute_command(Cmd::Classify, Some(&spec), &options).is_ok());
}
