use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcurves"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = run(&full);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["nb", "--q", "3"]).status.code(), Some(0));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    // Usage errors: missing argument, unknown subcommand, q not a prime power.
    assert_eq!(run(&["nb"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["nb", "--q", "6"]).status.code(), Some(1));
    assert_eq!(
        run(&["nb", "--q", "3", "--format", "csv"]).status.code(),
        Some(1)
    );
    // Size guards.
    assert_eq!(run(&["nb", "--q", "7"]).status.code(), Some(2));
    assert_eq!(run(&["census", "--q", "5"]).status.code(), Some(2));
    // The report includes a published value the brute force contradicts.
    assert_eq!(run(&["report"]).status.code(), Some(3));
}

#[test]
fn table_csv_rows() {
    let o = run(&["table", "--q", "2", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,points,frequency"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.contains(&"1,3,7"));
    assert!(rows.contains(&"7,7,1"));
}

#[test]
fn nb_text_and_json() {
    let text = stdout(&run(&["nb", "--q", "3"]));
    assert!(text.contains("1336688/1594323"), "{text}");
    let v = json(&["nb", "--q", "2"]);
    let body = v.to_string();
    assert!(body.contains("\"1/2\""), "{body}");
}

#[test]
fn json_output_is_stable_through_a_round_trip() {
    for args in [
        &["table", "--q", "3"][..],
        &["census", "--q", "3"],
        &["bounds", "--q", "5"],
        &[
            "mc",
            "--kind",
            "point-count",
            "--q",
            "3",
            "--d",
            "5",
            "--samples",
            "2000",
        ],
        &["interp", "--q", "2,3", "--trials", "200"],
        &["smooth-check", "--q", "2", "--d", "2"],
    ] {
        let v = json(args);
        let again: Value =
            serde_json::from_str(&serde_json::to_string_pretty(&v).unwrap()).unwrap();
        assert_eq!(v, again, "{args:?}");
        assert_eq!(v, json(args), "{args:?} is not reproducible");
    }
}

#[test]
fn mc_json_shape() {
    let v = json(&[
        "mc",
        "--kind",
        "skew",
        "--q",
        "3",
        "--d",
        "3",
        "--samples",
        "1000",
        "--seed",
        "4",
    ]);
    for key in ["config", "histogram", "targets", "verdicts"] {
        assert!(v.get(key).is_some(), "missing {key} in {v}");
    }
    assert_eq!(v["config"]["seed"], 4);
}

#[test]
fn out_writes_result_and_manifest() {
    let dir = std::env::temp_dir().join(format!("bcurves-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("table.csv");
    let o = run(&[
        "table",
        "--q",
        "2",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 10);
    let manifest: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("table.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "table");
    assert_eq!(manifest["parameters"]["q"], 2);
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn manifest_on_stderr_without_out() {
    let o = run(&[
        "mc",
        "--kind",
        "roots",
        "--q",
        "5",
        "--samples",
        "500",
        "--seed",
        "9",
    ]);
    let err = String::from_utf8(o.stderr).unwrap();
    let line = err
        .lines()
        .find_map(|l| l.strip_prefix("manifest: "))
        .expect("manifest line");
    let m: Value = serde_json::from_str(line).unwrap();
    assert_eq!(m["seed"], 9);
    assert_eq!(m["command"], "mc");
}

#[test]
fn single_polynomial_check() {
    // Coefficients run z^2, yz, y^2, xz, xy, x^2. x^2 + yz over F_2 is
    // smooth; x^2 is a double line.
    let smooth = json(&["smooth-check", "--poly", "2 2 0 1 0 0 0 1"]);
    let double = json(&["smooth-check", "--poly", "2 2 0 0 0 0 0 1"]);
    assert_eq!(smooth["agree"], true);
    assert_eq!(double["agree"], true);
    assert_ne!(smooth["exact"]["smooth"], double["exact"]["smooth"]);
}
