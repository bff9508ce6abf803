//! End-to-end runs of the `annulus-neumann` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_annulus-neumann");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env("ANNULUS_NEUMANN_LOG", "error")
        .output()
        .expect("binary runs")
}

fn run_config(cmd: &str, config: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--config", config.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const SINGLE: &str = r#"
[geometry]
n = 2
r0 = 1.0
r1 = 1.5

[nonlinearity]
f1 = "1 - u"
f2 = "1 - v"

[ladder]
rho1 = 0.5
rho2 = 0.5
s1 = 2.0
s2 = 2.0
"#;

#[test]
fn constants_for_a_stiffer_shift() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "p.toml",
        &format!("{SINGLE}\n[shift]\nomega1 = 2.0\nomega2 = 1.0\n"),
    );
    let out = run_config("constants", &cfg, &["--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&dir.path().join("constants.json"));
    let c1 = report["components"][0]["c"].as_f64().unwrap();
    let expected = 1.0 / (2.0 * 2.0f64.cosh());
    assert!((c1 - expected).abs() < 1e-12, "{c1} vs {expected}");
    let m1 = report["components"][0]["m"].as_f64().unwrap();
    assert_eq!(m1, 4.0);
}

#[test]
fn constants_in_three_dimensions() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "p.toml",
        "[geometry]\nn = 3\nr0 = 1.0\nr1 = 2.0\n[nonlinearity]\nf1 = \"1-u\"\nf2 = \"1-v\"\n",
    );
    let out = run_config("constants", &cfg, &["--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let geo = &json(&dir.path().join("constants.json"))["geometry"];
    assert!((geo["inf_d"].as_f64().unwrap() - 0.25).abs() < 1e-9);
    assert!((geo["sup_d"].as_f64().unwrap() - 4.0).abs() < 1e-9);
}

#[test]
fn broken_ladder_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "p.toml", &SINGLE.replace("rho1 = 0.5", "rho1 = 2.5"));
    let out = run_config("check", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("ladder.rho1"), "{}", stderr(&out));
}

#[test]
fn unknown_key_reports_its_line() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "p.toml",
        &SINGLE.replace("n = 2", "n = 2\nradius = 3"),
    );
    let out = run_config("constants", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("radius") && err.contains("line 4"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["constants"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let cfg = configs().join("single.toml");
    assert_eq!(
        run_config("constants", &cfg, &["--threads", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run_config("solve", &cfg, &[]).status.code(), Some(2));
    let missing = Path::new("/nonexistent/p.toml");
    assert_eq!(run_config("constants", missing, &[]).status.code(), Some(2));
}

#[test]
fn failed_hypothesis_is_reported_and_strict_exits_four() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "p.toml",
        &configs()
            .join("example.toml")
            .to_str()
            .map(|p| fs::read_to_string(p).unwrap())
            .unwrap()
            .replace(
                "f1 = \"exp(-(gu^2+gv^2+6))*u*(u-1-r^2/333)*(u-2-r^2/333)*(u-4-r^2/333)*(2-cos(v))\"",
                "f1 = \"1\"",
            ),
    );
    let out_dir = dir.path().join("out");
    let out = run_config("check", &cfg, &["--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let check = json(&out_dir.join("check.json"));
    let uno = check["theorems"][0]["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["condition"] == "uno[i=1]")
        .unwrap()
        .clone();
    assert_eq!(uno["verdict"], "FAIL");
    assert_eq!(check["verdict"], "FAIL");
    let strict = run_config("check", &cfg, &["--strict"]);
    assert_eq!(strict.status.code(), Some(4));
}

#[test]
fn example_check_passes_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = configs().join("example.toml");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let out = run_config(
        "check",
        &cfg,
        &["--out", a.to_str().unwrap(), "--threads", "1"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = run_config("check", &cfg, &["--out", b.to_str().unwrap(), "--strict"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let ja = fs::read(a.join("check.json")).unwrap();
    assert_eq!(ja, fs::read(b.join("check.json")).unwrap());
    let check: Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(check["verdict"], "PASS");
    let reports = check["theorems"][0]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 8);
    assert!(reports.iter().all(|r| r["verdict"] == "PASS"));
    assert_eq!(check["summary"][0], "multi2: hypotheses sampled-PASS");
}

#[test]
fn zero_nonlinearity_is_a_shortfall() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "p.toml",
        &SINGLE
            .replace("\"1 - u\"", "\"0\"")
            .replace("\"1 - v\"", "\"0\""),
    );
    let out = run_config(
        "solve",
        &cfg,
        &["--out", dir.path().join("out").to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn single_solution_and_config_round_trip() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("first");
    let out = run_config(
        "solve",
        &configs().join("single.toml"),
        &["--out", first.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let summary = json(&first.join("summary.json"));
    assert_eq!(summary["expected"], 1);
    let sols = summary["solutions"].as_array().unwrap();
    assert!(sols.iter().any(|s| s["region"] == "S1"));
    for s in sols {
        assert!(first.join(s["file"].as_str().unwrap()).is_file());
        let svg = fs::read_to_string(first.join(s["plot"].as_str().unwrap())).unwrap();
        assert!(svg.starts_with("<svg"));
    }

    let second = dir.path().join("second");
    let out = run_config(
        "solve",
        &first.join("config.toml"),
        &["--out", second.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(
        fs::read(first.join("summary.json")).unwrap(),
        fs::read(second.join("summary.json")).unwrap()
    );
}

#[test]
fn nonexistence_verdicts() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("decay");
    let out = run_config(
        "nonexist",
        &configs().join("decay.toml"),
        &["--out", out_dir.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out_dir.join("nonexist.json"));
    assert_eq!(report["verdict"], "consistent-with-nonexistence");
    assert_eq!(report["sweep"]["nontrivial"], 0);

    let out = run_config("nonexist", &configs().join("single.toml"), &["--strict"]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
}
