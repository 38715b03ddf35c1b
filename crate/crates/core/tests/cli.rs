use std::io::Write;

use riesz_lattice::cli::{run, CONFIG_ENV};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("riesz-lattice").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn config(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

const HEAT: [&str; 10] = ["eval", "heat", "--sigma", "0", "--tau", "0", "--beta", "1", "--t", "1"];

#[test]
fn eval_heat_unit_square() {
    let v = json(&HEAT);
    // (1/(e - 1))^2
    assert_eq!(v["result"]["value"].as_f64().unwrap(), 0.33869688733846592);
    assert_eq!(v["command"], "eval heat");
}

#[test]
fn default_options_are_embedded() {
    let (_, out, _) = call(&HEAT);
    assert!(out.contains("\"series_tol\":1.0000000000000000e-10"), "{out}");
    assert!(out.contains("\"M\":2,"), "{out}");
}

#[test]
fn maximize_heat_symmetric() {
    let v = json(&["maximize", "heat", "--sigma", "0.3", "--tau", "0.3", "--t", "5"]);
    assert_eq!(v["result"]["beta_star"].as_f64().unwrap(), 1.0);
}

#[test]
fn verify_bounds_quick() {
    let (code, out, _) = call(&["verify", "bounds", "--suite", "quick"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn unknown_suite_fails() {
    let (code, _, err) = call(&["verify", "bounds", "--suite", "nope"]);
    assert_eq!(code, 1);
    assert!(err.contains("nope"), "{err}");
}

#[test]
fn unknown_flag_prints_usage() {
    let (code, out, err) = call(&["eval", "heat", "--frobnicate"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("Usage"));
}

#[test]
fn bad_parameter_exits_one() {
    let (code, _, err) = call(&["eval", "heat", "--sigma", "-1.5", "--tau", "0", "--beta", "1", "--t", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("shift"), "{err}");
}

#[test]
fn config_layers() {
    let f = config("series_tol = 1e-8\nM = 3\n");
    let path = f.path().to_str().unwrap();

    let mut args = vec!["--config", path];
    args.extend(HEAT);
    let v = json(&args);
    assert_eq!(v["options"]["series_tol"].as_f64().unwrap(), 1e-8);
    assert_eq!(v["options"]["M"], 3);

    let mut args = vec!["--config", path, "--set", "M=5"];
    args.extend(HEAT);
    let v = json(&args);
    assert_eq!(v["options"]["series_tol"].as_f64().unwrap(), 1e-8);
    assert_eq!(v["options"]["M"], 5);

    let out = std::process::Command::new(env!("CARGO_BIN_EXE_riesz-lattice"))
        .args(HEAT)
        .env(CONFIG_ENV, path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"series_tol\":1.0000000000000000e-8"), "{text}");
    assert!(text.contains("\"M\":3,"), "{text}");
}

#[test]
fn unknown_config_key_is_named() {
    let f = config("series_tol = 1e-8\nseries_toll = 1\n");
    let mut args = vec!["--config", f.path().to_str().unwrap()];
    args.extend(HEAT);
    let (code, _, err) = call(&args);
    assert_eq!(code, 1);
    assert!(err.contains("series_toll"), "{err}");

    let mut args = vec!["--set", "bogus=1"];
    args.extend(HEAT);
    let (code, _, err) = call(&args);
    assert_eq!(code, 1);
    assert!(err.contains("bogus"), "{err}");
}

#[test]
fn missing_config_file_fails() {
    let mut args = vec!["--config", "/nonexistent/riesz.toml"];
    args.extend(HEAT);
    assert_eq!(call(&args).0, 1);
}

#[test]
fn sweep_csv_is_deterministic() {
    let args = ["sweep", "riesz", "--sigma", "0", "--tau", "0", "--gamma", "1", "--grid", "5:10:3"];
    let (code, a, err) = call(&args);
    assert_eq!(code, 0, "{err}");
    let (_, b, _) = call(&["--threads", "1", "sweep", "riesz", "--sigma", "0", "--tau", "0", "--gamma", "1", "--grid", "5:10:3"]);
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "param,beta_star,value,bracket_lo,bracket_hi,degenerate,near_optima_count");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("5.0000000000000000e0,"));
    assert!(lines[3].starts_with("1.0000000000000000e1,"));
}

#[test]
fn floats_carry_seventeen_digits() {
    let (_, out, _) = call(&HEAT);
    assert!(out.contains("\"value\":3.3869688733846592e-1"), "{out}");
}
