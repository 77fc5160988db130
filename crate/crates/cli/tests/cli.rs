use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schwartzkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_wall_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time");
    v
}

#[test]
fn main_theorem_explicit_zeros() {
    let out = run(&["verify-main-theorem", "--zeros", "1,2", "--orders", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["config"]["orders"], serde_json::json!([1, 1]));
}

#[test]
fn main_theorem_writes_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["verify-main-theorem", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rate = v["metrics"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["name"] == "decay_rate.relative_error")
        .unwrap();
    assert!(rate["value"].as_f64().unwrap() < 0.02);
    let f = std::fs::read_to_string(dir.path().join("f.csv")).unwrap();
    assert_eq!(f.lines().next(), Some("x,re,im"));
    assert!(dir.path().join("f_hat.csv").exists());
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn zeros_file_is_echoed_inline() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeros.txt");
    std::fs::write(&path, "1\n2\n").unwrap();
    let spec = format!("@{}", path.display());
    let out = run(&["verify-main-theorem", "--zeros", &spec, "--orders", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let echoed = json(&out)["config"]["zeros"].as_str().unwrap().to_string();
    let again = run(&["verify-main-theorem", "--zeros", &echoed, "--orders", "1,1"]);
    assert_eq!(without_wall_time(json(&out)), without_wall_time(json(&again)));
}

#[test]
fn malformed_zeros_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeros.txt");
    std::fs::write(&path, "1, two, 3").unwrap();
    let spec = format!("@{}", path.display());
    let out = run(&["verify-main-theorem", "--zeros", &spec]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"]["field"], "zeros");
    assert!(v["error"]["message"].as_str().unwrap().contains("two"));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{"grid": {"L": 16, "N": 2048}, "J": 3, "N_factors": 6, "battery": ["gaussian"], "seed": 4}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let out = run(&["factorize", "--config", p, "--terms", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["J"], 6);
    assert_eq!(v["config"]["N_factors"], 6);
    assert_eq!(v["config"]["grid"]["N"], 2048);
    assert_eq!(v["config"]["seed"], 4);

    let out = run(&["factorize", "--config", p, "--grid-N", "1024"]);
    let v = json(&out);
    assert_eq!(v["config"]["grid"]["L"], 16.0);
    assert_eq!(v["config"]["grid"]["N"], 1024);
}

#[test]
fn unknown_config_key() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{"grid": {"L": 16, "N": 2048}, "trems": 3}"#).unwrap();
    let out = run(&["factorize", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["field"], "config");
}

#[test]
fn x_over_sinh_factorization() {
    let out = run(&[
        "factorize",
        "--target",
        "x_over_sinh",
        "--terms",
        "5",
        "--product-terms",
        "5",
        "--tolerance",
        "1e-7",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn mis_sized_support_is_reported() {
    let out = run(&[
        "factorize",
        "--flavor",
        "compact",
        "--sigma",
        "0.5",
        "--target",
        "bump",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["pass"], false);
    let errors = v["errors"].as_array().unwrap();
    assert!(
        errors.iter().any(|e| e.as_str().unwrap().contains("support")),
        "{errors:?}"
    );
}

#[test]
fn more_terms_than_factors() {
    let out = run(&["delta", "--terms", "7", "--product-terms", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["field"], "J");
}

#[test]
fn delta_writes_pairing_traces() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "delta",
        "--target",
        "gaussian",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let trace = std::fs::read_to_string(dir.path().join("pairing_gaussian.csv")).unwrap();
    assert_eq!(
        trace.lines().next(),
        Some("n,value_re,value_im,target_re,target_im,abs_error")
    );
    // header and n = 0, …, 6
    assert_eq!(trace.lines().count(), 8);
}

#[test]
fn reports_are_reproducible() {
    let args = [
        "delta",
        "--target",
        "gaussian",
        "--target",
        "x_over_sinh",
        "--seed",
        "3",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(without_wall_time(json(&a)), without_wall_time(json(&b)));
    let strip = |o: &Output| {
        String::from_utf8(o.stdout.clone())
            .unwrap()
            .lines()
            .filter(|l| !l.contains("\"wall_time\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn csv_metrics_per_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["growth", "--format", "csv", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().next(), Some("family,name,value,tolerance,pass"));
    let files: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with("metrics_"))
        .collect();
    assert!(!files.is_empty());
    for f in files {
        let text = std::fs::read_to_string(dir.path().join(&f)).unwrap();
        let fam = f.trim_start_matches("metrics_").trim_end_matches(".csv");
        assert!(text.lines().skip(1).all(|l| l.starts_with(&format!("{fam},"))));
    }
}

#[test]
fn failing_metric_sets_exit_code() {
    let out = run(&["poisson", "--tolerance", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

fn suite(seed: &str, dir: &Path) -> Output {
    run(&[
        "suite",
        "--seed",
        seed,
        "--format",
        "csv",
        "--out",
        dir.to_str().unwrap(),
    ])
}

#[test]
fn suite_passes_for_any_seed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let x = suite("0", a.path());
    let y = suite("11", b.path());
    assert_eq!(x.status.code(), Some(0), "{}", String::from_utf8_lossy(&x.stdout));
    assert_eq!(x.stdout, y.stdout);
    for k in 1..=12 {
        assert!(a.path().join(format!("metrics_criterion_{k}.csv")).exists());
    }
}
