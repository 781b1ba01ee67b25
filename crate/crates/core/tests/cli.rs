use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

use choquard::cli::{self, RunConfig, RunOptions, SelftestOptions, CSV_HEADER};
use choquard::Error;

fn base() -> Value {
    json!({
        "lattice": { "dim": 1, "radius": 16 },
        "potentials": {
            "a": { "center": [0], "radius": 3, "exponent": 2.0, "amplitude": 1.0 },
            "b": { "center": [0], "radius": 2, "exponent": 2.0, "amplitude": 1.0 }
        },
        "kernel": { "alpha": 0.4, "backend": { "type": "integral" } },
        "nonlinearity": { "family": "product", "gamma1": 2.0, "gamma2": 2.0, "gamma": 4.0 },
        "p": 2.0,
        "lambdas": [1, 10, 100, 1000, 10000],
        "solver": { "restarts": 4 },
        "seed": 3
    })
}

fn errors(cfg: &Value) -> Vec<String> {
    match RunConfig::from_json(&cfg.to_string()) {
        Err(Error::Config(errs)) => errs,
        other => panic!("expected validation errors, got {other:?}"),
    }
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path
}

#[test]
fn sample_configs_validate() {
    for name in ["sweep_1d.json", "sweep_2d_p3.json"] {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name);
        let text = cli::check(&path).unwrap();
        assert!(text.starts_with("OK\n"), "{name}");
        assert!(text.contains("\"alpha\": 0.4"));
    }
}

#[test]
fn p_below_two_is_rejected() {
    let mut c = base();
    c["p"] = json!(1.5);
    let errs = errors(&c);
    assert!(errs.iter().any(|e| e.contains("p >= 2")), "{errs:?}");
}

#[test]
fn integral_alpha_range_is_enforced() {
    let mut c = base();
    c["kernel"]["alpha"] = json!(0.7);
    let errs = errors(&c);
    assert!(errs.iter().any(|e| e.contains("alpha < N/2")), "{errs:?}");
    c["kernel"]["backend"] = json!({ "type": "power_law", "kappa": 1.0, "zero_value": 1.0 });
    assert!(RunConfig::from_json(&c.to_string()).is_ok());
}

#[test]
fn missing_gamma_is_named() {
    let mut c = base();
    c["nonlinearity"].as_object_mut().unwrap().remove("gamma");
    let errs = errors(&c);
    assert!(errs.iter().any(|e| e.contains("nonlinearity.gamma`")), "{errs:?}");
}

#[test]
fn every_violation_is_listed() {
    let mut c = base();
    c["p"] = json!(8.0);
    c["nonlinearity"]["gamma1"] = json!(1.0);
    c["nonlinearity"]["gamma"] = json!(5.0);
    c["lambdas"] = json!([10, 1]);
    c["potentials"]["a"]["radius"] = json!(16);
    let errs = errors(&c);
    let expect = ["gamma1 = 1 violates gamma1 > 1", "gamma1 + gamma2", "lambdas must be strictly increasing", "potential a", "(N+alpha)p/(2N)"];
    for e in expect {
        assert!(errs.iter().any(|m| m.contains(e)), "no `{e}` in {errs:?}");
    }
    let mut c = base();
    c["p"] = json!(6.0);
    let errs = errors(&c);
    assert!(errs.iter().any(|m| m.starts_with("gamma = 4 violates the lower bound (N+alpha)p/(2N) = 4.")), "{errs:?}");
}

#[test]
fn unknown_keys_and_bad_json_fail_validation() {
    let mut c = base();
    c["lattice"]["radus"] = json!(3);
    let err = RunConfig::from_json(&c.to_string()).unwrap_err();
    assert_eq!(cli::exit_code(&err), cli::EXIT_VALIDATION);
    let err = RunConfig::from_json("{ not json").unwrap_err();
    assert_eq!(cli::exit_code(&err), cli::EXIT_VALIDATION);
}

#[test]
fn run_writes_outputs_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &base());
    let run = |out: &str, jobs| {
        cli::run(&RunOptions { config: cfg.clone(), out: Some(dir.path().join(out)), jobs: Some(jobs), seed: None }).unwrap()
    };
    let a = run("a", 1);
    let b = run("b", 3);
    assert_eq!(a.exit_code(), cli::EXIT_OK, "{:?}", a.failures);
    let csv_a = std::fs::read_to_string(dir.path().join("a/sweep.csv")).unwrap();
    let csv_b = std::fs::read_to_string(dir.path().join("b/sweep.csv")).unwrap();
    assert_eq!(csv_a, csv_b);
    let lines: Vec<&str> = csv_a.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 6);
    let m: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(m.windows(2).all(|w| w[1] >= w[0]), "{m:?}");
    for f in ["limit_report.txt", "summary.txt", "lambda_00.txt", "lambda_04.txt"] {
        assert!(dir.path().join("a").join(f).exists(), "{f}");
    }
    let summary = std::fs::read_to_string(dir.path().join("a/summary.txt")).unwrap();
    assert!(summary.contains("m_lambda monotone    PASS"));
    assert_eq!(b.table.rows.len(), 5);
}

#[test]
fn selftest_passes_and_detects_a_corrupted_kernel() {
    let ok = cli::selftest(SelftestOptions::default()).unwrap();
    assert!(ok.passed(), "{ok}");
    let bad = cli::selftest(SelftestOptions { corrupt_kernel: true, ..Default::default() }).unwrap();
    assert!(!bad.passed());
    assert!(!bad.suite("self_adjointness").unwrap().passed());
    assert!(bad.suite("euler_identity").unwrap().passed());
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_choquard");
    let dir = tempfile::tempdir().unwrap();

    let mut bad = base();
    bad["p"] = json!(1.5);
    let path = write(dir.path(), "bad.json", &bad);
    let out = Command::new(exe).args(["check", "--config"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p >= 2"));

    let good = write(dir.path(), "good.json", &base());
    let out = Command::new(exe).args(["check", "--config"]).arg(&good).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("OK"));

    let mut slow = base();
    slow["solver"] = json!({ "restarts": 2, "max_iters": 2 });
    slow["lambdas"] = json!([1.0]);
    let path = write(dir.path(), "slow.json", &slow);
    let out = Command::new(exe).args(["run", "--config"]).arg(&path).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(exe).args(["run", "--config"]).arg(&good).arg("--out").arg(dir.path().join("g")).args(["--jobs", "2", "--seed", "11"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("g/sweep.csv").exists());

    let out = Command::new(exe).arg("selftest").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
