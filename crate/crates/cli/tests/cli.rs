use std::path::PathBuf;
use std::process::{Command, Output};

use subharnack::verify::SweepReport;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_subharnack"));
    c.env_remove("SUBHARNACK_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn default_config() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.json")
}

#[test]
fn moment_prints_two() {
    let o = run(&["moment", "--alpha", "0.5", "--t", "1", "--r", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn expmoment_below_threshold_is_non_convergence() {
    let o = run(&[
        "expmoment",
        "--alpha",
        "0.4",
        "--kappa",
        "1",
        "--t",
        "1",
        "--delta",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("series diverges: alpha ≤ kappa/(kappa+1)"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn expmoment_converges_above_threshold() {
    // α = 1/2, κ = 1: E e^{δ/S} = (1 − 4δ/t²)^{−1/2}
    let o = run(&[
        "expmoment",
        "--alpha",
        "0.5",
        "--kappa",
        "1",
        "--t",
        "2",
        "--delta",
        "0.5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let got = v["value"].as_f64().unwrap();
    assert!((got - 2f64.sqrt()).abs() < 1e-10, "{got}");
}

#[test]
fn domain_errors_exit_one() {
    let o = run(&["density", "--alpha", "1.5", "--t", "1", "--s", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("alpha"));
    let o = run(&[
        "density", "--alpha", "0.5", "--t", "1", "--s", "1", "--colour", "red",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn density_and_kernel_closed_forms() {
    // Lévy density (4π)^{−1/2} s^{−3/2} e^{−1/(4s)} at s = 1
    let o = run(&["density", "--alpha", "0.5", "--t", "1", "--s", "1"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - (-0.25f64).exp() / (4.0 * std::f64::consts::PI).sqrt()).abs() < 1e-14);
    // Poisson kernel 1/(π(1 + 1)) at t = 1, |x − y| = 1
    let o = run(&[
        "kernel", "--alpha", "0.5", "--t", "1", "--x", "0", "--y", "1", "--format", "csv",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,value"));
    let v: f64 = lines
        .next()
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((v - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-9);
}

#[test]
fn verify_single_point_csv() {
    let o = run(&[
        "verify",
        "--check",
        "log_harnack",
        "--alpha",
        "0.5",
        "--t",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("check,alpha,kappa,p,t,x,y,f,lhs,rhs,slack,valid_domain,method")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "log_harnack");
    assert_eq!(row[11], "true");
}

#[test]
fn verify_mc_is_seeded() {
    let args = [
        "verify",
        "--check",
        "laplace_mc",
        "--alpha",
        "0.7",
        "--t",
        "1",
        "--samples",
        "2000",
    ];
    let a = run(&[&args[..], &["--seed", "5"]].concat());
    let b = run(&[&args[..], &["--seed", "5"]].concat());
    let c = run(&[&args[..], &["--seed", "6"]].concat());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn unknown_config_field_names_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(default_config()).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v[1]["quadrature"]["rel_tl"] = 1.into();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, v.to_string()).unwrap();
    let o = run(&["sweep", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("[1].quadrature.rel_tl"),
        "{}",
        stderr(&o)
    );

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v[0]["checks"] = serde_json::json!([]);
    std::fs::write(&p, v.to_string()).unwrap();
    let o = run(&["sweep", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn single_config_object_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = serde_json::json!({
        "base": {"kind": "gauss_heat", "d": 1},
        "alphas": [0.75], "ts": [1.0], "ps": [2.0],
        "point_pairs": [{"x": [0.0], "y": [1.0]}],
        "functions": [{"kind": "indicator", "lo": [-0.5], "hi": [0.5]}],
        "quadrature": {"rel_tol": 1e-8, "abs_tol": 1e-14, "max_subdivisions": 4000},
        "checks": ["subordinated_harnack", "bound_chain"]
    });
    let p = dir.path().join("small.json");
    std::fs::write(&p, cfg.to_string()).unwrap();
    let out = dir.path().join("r.json");
    let o = run(&[
        "sweep",
        "--config",
        p.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: SweepReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.summary.violated, 0);
    assert!(r.summary.holds > 0);
}

#[test]
fn default_sweep_passes_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&[
        "sweep",
        "--config",
        default_config().to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let r: SweepReport = serde_json::from_str(&text).unwrap();
    assert_eq!(r.summary.violated, 0);
    assert_eq!(r.summary.non_converged, 0);
    let again: SweepReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(
        serde_json::to_string(&again).unwrap(),
        serde_json::to_string(&r).unwrap()
    );
}
