use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_translates"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("translates-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn single_log_kernel_balances_at_the_midpoint() {
    let out = run(&["solve", "--target", "0", "--kernels", "log", "--n", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["command"], "solve");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(v["result"]["status"], "converged");
    let y = floats(&v["result"]["y_solution"]);
    assert!((y[0] - 0.5).abs() < 1e-9);
}

#[test]
fn chebyshev_nodes_for_three_simple_zeros() {
    let out = run(&["bojanov", "--nu", "1,1,1", "--interval", "-1,1"]);
    assert!(out.status.success());
    let r = &json(&out)["result"];
    let nodes = floats(&r["nodes"]);
    let c = 3f64.sqrt() / 2.0;
    for (got, want) in nodes.iter().zip([-c, 0.0, c]) {
        assert!((got - want).abs() < 1e-6, "{nodes:?}");
    }
    assert!((r["minimax"].as_f64().unwrap() - 0.25).abs() < 1e-8);
    assert_eq!(r["certified"], true);
}

#[test]
fn lagrange_with_a_square() {
    let out = run(&[
        "interpolate",
        "lagrange",
        "--x",
        "0,1",
        "--alpha",
        "1,4",
        "--factor",
        "t^2",
    ]);
    assert!(out.status.success());
    let r = &json(&out)["result"];
    assert!((floats(&r["nodes"])[0] - 1.0 / 3.0).abs() < 1e-9);
    assert!((r["scale"].as_f64().unwrap() - 9.0).abs() < 1e-7);
}

#[test]
fn eval_writes_grid_and_maxima() {
    let csv = scratch("eval.csv");
    let out = run(&[
        "eval",
        "--example",
        "kinked",
        "--y",
        "0.5",
        "--grid",
        "1000",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let m = &json(&out)["result"]["maxima"]["m"];
    assert!((m[0].as_f64().unwrap() - (2.0f64 / 3.0).ln()).abs() < 1e-8);
    assert!((m[1].as_f64().unwrap() - 0.4f64.ln()).abs() < 1e-8);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,F"));
    assert_eq!(lines.count(), 1001);
}

#[test]
fn example_sweeps_match_closed_forms() {
    for name in ["kinked", "jump", "plateau"] {
        let out = run(&["example", name, "--grid", "200"]);
        assert!(out.status.success(), "{name}");
        let r = &json(&out)["result"];
        assert_eq!(r["example"], name);
        assert!(r["max_dev_phi"].as_f64().unwrap() <= 1e-8, "{name}");
    }
}

#[test]
fn jump_example_is_refused_by_the_solver() {
    let out = run(&["solve", "--example", "jump", "--target", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn zero_nodes_is_invalid() {
    let cfg = scratch("n0.json");
    std::fs::write(&cfg, r#"{"kernels": [{"kind": "log", "nu": 1}], "n": 0, "y": [0.5]}"#).unwrap();
    let out = run(&["maxima", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_keys_are_invalid() {
    let cfg = scratch("typo.json");
    std::fs::write(&cfg, r#"{"kernel": [{"kind": "log"}]}"#).unwrap();
    let out = run(&["maxima", "--config", cfg.to_str().unwrap(), "--y", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_convergence_still_writes_the_report() {
    let cfg = scratch("one_iter.json");
    std::fs::write(&cfg, r#"{"solver": {"max_iters": 1}}"#).unwrap();
    let out = run(&[
        "solve",
        "--config",
        cfg.to_str().unwrap(),
        "--kernels",
        "log,log:2,sine:1.5:0.7",
        "--target",
        "3,-2,1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["result"]["status"], "max-iters");
}

#[test]
fn config_file_and_flags_agree() {
    let cfg = scratch("solve.json");
    std::fs::write(
        &cfg,
        r#"{"kernels": [{"kind": "log", "nu": 1}], "n": 2, "target": [0.5, -0.5]}"#,
    )
    .unwrap();
    let from_file = json(&run(&["solve", "--config", cfg.to_str().unwrap()]));
    let from_flags = json(&run(&["solve", "--kernels", "log,log", "--target", "0.5,-0.5"]));
    assert_eq!(from_file["config_hash"], from_flags["config_hash"]);
    assert_eq!(from_file["result"], from_flags["result"]);
}

#[test]
fn output_is_deterministic() {
    let a = scratch("a.json");
    let b = scratch("b.json");
    for path in [&a, &b] {
        let out = run(&[
            "roundtrip",
            "--count",
            "5",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["result"]["all_converged"], true);
    assert!(v["result"]["max_node_error"].as_f64().unwrap() < 1e-7);
}

#[test]
fn phi_reports_a_dominant_jacobian() {
    for method in ["auto", "analytic", "fd", "sandwich"] {
        let out = run(&["phi", "--kernels", "log:2,log", "--y", "0.3,0.7", "--jacobian", method]);
        assert!(out.status.success(), "{method}");
        let r = &json(&out)["result"];
        assert_eq!(floats(&r["phi"]).len(), 2);
        assert!(r["jacobian"]["dominance_margin"].as_f64().unwrap() > 0.0, "{method}");
    }
}

#[test]
fn sample_is_the_grid_dump() {
    let csv = scratch("sample.csv");
    let out = run(&[
        "sample",
        "--example",
        "plateau",
        "--y",
        "0.685",
        "--grid",
        "100",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["command"], "eval");
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 102);
}

#[test]
fn interpolant_grid_passes_through_the_data() {
    let csv = scratch("g.csv");
    let out = run(&[
        "interpolate",
        "lagrange",
        "--x",
        "0,1",
        "--alpha",
        "1,4",
        "--factor",
        "t^2",
        "--grid",
        "4",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    assert!((rows[0][1] - 1.0).abs() < 1e-8);
    assert!((rows[4][1] - 4.0).abs() < 1e-8);
}
