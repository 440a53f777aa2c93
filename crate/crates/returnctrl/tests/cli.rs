use std::path::Path;
use std::process::Command as Process;

use returnctrl::io::config::RunConfig;
use returnctrl::io::{execute, Command};
use serde_json::Value;

fn bin() -> Process {
    let mut c = Process::new(env!("CARGO_BIN_EXE_returnctrl"));
    c.env_remove("RETURNCTRL_THREADS");
    c
}

fn run(args: &[&str], dir: &Path) -> (i32, String) {
    let o = bin().args(args).arg("--out").arg(dir).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stderr).into_owned())
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn unknown_config_key_exits_2() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("c.toml");
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    let (code, err) = run(&["observability", "--config", cfg.to_str().unwrap()], &d.path().join("o"));
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("\"kind\":\"config\""), "{err}");
}

#[test]
fn negative_penalty_exits_2() {
    let d = tempfile::tempdir().unwrap();
    let (code, err) = run(&["solve-control", "--penalty-epsilon", "-1"], d.path());
    assert_eq!(code, 2, "{err}");
    let (code, _) = run(&["solve-control", "--s", "-0.5"], d.path());
    assert_eq!(code, 2);
}

#[test]
fn malformed_grid_flag_exits_2() {
    let d = tempfile::tempdir().unwrap();
    let (code, _) = run(&["solve-control", "--grid", "5"], d.path());
    assert_eq!(code, 2);
}

#[test]
fn bad_thread_cap_exits_2() {
    let d = tempfile::tempdir().unwrap();
    let o = bin()
        .env("RETURNCTRL_THREADS", "none")
        .args(["demo-obstruction", "--out"])
        .arg(d.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_for_another_command_exits_2() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("c.toml");
    std::fs::write(&cfg, "command = \"observability\"\n").unwrap();
    let (code, _) = run(&["solve-control", "--config", cfg.to_str().unwrap()], &d.path().join("o"));
    assert_eq!(code, 2);
}

#[test]
fn failed_remainder_domination_exits_3() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("c.toml");
    std::fs::write(&cfg, "[trajectory]\nbump_epsilon = 0.4\n").unwrap();
    let out = d.path().join("o");
    let (code, err) = run(&["solve-control", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(code, 3, "{err}");
    let e = read_json(&out.join("error.json"));
    assert_eq!(e["error"]["kind"], "construction");
    assert_eq!(e["error"]["exit_code"], 3);
}

#[test]
fn picard_budget_exhausted_exits_4_after_writing_results() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("c.toml");
    std::fs::write(&cfg, "[picard]\nmax_iter = 2\n").unwrap();
    let out = d.path().join("o");
    let (code, err) = run(&["run-nonlinear", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(code, 4, "{err}");
    assert_eq!(read_json(&out.join("error.json"))["error"]["kind"], "not-converged");
    let s = read_json(&out.join("summary.json"));
    assert_eq!(s["result"]["headline"]["converged"], false);
    assert!(out.join("history.csv").exists());
}

#[test]
fn obstruction_command_writes_its_artifacts_and_is_reproducible() {
    let d = tempfile::tempdir().unwrap();
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    for o in [&a, &b] {
        let (code, err) = run(&["demo-obstruction", "--seed", "7", "--grid", "60,120"], o);
        assert_eq!(code, 0, "{err}");
    }
    for f in ["summary.json", "gaps.csv", "v_star.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    assert!(a.join("obstruction.gp").exists());
    let m = read_json(&a.join("metadata.json"));
    assert!(m["elapsed_seconds"].as_f64().unwrap() >= 0.0);
    let s = read_json(&a.join("summary.json"));
    assert_eq!(s["config"]["obstruction"]["nx"], 60);
    assert_eq!(s["result"]["headline"]["n_controls"], 32);
    assert_eq!(s["result"]["headline"]["order_holds"], true);
}

#[test]
fn effective_config_reproduces_the_run() {
    let d = tempfile::tempdir().unwrap();
    let first = d.path().join("first");
    let (code, _) = run(&["demo-obstruction", "--seed", "3", "--grid", "40,80"], &first);
    assert_eq!(code, 0);
    let second = d.path().join("second");
    let (code, _) = run(&["demo-obstruction", "--config", first.join("config.toml").to_str().unwrap()], &second);
    assert_eq!(code, 0);
    let a = read_json(&first.join("summary.json"));
    let b = read_json(&second.join("summary.json"));
    assert_eq!(a, b);
}

#[test]
fn zero_amplitude_gives_the_zero_control() {
    let d = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig {
        command: Some(Command::SolveControl),
        out: Some(d.path().to_path_buf()),
        ..Default::default()
    };
    cfg.data.control_amplitude = 0.0;
    cfg.sweep.enabled = false;
    cfg.output.csv = false;
    cfg.output.binary = false;
    let s = execute(&cfg).unwrap();
    assert_eq!(s["result"]["headline"]["h_is_zero"], true);
    assert_eq!(s["result"]["headline"]["terminal_norm"], 0.0);
}

#[test]
fn decoupled_observability_reports_divergence_with_exit_0() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("c.toml");
    std::fs::write(
        &cfg,
        "[grid]\nnx = 24\nnt = 32\n\n[observability]\ncoefficients = \"decoupled\"\nn_samples = 16\ncompare_samples = 8\n",
    )
    .unwrap();
    let out = d.path().join("o");
    let (code, err) = run(&["observability", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(code, 0, "{err}");
    let s = read_json(&out.join("summary.json"));
    assert_eq!(s["result"]["headline"]["diverged"], true);
    assert!(out.join("ratios.csv").exists());
}
