//! End-to-end tests of the `ginidyn` binary: subcommands, file formats, and
//! exit codes (0 = clean, 2 = inequality failure, 1 = any other error).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ginidyn"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_value(output: &Output, key: &str) -> f64 {
    let text = String::from_utf8_lossy(&output.stdout);
    let line = text
        .lines()
        .find(|l| l.starts_with(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("missing `{key}` in output:\n{text}"));
    line.split(" = ").nth(1).unwrap().parse().unwrap()
}

#[test]
fn simulate_ipp_gini_column_is_nonincreasing() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("sim.json"),
        r#"{
            "model": {"kind": "persuasion_polarization", "k": 2},
            "initial": {"probs": [0.2, 0.2, 0.2, 0.2, 0.2]},
            "sim": {"trunc": 4, "t_end": 10.0, "record_every": 5}
        }"#,
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &["simulate", "--config", "sim.json", "--out", "traj.csv"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = fs::read_to_string(dir.path().join("traj.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let gini_col = header.iter().position(|&h| h == "gini").unwrap();
    let ginis: Vec<f64> = lines
        .map(|l| l.split(',').nth(gini_col).unwrap().parse().unwrap())
        .collect();
    assert!(ginis.len() > 100);
    for w in ginis.windows(2) {
        assert!(w[1] <= w[0] + 1e-10);
    }
}

#[test]
fn simulate_sticky_reaches_equilibrium() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("sim.json"),
        r#"{
            "model": {"kind": "sticky_dispersion", "mu": 0.7},
            "initial": {"probs": [0.3, 0.2, 0.5]},
            "sim": {"trunc": 8, "t_end": 60.0, "record_every": 100}
        }"#,
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &[
            "simulate",
            "--config",
            "sim.json",
            "--out",
            "traj.json",
            "--format",
            "json",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("traj.json")).unwrap()).unwrap();
    let last = doc["rows"].as_array().unwrap().last().unwrap().clone();
    // At equilibrium (0.3, 0.7): l1 to delta_0 = 0.7 + 0.7 = 1.4, gini = 0.3.
    assert!((last["gini"].as_f64().unwrap() - 0.3).abs() < 1e-6);
    assert!((last["l1_dirac0"].as_f64().unwrap() - 1.4).abs() < 1e-6);
    assert!((last["mean"].as_f64().unwrap() - 0.7).abs() < 1e-6);
}

#[test]
fn simulate_rejects_malformed_config_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("sim.json"), "{not valid json").unwrap();
    let out = run_in(
        dir.path(),
        &["simulate", "--config", "sim.json", "--out", "traj.csv"],
    );
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("sim.json"), "{stderr}");
    assert!(!dir.path().join("traj.csv").exists());
}

#[test]
fn metrics_prints_gini_and_pairwise_distances() {
    let dir = tempfile::tempdir().unwrap();
    let third = 1.0 / 3.0;
    fs::write(
        dir.path().join("u3.json"),
        format!(r#"{{"trunc": 2, "probs": [{third:.17}, {third:.17}, {third:.17}]}}"#),
    )
    .unwrap();
    let out = run_in(dir.path(), &["metrics", "u3.json"]);
    assert!(out.status.success());
    assert!((stdout_value(&out, "gini_double_sum") - 4.0 / 9.0).abs() < 1e-9);
    assert!((stdout_value(&out, "gini_cdf") - 4.0 / 9.0).abs() < 1e-9);
    assert!((stdout_value(&out, "mean") - 1.0).abs() < 1e-9);

    let out = run_in(dir.path(), &["metrics", "u3.json", "u3.json"]);
    assert!(out.status.success());
    assert_eq!(stdout_value(&out, "w1"), 0.0);
    assert_eq!(stdout_value(&out, "l1"), 0.0);
}

#[test]
fn metrics_rejects_mass_defect() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.json"),
        r#"{"trunc": 1, "probs": [0.5, 0.6]}"#,
    )
    .unwrap();
    let out = run_in(dir.path(), &["metrics", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("mass"), "{stderr}");
}

#[test]
fn equilibrium_writes_file_and_round_trips_through_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["equilibrium", "--mu", "1.6", "--trunc", "4", "--out", "pstar.json"],
    );
    assert!(out.status.success());
    let printed = stdout_value(&out, "gini_equilibrium");
    assert!((printed - 0.15).abs() < 1e-12);

    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("pstar.json")).unwrap()).unwrap();
    assert_eq!(doc["trunc"], 4);
    let probs = doc["probs"].as_array().unwrap();
    assert_eq!(probs.len(), 5);
    assert!((probs[1].as_f64().unwrap() - 0.4).abs() < 1e-15);
    assert!((probs[2].as_f64().unwrap() - 0.6).abs() < 1e-15);

    // Round trip: the file re-read by `metrics` reproduces G* within 1e-12.
    let out = run_in(dir.path(), &["metrics", "pstar.json"]);
    assert!(out.status.success());
    assert!((stdout_value(&out, "gini_double_sum") - printed).abs() <= 1e-12);

    for (mu, gstar, probs_head) in [("2", 0.0, vec![0.0, 0.0, 1.0]), ("0.5", 0.5, vec![0.5, 0.5])] {
        let out = run_in(
            dir.path(),
            &["equilibrium", "--mu", mu, "--trunc", "4", "--out", "p.json"],
        );
        assert!(out.status.success());
        assert!((stdout_value(&out, "gini_equilibrium") - gstar).abs() < 1e-12);
        let doc: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("p.json")).unwrap()).unwrap();
        for (n, want) in probs_head.iter().enumerate() {
            assert_eq!(doc["probs"][n].as_f64().unwrap(), *want, "mu={mu} n={n}");
        }
    }
}

#[test]
fn equilibrium_rejects_out_of_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["equilibrium", "--mu", "4.5", "--trunc", "4", "--out", "p.json"],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_passes_and_self_test_flip_fails() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("verify.json"),
        r#"{"mu_grid": [0.5, 1.0, 1.6], "trunc": 25, "n_samples": 40, "seed": 11}"#,
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &["verify", "--config", "verify.json", "--out", "report.json"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["thm1"]["count"], 120);
    assert_eq!(report["thm1"]["failures"], 0);

    // Harness self-test: flipping the inequality direction must fail the run.
    fs::write(
        dir.path().join("flip.json"),
        r#"{"mu_grid": [0.5, 1.0, 1.6], "trunc": 25, "n_samples": 40, "seed": 11,
            "self_test_flip": true}"#,
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &["verify", "--config", "flip.json", "--out", "flipped.json"],
    );
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("flipped.json")).unwrap())
            .unwrap();
    assert!(report["thm1"]["failures"].as_u64().unwrap() > 0);
}

#[test]
fn verify_empty_sweep_exits_clean() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("verify.json"),
        r#"{"mu_grid": [0.5], "trunc": 10, "n_samples": 0, "seed": 1}"#,
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &["verify", "--config", "verify.json", "--out", "report.json"],
    );
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["thm1"]["count"], 0);
    assert_eq!(report["thm1"]["witnesses"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("verify.json"),
        r#"{"mu_grid": [1.6], "trunc": 20, "n_samples": 5, "seed": 1}"#,
    )
    .unwrap();
    let a = run_in(
        dir.path(),
        &["verify", "--config", "verify.json", "--out", "a.json", "--seed", "99"],
    );
    assert!(a.status.success());
    fs::write(
        dir.path().join("verify2.json"),
        r#"{"mu_grid": [1.6], "trunc": 20, "n_samples": 5, "seed": 99}"#,
    )
    .unwrap();
    let b = run_in(
        dir.path(),
        &["verify", "--config", "verify2.json", "--out", "b.json"],
    );
    assert!(b.status.success());
    let read = |name: &str| {
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        serde_json::from_str::<serde_json::Value>(&text).unwrap()
    };
    assert_eq!(
        read("a.json")["thm1"]["min_slack"],
        read("b.json")["thm1"]["min_slack"]
    );
}

#[test]
fn simulate_reports_positivity_failure_with_step_context() {
    let dir = tempfile::tempdir().unwrap();
    // A large step on the rich-biased model from a concentrated datum drives
    // entries negative, which must abort with step/time context.
    fs::write(
        dir.path().join("sim.json"),
        r#"{
            "model": {"kind": "rich_biased"},
            "initial": {"probs": [0.0, 1.0]},
            "sim": {"trunc": 4, "t_end": 40.0, "dt": 2.5}
        }"#,
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &["simulate", "--config", "sim.json", "--out", "traj.csv"],
    );
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("step"), "{stderr}");
    assert!(!dir.path().join("traj.csv").exists());
}
