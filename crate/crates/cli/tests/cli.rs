use std::fs;
use std::process::Command;

use rotvec_cli::{run, run_with_jobs, ExperimentConfig, ExperimentKind};

fn rotvec() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rotvec"))
}

#[test]
fn list_prints_the_catalog() {
    let out = rotvec().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for k in ExperimentKind::ALL {
        assert!(text.contains(k.id()), "missing {}", k.id());
    }
    assert!(text.contains("example3-twisted"));
    assert!(text.contains("pb-upper ∈ [0.999, 1.05]"));
}

#[test]
fn empty_config_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    fs::write(&path, "").unwrap();
    let v = rotvec().arg("validate").arg(&path).output().unwrap();
    assert_eq!(v.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&v.stderr).contains("invalid config"));
    let r = rotvec().arg("run").arg(&path).output().unwrap();
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn validate_accepts_builtin_configs() {
    let dir = tempfile::tempdir().unwrap();
    for k in ExperimentKind::ALL {
        if k == ExperimentKind::Custom {
            continue;
        }
        let path = dir.path().join(format!("{}.json", k.id()));
        fs::write(&path, format!(r#"{{"experiment": "{}"}}"#, k.id())).unwrap();
        let out = rotvec().arg("validate").arg(&path).output().unwrap();
        assert!(out.status.success(), "{}", k.id());
    }
}

#[test]
fn validate_reports_the_json_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"experiment": "chord", "chord": {"t_max": "long"}}"#).unwrap();
    let out = rotvec().arg("validate").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/chord/t_max"));
}

#[test]
fn chord_run_writes_report_and_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("chord.json");
    fs::write(&cfg, r#"{"experiment": "chord"}"#).unwrap();
    let out_dir = dir.path().join("out");
    let out = rotvec()
        .args(["run"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .args(["--jobs", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["experiment"], "chord");
    assert_eq!(report["passed"], true);
    let t = report["results"]["chord"]["time"].as_f64().unwrap();
    assert!((t - 1.0).abs() <= 1e-9);
    assert!(out_dir.join("chord.dat").exists());
}

#[test]
fn failed_threshold_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("custom.json");
    fs::write(
        &cfg,
        r#"{"experiment": "custom",
            "space": {"preset": "standard", "n": 1},
            "hamiltonian": {"family": "sin-squared"},
            "form": {"class": [0, 1]},
            "seeds": {"resolution": 8, "layout": "momentum"},
            "search": {"t0": 10, "t_max": 20},
            "thresholds": {"min_best_value": 4.0}}"#,
    )
    .unwrap();
    let out = rotvec().arg("run").arg(&cfg).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL best_value_at_least"));
}

#[test]
fn seed_env_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("chord.json");
    fs::write(&cfg, r#"{"experiment": "chord", "seed": 3}"#).unwrap();
    let out_dir = dir.path().join("out");
    let out = rotvec()
        .env("ROTVEC_SEED", "41")
        .arg("run")
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 41);
    assert_eq!(report["config"]["seed"], 41);
}

#[test]
fn reports_are_deterministic_across_runs_and_pool_sizes() {
    let dir = tempfile::tempdir().unwrap();
    for kind in [ExperimentKind::Example1Bound, ExperimentKind::Example3Twisted, ExperimentKind::Chord] {
        let mut cfg = ExperimentConfig::builtin(kind);
        if kind == ExperimentKind::Example1Bound {
            cfg.seeds = Some(rotvec_cli::config::SeedConfig {
                resolution: 8,
                layout: rotvec_core::SeedLayout::Full,
            });
        }
        if kind == ExperimentKind::Example3Twisted {
            cfg.horizon = Some(100.0);
        }
        let a = run(&cfg, &dir.path().join("a")).unwrap();
        let b = run_with_jobs(&cfg, &dir.path().join("b"), Some(1)).unwrap();
        let c = run_with_jobs(&cfg, &dir.path().join("c"), Some(3)).unwrap();
        assert_eq!(a.deterministic_json(), b.deterministic_json(), "{}", kind.id());
        assert_eq!(a.deterministic_json(), c.deterministic_json(), "{}", kind.id());
        assert_eq!(
            fs::read(dir.path().join("a/seeds.csv")).ok(),
            fs::read(dir.path().join("b/seeds.csv")).ok()
        );
    }
}

#[test]
fn pb_runs_are_deterministic_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::builtin(ExperimentKind::PbUpper);
    cfg.seed = 5;
    cfg.n_modes = Some(4);
    cfg.optimizer = Some(rotvec_core::PbOptions {
        restarts: 3,
        nelder_mead: rotvec_core::NelderMeadOptions {
            max_evals: 60,
            ..Default::default()
        },
        grid_res: 512,
        ..Default::default()
    });
    let a = run_with_jobs(&cfg, &dir.path().join("a"), Some(1)).unwrap();
    let b = run_with_jobs(&cfg, &dir.path().join("b"), Some(3)).unwrap();
    assert_eq!(a.deterministic_json(), b.deterministic_json());
    assert_eq!(a.results["audit"]["restarts"].as_array().unwrap().len(), 3);
}
