//! Experiment runner: configs in, reports and plot-ready data out.

pub mod config;
pub mod experiments;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::{ConfigError, ExperimentConfig, ExperimentKind};
pub use experiments::{catalog, CatalogEntry, RunError};
pub use report::{Check, Comparator, Report};

/// Environment variable that replaces the seed of any config.
pub const SEED_ENV: &str = "ROTVEC_SEED";

/// Applies `ROTVEC_SEED` when it is set.
pub fn apply_seed_override(cfg: &mut ExperimentConfig) -> Result<(), ConfigError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => {
            cfg.seed = v.trim().parse().map_err(|_| ConfigError::Invalid {
                pointer: "/seed".into(),
                message: format!("{SEED_ENV}={v:?} is not an unsigned integer"),
            })?;
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

/// Output directory: the explicit override, then the config, then `rotvec-out/<id>`.
pub fn output_dir(cfg: &ExperimentConfig, out: Option<&Path>) -> PathBuf {
    out.map(Path::to_path_buf)
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("rotvec-out").join(cfg.experiment.id()))
}

/// Runs one experiment and writes `report.json` with its data files into `dir`.
pub fn run(cfg: &ExperimentConfig, dir: &Path) -> Result<Report, RunError> {
    let start = Instant::now();
    let mut artifacts = report::Artifacts::new(dir)?;
    let outcome = experiments::run_experiment(cfg, &mut artifacts)?;
    let mut files = artifacts.into_files();
    files.push("report.json".into());
    let passed = outcome.checks.iter().all(|c| c.passed);
    let rep = Report {
        experiment: cfg.experiment.id().into(),
        seed: cfg.seed,
        config: serde_json::to_value(cfg).expect("config serializes"),
        results: outcome.results,
        checks: outcome.checks,
        passed,
        notes: outcome.notes,
        files,
        runtime_seconds: start.elapsed().as_secs_f64(),
    };
    report::write_report(dir, &rep)?;
    Ok(rep)
}

/// [`run`] inside a worker pool of `jobs` threads; `None` uses the global pool.
pub fn run_with_jobs(cfg: &ExperimentConfig, dir: &Path, jobs: Option<usize>) -> Result<Report, RunError> {
    match jobs {
        None => run(cfg, dir),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| RunError::Pool(e.to_string()))?
            .install(|| run(cfg, dir)),
    }
}
