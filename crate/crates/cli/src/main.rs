use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rotvec_cli::{apply_seed_override, catalog, output_dir, run_with_jobs, ExperimentConfig};

#[derive(Parser)]
#[command(name = "rotvec", version, about = "Rotation vectors and Poisson bracket invariants on symplectic tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List builtin experiments with their expected headline numbers.
    List,
    /// Parse and check a config without running it.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            for e in catalog() {
                println!("{:<20} {}", e.id, e.anchor);
                if e.budget_seconds > 0 {
                    println!("{:<20} expected: {} (budget {} s)", "", e.expected, e.budget_seconds);
                } else {
                    println!("{:<20} expected: {}", "", e.expected);
                }
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match ExperimentConfig::from_path(&config) {
            Ok(cfg) => {
                println!("ok: {} ({})", config.display(), cfg.experiment.id());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Run { config, jobs, out } => {
            let mut cfg = match ExperimentConfig::from_path(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            if let Err(e) = apply_seed_override(&mut cfg) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            let dir = output_dir(&cfg, out.as_deref());
            match run_with_jobs(&cfg, &dir, jobs) {
                Ok(report) => {
                    for c in &report.checks {
                        println!(
                            "{} {} = {:.12} ({:?} {} ± {:e})",
                            if c.passed { "PASS" } else { "FAIL" },
                            c.name,
                            c.value,
                            c.comparator,
                            c.threshold,
                            c.tolerance
                        );
                    }
                    println!("report: {}", dir.join("report.json").display());
                    if report.passed {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
