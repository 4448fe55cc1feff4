use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use netshare::analytic::NoiseModel;
use netshare::experiment::{self, CurveRequest, ExperimentError, Overrides, ThetaGrid, ValidationSettings};

#[derive(Parser)]
#[command(name = "netshare", version, about = "Coverage and rate of shared cellular networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every scenario of a TOML experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        realizations: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check Monte-Carlo coverage against the closed forms.
    Validate {
        #[arg(long, default_value_t = 0.015)]
        tolerance: f64,
        #[arg(long, default_value_t = 100_000)]
        realizations: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print a closed-form coverage curve as CSV.
    Curve {
        /// none, infrastructure, spectrum or full, optionally with -flat / -selective.
        #[arg(long)]
        scenario: String,
        #[arg(long, allow_hyphen_values = true)]
        theta_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta_max: f64,
        #[arg(long)]
        step: f64,
        #[arg(long, value_delimiter = ',', default_value = "1,1")]
        densities: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        operator: usize,
        #[arg(long, default_value_t = 4.0)]
        alpha: f64,
        /// Noise power; omit for the interference-limited case.
        #[arg(long)]
        noise: Option<f64>,
    },
}

fn run(cli: Cli) -> Result<ExitCode, ExperimentError> {
    match cli.command {
        Command::Run {
            config,
            seed,
            realizations,
            out,
        } => {
            let summary = experiment::run_experiment(
                &config,
                &Overrides {
                    seed,
                    realizations,
                    out_dir: out,
                },
            )?;
            for f in &summary.files {
                println!("{}", summary.out_dir.join(f).display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate {
            tolerance,
            realizations,
            seed,
            report,
        } => {
            let settings = ValidationSettings {
                tolerance,
                realizations,
                seed,
                ..ValidationSettings::default()
            };
            let r = experiment::validate(&settings)?;
            let json = serde_json::to_string_pretty(&r).expect("report serializes");
            match report {
                Some(path) => std::fs::write(&path, json + "\n").map_err(|source| ExperimentError::Write { path, source })?,
                None => println!("{json}"),
            }
            for s in &r.scenarios {
                eprintln!(
                    "{} {:<24} max deviation {:.4} at {} dB",
                    if s.passed { "PASS" } else { "FAIL" },
                    s.scenario,
                    s.max_deviation,
                    s.worst_theta_db
                );
            }
            Ok(if r.passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Curve {
            scenario,
            theta_min,
            theta_max,
            step,
            densities,
            operator,
            alpha,
            noise,
        } => {
            let req = CurveRequest {
                densities,
                served_operator: operator,
                alpha,
                noise: noise.map_or(NoiseModel::InterferenceLimited, |power| NoiseModel::WithNoise { power }),
                ..CurveRequest::new(
                    scenario,
                    ThetaGrid {
                        min: theta_min,
                        max: theta_max,
                        step,
                    },
                )
            };
            let curve = experiment::analytic_curve(&req)?;
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            experiment::write_curve_csv(&curve, &mut lock)
                .and_then(|_| lock.flush())
                .map_err(|source| ExperimentError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(experiment::EXIT_CONFIG as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
