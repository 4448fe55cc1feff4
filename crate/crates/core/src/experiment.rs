//! Config-driven experiment runs, ad-hoc analytic curves and the
//! Monte-Carlo vs closed-form validation harness.

pub mod config;
pub mod validation;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analytic::{Analytic, AnalyticError, CoverageCurve, NoiseModel, OperatorSet, Sharing};
use crate::channel::BandMode;
use crate::csvfmt::fmt_g6;
use crate::simulator::{self, Geometry, RateStats, SimError};

pub use config::{ExperimentConfig, OutputFormat, ScenarioConfig, ThetaGrid};
pub use validation::{validate, validate_with, ValidationReport, ValidationSettings};

/// Exit status for configuration problems.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for numerical or I/O failures during a run.
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("{}:{line}:{column}: {message}", path.display())]
    Config {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("scenario {scenario:?}: {source}")]
    Simulation { scenario: String, source: SimError },
    #[error("scenario {scenario:?}: {source}")]
    Analytic { scenario: String, source: AnalyticError },
    #[error("writing {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
}

impl ExperimentError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config { .. } | ExperimentError::Read { .. } | ExperimentError::Argument(_) => EXIT_CONFIG,
            _ => EXIT_RUNTIME,
        }
    }
}

type Result<T> = std::result::Result<T, ExperimentError>;

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    /// Replaces both coverage and rate realization counts.
    pub realizations: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

/// CSV with columns `theta_db,value,std_err`.
pub fn write_curve_csv<W: Write>(curve: &CoverageCurve, mut out: W) -> io::Result<()> {
    writeln!(out, "theta_db,value,std_err")?;
    for ((t, p), e) in curve.thresholds_db.iter().zip(&curve.probabilities).zip(&curve.std_errors) {
        writeln!(out, "{},{},{}", fmt_g6(*t), fmt_g6(*p), fmt_g6(*e))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct RateRow {
    pub scenario: String,
    pub stats: RateStats,
    /// Closed-form mean, NaN where none exists.
    pub analytic_mean: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExclusionRow {
    pub scenario: String,
    pub coordination_radius: f64,
    pub excluded_fraction: f64,
    pub std_err: f64,
    /// PPP void probability `1 - exp(-λₙπR_s²)`; NaN for GPP.
    pub void_probability: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioResults {
    pub name: String,
    pub monte_carlo: Option<CoverageCurve>,
    pub analytic: Option<CoverageCurve>,
    pub resamples: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResults {
    pub seed: u64,
    pub realizations: usize,
    pub rate_realizations: usize,
    pub scenarios: Vec<ScenarioResults>,
    pub rates: Vec<RateRow>,
    pub exclusion: Vec<ExclusionRow>,
}

fn analytic_error(name: &str) -> impl Fn(AnalyticError) -> ExperimentError + '_ {
    move |source| ExperimentError::Analytic {
        scenario: name.to_string(),
        source,
    }
}

/// Compute every requested curve and statistic without touching the disk.
pub fn compute(config: &ExperimentConfig, overrides: &Overrides) -> Result<RunResults> {
    let seed = overrides.seed.unwrap_or(config.seed);
    let cov_n = overrides.realizations.unwrap_or(config.realizations);
    let rate_n = overrides.realizations.unwrap_or(config.rate_realizations);
    if cov_n == 0 {
        return Err(ExperimentError::Argument("realizations must be positive".into()));
    }
    let grid = config.theta_db.points();
    let model = Analytic::default();
    let mut results = RunResults {
        seed,
        realizations: cov_n,
        rate_realizations: rate_n,
        scenarios: Vec::new(),
        rates: Vec::new(),
        exclusion: Vec::new(),
    };
    for sc in config.scenario_configs() {
        let scenario = sc.to_scenario().map_err(ExperimentError::Argument)?;
        let name = sc.name.as_str();
        let needed = match (sc.coverage, sc.rates) {
            (true, true) => cov_n.max(rate_n),
            (true, false) => cov_n,
            (false, true) => rate_n,
            (false, false) => 0,
        };
        let (monte_carlo, resamples) = if needed > 0 {
            let out = simulator::simulate(&scenario, needed, seed).map_err(|source| ExperimentError::Simulation {
                scenario: name.to_string(),
                source,
            })?;
            // realization streams are indexed, so a prefix is a valid smaller run
            let mut head = out.clone();
            head.max_sinr.truncate(cov_n);
            let curve = sc.coverage.then(|| head.coverage_curve(&grid, name));
            if sc.rates {
                let mut rates = out.clone();
                rates.rates.truncate(rate_n);
                let analytic_mean = match (sc.has_closed_form(), scenario.operator_set()) {
                    (true, Some(ops)) => model
                        .average_rate(sc.sharing, &ops, sc.served_operator, sc.alpha, &sc.noise)
                        .map_err(analytic_error(name))?,
                    _ => f64::NAN,
                };
                results.rates.push(RateRow {
                    scenario: name.to_string(),
                    stats: rates.rate_stats(),
                    analytic_mean,
                });
            }
            if let Some((fraction, std_err)) = out.excluded_fraction() {
                let void_probability = match &scenario.geometry {
                    Geometry::Ppp { densities } => {
                        let lambda = densities[sc.served_operator];
                        1.0 - (-lambda * std::f64::consts::PI * sc.coordination_radius.powi(2)).exp()
                    }
                    Geometry::Gpp(_) => f64::NAN,
                };
                results.exclusion.push(ExclusionRow {
                    scenario: name.to_string(),
                    coordination_radius: sc.coordination_radius,
                    excluded_fraction: fraction,
                    std_err,
                    void_probability,
                });
            }
            (curve, out.resamples)
        } else {
            (None, 0)
        };
        let analytic = match (sc.wants_analytic(), scenario.operator_set()) {
            (true, Some(ops)) => Some(
                model
                    .curve(
                        sc.sharing,
                        sc.band_mode,
                        &grid,
                        &ops,
                        sc.served_operator,
                        sc.alpha,
                        &sc.noise,
                        format!("{name}-analytic"),
                    )
                    .map_err(analytic_error(name))?,
            ),
            _ => None,
        };
        results.scenarios.push(ScenarioResults {
            name: name.to_string(),
            monte_carlo,
            analytic,
            resamples,
        });
    }
    Ok(results)
}

fn write_file(path: &Path, body: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    body(&mut buf)
        .and_then(|_| fs::write(path, &buf))
        .map_err(|source| ExperimentError::Write {
            path: path.to_path_buf(),
            source,
        })
}

fn write_rates<W: Write>(rows: &[RateRow], mut out: W) -> io::Result<()> {
    writeln!(out, "scenario,mean,std_err,p5,p50,p95,n_realizations,analytic_mean")?;
    for r in rows {
        let s = &r.stats;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.scenario,
            fmt_g6(s.mean),
            fmt_g6(s.std_error),
            fmt_g6(s.p5),
            fmt_g6(s.p50),
            fmt_g6(s.p95),
            s.n_realizations,
            fmt_g6(r.analytic_mean)
        )?;
    }
    Ok(())
}

fn write_exclusion<W: Write>(rows: &[ExclusionRow], mut out: W) -> io::Result<()> {
    writeln!(out, "scenario,coordination_radius,excluded_fraction,std_err,void_probability")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.scenario,
            fmt_g6(r.coordination_radius),
            fmt_g6(r.excluded_fraction),
            fmt_g6(r.std_err),
            fmt_g6(r.void_probability)
        )?;
    }
    Ok(())
}

fn gnuplot_script(curves: &[(String, bool)]) -> String {
    let mut s = String::from(
        "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'SINR threshold (dB)'\nset ylabel 'coverage probability'\nset yrange [0:1]\nset grid\n",
    );
    let plots: Vec<String> = curves
        .iter()
        .map(|(file, analytic)| {
            let style = if *analytic { "lines dt 2" } else { "points" };
            format!("'{file}' using 1:2 with {style} title '{}'", file.trim_end_matches(".csv"))
        })
        .collect();
    s.push_str("plot ");
    s.push_str(&plots.join(", \\\n     "));
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    config: String,
    config_sha256: String,
    seed: u64,
    realizations: usize,
    rate_realizations: usize,
    version: &'static str,
    created_unix: u64,
    files: &'a [String],
    resamples: std::collections::BTreeMap<&'a str, u64>,
}

/// Summary of a completed run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub files: Vec<String>,
    pub results: RunResults,
}

/// Load, validate and run `config_path`, writing every output file.
pub fn run_experiment(config_path: &Path, overrides: &Overrides) -> Result<RunSummary> {
    let (config, text) = ExperimentConfig::load(config_path)?;
    run_loaded(&config, &text, config_path, overrides)
}

/// Run an already-parsed config; `text` is hashed into the manifest.
pub fn run_loaded(config: &ExperimentConfig, text: &str, config_path: &Path, overrides: &Overrides) -> Result<RunSummary> {
    let results = compute(config, overrides)?;
    let out_dir = overrides.out_dir.clone().unwrap_or_else(|| config.output.dir.clone());
    fs::create_dir_all(&out_dir).map_err(|source| ExperimentError::Write {
        path: out_dir.clone(),
        source,
    })?;
    let mut files = Vec::new();
    let mut plotted = Vec::new();
    for s in &results.scenarios {
        for (curve, suffix, analytic) in [(&s.monte_carlo, "", false), (&s.analytic, "-analytic", true)] {
            if let Some(c) = curve {
                let file = format!("{}{suffix}.csv", s.name);
                write_file(&out_dir.join(&file), |b| write_curve_csv(c, b))?;
                plotted.push((file.clone(), analytic));
                files.push(file);
            }
        }
    }
    if !results.rates.is_empty() {
        write_file(&out_dir.join("rates.csv"), |b| write_rates(&results.rates, b))?;
        files.push("rates.csv".into());
    }
    if !results.exclusion.is_empty() {
        write_file(&out_dir.join("exclusion.csv"), |b| write_exclusion(&results.exclusion, b))?;
        files.push("exclusion.csv".into());
    }
    for sc in config.scenario_configs().filter(|s| s.snapshot) {
        let scenario = sc.to_scenario().map_err(ExperimentError::Argument)?;
        let o = simulator::run_realization(&scenario, results.seed, 0).map_err(|source| ExperimentError::Simulation {
            scenario: sc.name.clone(),
            source,
        })?;
        let file = format!("{}-deployment.csv", sc.name);
        write_file(&out_dir.join(&file), |b| o.deployment.write_csv(b))?;
        files.push(file);
    }
    if config.output.format == OutputFormat::CsvJson {
        write_file(&out_dir.join("results.json"), |b| {
            serde_json::to_writer_pretty(&mut *b, &results).map_err(io::Error::other)?;
            b.push(b'\n');
            Ok(())
        })?;
        files.push("results.json".into());
    }
    if config.output.gnuplot && !plotted.is_empty() {
        let script = gnuplot_script(&plotted);
        write_file(&out_dir.join("plot.gp"), |b| b.write_all(script.as_bytes()))?;
        files.push("plot.gp".into());
    }
    let manifest = Manifest {
        config: config_path.display().to_string(),
        config_sha256: Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect(),
        seed: results.seed,
        realizations: results.realizations,
        rate_realizations: results.rate_realizations,
        version: env!("CARGO_PKG_VERSION"),
        created_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        files: &files,
        resamples: results.scenarios.iter().map(|s| (s.name.as_str(), s.resamples)).collect(),
    };
    write_file(&out_dir.join("manifest.json"), |b| {
        serde_json::to_writer_pretty(&mut *b, &manifest).map_err(io::Error::other)?;
        b.push(b'\n');
        Ok(())
    })?;
    Ok(RunSummary { out_dir, files, results })
}

/// Parse names such as `none`, `spectrum`, `full-selective`.
pub fn parse_scenario_name(name: &str) -> Option<(Sharing, BandMode)> {
    let (base, mode) = match name.rsplit_once('-') {
        Some((b, "flat")) => (b, BandMode::Flat),
        Some((b, "selective")) => (b, BandMode::Selective),
        _ => (name, BandMode::Flat),
    };
    let sharing = match base {
        "none" | "baseline" => Sharing::None,
        "infrastructure" | "infra" => Sharing::Infrastructure,
        "spectrum" => Sharing::Spectrum,
        "full" => Sharing::Full,
        _ => return None,
    };
    Some((sharing, mode))
}

/// Settings for an ad-hoc closed-form curve.
#[derive(Debug, Clone)]
pub struct CurveRequest {
    pub scenario: String,
    pub grid: ThetaGrid,
    pub densities: Vec<f64>,
    pub served_operator: usize,
    pub alpha: f64,
    pub noise: NoiseModel,
}

impl CurveRequest {
    pub fn new(scenario: impl Into<String>, grid: ThetaGrid) -> Self {
        Self {
            scenario: scenario.into(),
            grid,
            densities: vec![1.0, 1.0],
            served_operator: 0,
            alpha: 4.0,
            noise: NoiseModel::InterferenceLimited,
        }
    }
}

pub fn analytic_curve(req: &CurveRequest) -> Result<CoverageCurve> {
    let (sharing, mode) = parse_scenario_name(&req.scenario)
        .ok_or_else(|| ExperimentError::Argument(format!("unknown scenario {:?}", req.scenario)))?;
    req.grid.check().map_err(ExperimentError::Argument)?;
    let ops = OperatorSet::new(req.densities.clone()).map_err(|e| ExperimentError::Argument(e.to_string()))?;
    let fail = |e: AnalyticError| match e {
        AnalyticError::SpecFun(_)
        | AnalyticError::Quadrature(_)
        | AnalyticError::LossOfPrecision { .. }
        | AnalyticError::RateTruncation { .. } => ExperimentError::Analytic {
            scenario: req.scenario.clone(),
            source: e,
        },
        other => ExperimentError::Argument(other.to_string()),
    };
    Analytic::default()
        .curve(
            sharing,
            mode,
            &req.grid.points(),
            &ops,
            req.served_operator,
            req.alpha,
            &req.noise,
            req.scenario.clone(),
        )
        .map_err(fail)
}
