//! TOML experiment configuration.
//!
//! ```toml
//! seed = 7
//! realizations = 100000
//! rate_realizations = 200000
//!
//! [theta_db]
//! min = -10
//! max = 20
//! step = 1
//!
//! [output]
//! dir = "out/coverage_flat"
//! format = "csv"
//! gnuplot = true
//!
//! [[scenario]]
//! name = "spectrum-flat"
//! sharing = "spectrum"
//! band_mode = "flat"
//! densities = [1.0, 1.0]
//! rates = true
//! ```
//!
//! Optional per-scenario keys: `fading` (`{ kind = "nakagami", m = 5 }`),
//! `gpp` (replaces `densities`), `alpha`, `coordination_radius`, `noise`
//! (`{ mode = "with_noise", power = 0.1 }`), `served_operator`,
//! `bandwidth`, `window_radius`, `coverage`, `rates`, `analytic`,
//! `snapshot`.

use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toml::Spanned;

use super::ExperimentError;
use crate::analytic::{theta_grid_db, NoiseModel, Sharing};
use crate::channel::{BandMode, FadingKind, FadingModel};
use crate::pointprocess::GppParams;
use crate::simulator::{Geometry, Scenario};

/// Upper bound on threshold grid points.
pub const MAX_GRID_POINTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for ThetaGrid {
    fn default() -> Self {
        Self {
            min: -10.0,
            max: 20.0,
            step: 1.0,
        }
    }
}

impl ThetaGrid {
    pub fn check(&self) -> Result<(), String> {
        let ThetaGrid { min, max, step } = *self;
        if !(min.is_finite() && max.is_finite() && step.is_finite()) {
            return Err("theta grid bounds must be finite".into());
        }
        if step <= 0.0 {
            return Err(format!("theta step {step} must be positive"));
        }
        if max < min {
            return Err(format!("theta max {max} is below min {min}"));
        }
        if (max - min) / step > MAX_GRID_POINTS as f64 {
            return Err(format!("theta grid exceeds {MAX_GRID_POINTS} points"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        theta_grid_db(self.min, self.max, self.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    /// One CSV per curve plus `rates.csv`.
    #[default]
    Csv,
    /// The CSV files plus a combined `results.json`.
    CsvJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
    /// Also write a gnuplot script for the coverage curves.
    #[serde(default)]
    pub gnuplot: bool,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_out_dir(),
            format: OutputFormat::Csv,
            gnuplot: false,
        }
    }
}

fn yes() -> bool {
    true
}

fn four() -> f64 {
    4.0
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub sharing: Sharing,
    #[serde(default)]
    pub band_mode: BandMode,
    #[serde(default)]
    pub densities: Option<Vec<f64>>,
    #[serde(default)]
    pub gpp: Option<GppParams>,
    #[serde(default)]
    pub fading: FadingKind,
    #[serde(default = "four")]
    pub alpha: f64,
    #[serde(default)]
    pub coordination_radius: f64,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default)]
    pub served_operator: usize,
    #[serde(default = "one")]
    pub bandwidth: f64,
    #[serde(default)]
    pub window_radius: Option<f64>,
    /// Monte-Carlo coverage curve.
    #[serde(default = "yes")]
    pub coverage: bool,
    /// Monte-Carlo rate statistics.
    #[serde(default)]
    pub rates: bool,
    /// Closed-form overlay; `None` adds it whenever one exists.
    #[serde(default)]
    pub analytic: Option<bool>,
    /// Export the deployment of realization 0.
    #[serde(default)]
    pub snapshot: bool,
}

impl ScenarioConfig {
    pub fn to_scenario(&self) -> Result<Scenario, String> {
        let geometry = match (&self.densities, &self.gpp) {
            (Some(d), None) => Geometry::Ppp { densities: d.clone() },
            (None, Some(g)) => Geometry::Gpp(*g),
            (Some(_), Some(_)) => return Err("give either `densities` or `gpp`, not both".into()),
            (None, None) => return Err("one of `densities` or `gpp` is required".into()),
        };
        let scenario = Scenario {
            sharing: self.sharing,
            fading: FadingModel {
                kind: self.fading,
                band_mode: self.band_mode,
            },
            geometry,
            coordination_radius: self.coordination_radius,
            noise: self.noise,
            served_operator: self.served_operator,
            alpha: self.alpha,
            bandwidth: self.bandwidth,
            window: self.window_radius,
        };
        scenario.validate().map_err(|e| e.to_string())?;
        Ok(scenario)
    }

    /// Whether a closed form exists for this scenario.
    pub fn has_closed_form(&self) -> bool {
        self.gpp.is_none() && matches!(self.fading, FadingKind::Rayleigh) && self.coordination_radius == 0.0
    }

    pub fn wants_analytic(&self) -> bool {
        self.analytic.unwrap_or_else(|| self.has_closed_form())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    #[serde(default = "default_rate_realizations")]
    pub rate_realizations: usize,
    #[serde(default)]
    pub theta_db: ThetaGrid,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, rename = "scenario")]
    pub scenarios: Vec<Spanned<ScenarioConfig>>,
}

fn default_seed() -> u64 {
    1
}

fn default_realizations() -> usize {
    100_000
}

fn default_rate_realizations() -> usize {
    200_000
}

/// 1-based line and column of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(offset, |i| offset - i - 1) + 1;
    (line, col)
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<(Self, String), ExperimentError> {
        let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let config = Self::parse(&text, path)?;
        Ok((config, text))
    }

    /// Parse and validate; `origin` only labels error messages.
    pub fn parse(text: &str, origin: &Path) -> Result<Self, ExperimentError> {
        let err = |span: Option<Range<usize>>, message: String| {
            let (line, column) = line_col(text, span.map_or(0, |s| s.start));
            ExperimentError::Config {
                path: origin.to_path_buf(),
                line,
                column,
                message,
            }
        };
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| err(e.span(), e.message().trim().to_string()))?;
        if config.scenarios.is_empty() {
            return Err(err(None, "no [[scenario]] tables".into()));
        }
        if config.realizations == 0 || config.rate_realizations == 0 {
            return Err(err(None, "realization counts must be positive".into()));
        }
        config.theta_db.check().map_err(|m| err(None, m))?;
        let mut seen = std::collections::HashSet::new();
        for s in &config.scenarios {
            let span = Some(s.span());
            let sc = s.get_ref();
            let valid_name = !sc.name.is_empty()
                && sc.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
            if !valid_name {
                return Err(err(span, format!("scenario name {:?} must be non-empty [A-Za-z0-9_-]", sc.name)));
            }
            if !seen.insert(sc.name.clone()) {
                return Err(err(span, format!("duplicate scenario name {:?}", sc.name)));
            }
            sc.to_scenario().map_err(|m| err(span.clone(), format!("scenario {:?}: {m}", sc.name)))?;
            if sc.analytic == Some(true) && !sc.has_closed_form() {
                return Err(err(
                    span,
                    format!(
                        "scenario {:?}: no closed form for GPP, Nakagami or coordinated deployments",
                        sc.name
                    ),
                ));
            }
            if !(sc.coverage || sc.rates || sc.wants_analytic() || sc.snapshot) {
                return Err(err(span, format!("scenario {:?} requests no output", sc.name)));
            }
        }
        Ok(config)
    }

    pub fn scenario_configs(&self) -> impl Iterator<Item = &ScenarioConfig> {
        self.scenarios.iter().map(Spanned::get_ref)
    }
}
