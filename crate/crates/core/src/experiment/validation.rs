//! Monte-Carlo vs closed-form cross-validation for two equal-density PPP
//! operators, every sharing scenario and both band modes.

use serde::Serialize;

use super::{ExperimentError, ThetaGrid};
use crate::analytic::{Analytic, Functionals, NoiseModel, OperatorSet, Sharing};
use crate::channel::BandMode;
use crate::simulator::{simulate, Scenario};

#[derive(Debug, Clone)]
pub struct ValidationSettings {
    pub tolerance: f64,
    pub realizations: usize,
    pub seed: u64,
    pub grid: ThetaGrid,
    pub densities: Vec<f64>,
}

impl Default for ValidationSettings {
    fn default() -> Self {
        Self {
            tolerance: 0.015,
            realizations: 100_000,
            seed: 1,
            grid: ThetaGrid::default(),
            densities: vec![1.0, 1.0],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub theta_db: f64,
    pub monte_carlo: f64,
    pub analytic: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub max_deviation: f64,
    pub worst_theta_db: f64,
    pub passed: bool,
    pub points: Vec<PointReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub realizations: usize,
    pub seed: u64,
    pub passed: bool,
    pub scenarios: Vec<ScenarioReport>,
}

impl ValidationReport {
    pub fn failures(&self) -> Vec<&str> {
        self.scenarios
            .iter()
            .filter(|s| !s.passed)
            .map(|s| s.scenario.as_str())
            .collect()
    }

    /// Largest deviation over all scenarios.
    pub fn max_deviation(&self) -> f64 {
        self.scenarios.iter().map(|s| s.max_deviation).fold(0.0, f64::max)
    }
}

pub fn validate(settings: &ValidationSettings) -> Result<ValidationReport, ExperimentError> {
    validate_with(&Analytic::default(), settings)
}

/// Compare Monte-Carlo curves against `model`. Simulation does not depend
/// on the functionals, so a faulty model shows up as a deviation.
pub fn validate_with<F: Functionals>(model: &Analytic<F>, settings: &ValidationSettings) -> Result<ValidationReport, ExperimentError> {
    if !(settings.tolerance.is_finite() && settings.tolerance >= 0.0) {
        return Err(ExperimentError::Argument(format!("tolerance {} must be non-negative", settings.tolerance)));
    }
    if settings.realizations == 0 {
        return Err(ExperimentError::Argument("realizations must be positive".into()));
    }
    settings.grid.check().map_err(ExperimentError::Argument)?;
    let ops = OperatorSet::new(settings.densities.clone()).map_err(|e| ExperimentError::Argument(e.to_string()))?;
    let grid = settings.grid.points();
    let mut scenarios = Vec::new();
    for band_mode in [BandMode::Flat, BandMode::Selective] {
        for sharing in Sharing::ALL {
            let name = format!("{}-{}", sharing.name(), band_mode.name());
            let scenario = Scenario::ppp(sharing, band_mode, &settings.densities);
            let mc = simulate(&scenario, settings.realizations, settings.seed)
                .map_err(|source| ExperimentError::Simulation {
                    scenario: name.clone(),
                    source,
                })?
                .coverage_curve(&grid, name.as_str());
            let an = model
                .curve(sharing, band_mode, &grid, &ops, 0, 4.0, &NoiseModel::InterferenceLimited, name.as_str())
                .map_err(|source| ExperimentError::Analytic {
                    scenario: name.clone(),
                    source,
                })?;
            let points: Vec<PointReport> = grid
                .iter()
                .zip(mc.probabilities.iter().zip(&an.probabilities))
                .map(|(&theta_db, (&m, &a))| PointReport {
                    theta_db,
                    monte_carlo: m,
                    analytic: a,
                    deviation: (m - a).abs(),
                })
                .collect();
            let worst = points
                .iter()
                .max_by(|a, b| a.deviation.total_cmp(&b.deviation))
                .expect("non-empty grid");
            scenarios.push(ScenarioReport {
                scenario: name,
                max_deviation: worst.deviation,
                worst_theta_db: worst.theta_db,
                passed: worst.deviation <= settings.tolerance,
                points,
            });
        }
    }
    Ok(ValidationReport {
        tolerance: settings.tolerance,
        realizations: settings.realizations,
        seed: settings.seed,
        passed: scenarios.iter().all(|s| s.passed),
        scenarios,
    })
}
