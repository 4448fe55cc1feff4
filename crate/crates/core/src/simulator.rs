//! Monte-Carlo estimation of coverage and rate for every sharing scenario.
//!
//! Each realization samples a deployment in a disc window, applies
//! exclusion zones, associates the user at the origin, draws fades and
//! computes per-band SINR. Realization `i` draws from its own ChaCha8
//! stream derived from `(master_seed, i)`, so results do not depend on the
//! number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{CoverageCurve, NoiseModel, OperatorSet, Sharing};
use crate::channel::{BandMode, ChannelError, FadeMatrix, FadingModel, PathLoss};
use crate::pointprocess::{
    self, nearest_point, Deployment, GppParams, PointProcessError, Selector, Window, MAX_BANDS,
};

/// Consecutive empty deployments tolerated before a realization fails.
pub const MAX_RESAMPLES: u32 = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error(transparent)]
    PointProcess(#[from] PointProcessError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("realization {index}: no serving transmitter after {resamples} resamples")]
    Degenerate { index: u64, resamples: u32 },
    #[error("at least one realization is required")]
    NoRealizations,
}

pub type Result<T> = std::result::Result<T, SimError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    /// Independent PPPs, one intensity per operator.
    Ppp { densities: Vec<f64> },
    /// Two operators placed by a Gauss–Poisson process.
    Gpp(GppParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub sharing: Sharing,
    pub fading: FadingModel,
    pub geometry: Geometry,
    /// Exclusion radius `R_s`; zero means uncoordinated.
    pub coordination_radius: f64,
    pub noise: NoiseModel,
    pub served_operator: usize,
    pub alpha: f64,
    /// Bandwidth per operator band.
    pub bandwidth: f64,
    /// Window radius; `None` applies the default sizing rule.
    pub window: Option<f64>,
}

impl Scenario {
    /// Rayleigh fading, `α = 4`, no noise, no coordination, unit bandwidth.
    pub fn ppp(sharing: Sharing, band_mode: BandMode, densities: &[f64]) -> Self {
        Self {
            sharing,
            fading: FadingModel::rayleigh(band_mode),
            geometry: Geometry::Ppp {
                densities: densities.to_vec(),
            },
            coordination_radius: 0.0,
            noise: NoiseModel::InterferenceLimited,
            served_operator: 0,
            alpha: 4.0,
            bandwidth: 1.0,
            window: None,
        }
    }

    pub fn gpp(sharing: Sharing, band_mode: BandMode, params: GppParams) -> Self {
        Self {
            geometry: Geometry::Gpp(params),
            ..Self::ppp(sharing, band_mode, &[])
        }
    }

    pub fn with_fading(mut self, fading: FadingModel) -> Self {
        self.fading = fading;
        self
    }

    pub fn with_coordination_radius(mut self, radius: f64) -> Self {
        self.coordination_radius = radius;
        self
    }

    pub fn with_noise(mut self, noise: NoiseModel) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_served_operator(mut self, index: usize) -> Self {
        self.served_operator = index;
        self
    }

    pub fn with_window(mut self, radius: f64) -> Self {
        self.window = Some(radius);
        self
    }

    pub fn band_mode(&self) -> BandMode {
        self.fading.band_mode
    }

    pub fn n_operators(&self) -> usize {
        match &self.geometry {
            Geometry::Ppp { densities } => densities.len(),
            Geometry::Gpp(_) => 2,
        }
    }

    /// Operator set for the analytic counterpart, if the geometry has one.
    pub fn operator_set(&self) -> Option<OperatorSet> {
        match &self.geometry {
            Geometry::Ppp { densities } => OperatorSet::with_bandwidth(densities.clone(), self.bandwidth).ok(),
            Geometry::Gpp(_) => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SimError::InvalidScenario(m));
        match &self.geometry {
            Geometry::Ppp { densities } => {
                if densities.is_empty() {
                    return bad("at least one operator density is required".into());
                }
                if densities.len() > MAX_BANDS {
                    return bad(format!("at most {MAX_BANDS} operators, got {}", densities.len()));
                }
                if let Some(d) = densities.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
                    return bad(format!("density {d} must be positive"));
                }
            }
            Geometry::Gpp(p) => p.validate()?,
        }
        if self.served_operator >= self.n_operators() {
            return bad(format!(
                "served operator {} out of range for {} operators",
                self.served_operator,
                self.n_operators()
            ));
        }
        if !(self.coordination_radius.is_finite() && self.coordination_radius >= 0.0) {
            return bad(format!("coordination radius {} must be non-negative", self.coordination_radius));
        }
        if !(self.alpha.is_finite() && self.alpha > 2.0) {
            return bad(format!("pathloss exponent {} must exceed 2", self.alpha));
        }
        if !(self.bandwidth.is_finite() && self.bandwidth > 0.0) {
            return bad(format!("bandwidth {} must be positive", self.bandwidth));
        }
        if self.noise.validate().is_err() {
            return bad(format!("noise power {} must be non-negative", self.noise.power()));
        }
        if let Some(r) = self.window {
            Window::new(r)?;
        }
        self.fading.validate()?;
        Ok(())
    }

    /// Window from the explicit radius or the sizing rule: 500 expected
    /// points for the sparsest operator, or per cluster centre for GPP.
    pub fn window(&self) -> Result<Window> {
        if let Some(r) = self.window {
            return Ok(Window::new(r)?);
        }
        let density = match &self.geometry {
            Geometry::Ppp { densities } => densities.iter().copied().fold(f64::INFINITY, f64::min),
            Geometry::Gpp(p) => p.cluster_intensity,
        };
        Ok(Window::for_density(density)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationResult {
    /// Linear SINR per band; zero on bands the serving transmitter does not use.
    pub sinr: Vec<f64>,
    pub serving_operator: usize,
    pub serving_distance: f64,
}

impl RealizationResult {
    pub fn max_sinr(&self) -> f64 {
        self.sinr.iter().copied().fold(0.0, f64::max)
    }

    /// `b Σₖ log₂(1 + SINRₖ)` over bands in use.
    pub fn rate(&self, bandwidth: f64) -> f64 {
        bandwidth * self.sinr.iter().filter(|&&s| s > 0.0).map(|s| s.ln_1p()).sum::<f64>() / std::f64::consts::LN_2
    }
}

/// Per-band SINR at the origin for a given deployment and fades.
///
/// Links are numbered operator by operator in deployment order. `fades` has
/// one column per band, or a single column reused on every band.
pub fn evaluate_deployment(scenario: &Scenario, deployment: &Deployment, fades: &FadeMatrix) -> Result<RealizationResult> {
    let n_bands = deployment.n_operators();
    let pathloss = PathLoss::new(scenario.alpha)?;
    let selector = match scenario.sharing {
        Sharing::None | Sharing::Spectrum => Selector::Operator(scenario.served_operator),
        Sharing::Infrastructure | Sharing::Full => Selector::All,
    };
    let serving = nearest_point(deployment, pointprocess::Point::ORIGIN, selector)?;

    let mut offsets = Vec::with_capacity(n_bands);
    let mut gains = Vec::with_capacity(deployment.total_points());
    for op in 0..n_bands {
        offsets.push(gains.len());
        gains.extend(deployment.points(op).iter().map(|p| pathloss.gain_squared(p.norm_sq())));
    }
    let serving_link = offsets[serving.operator] + serving.index;
    let fade = |link: usize, band: usize| {
        if fades.n_bands() == 1 {
            fades.get(link, 0)
        } else {
            fades.get(link, band)
        }
    };

    let mut sinr = vec![0.0; n_bands];
    match scenario.sharing {
        Sharing::None | Sharing::Infrastructure => {
            // own band only, interference from the same operator
            let band = serving.operator;
            let start = offsets[band];
            let interference: f64 = (start..start + deployment.points(band).len())
                .filter(|&l| l != serving_link)
                .map(|l| fade(l, band) * gains[l])
                .sum();
            let signal = fade(serving_link, band) * gains[serving_link];
            sinr[band] = signal / (interference + scenario.noise.power());
        }
        Sharing::Spectrum | Sharing::Full => {
            let mask = deployment.mask(serving.operator, serving.index);
            let used: Vec<usize> = (0..n_bands).filter(|&k| mask.allows(k)).collect();
            let noise = used.len() as f64 * scenario.noise.power();
            let masks: Vec<_> = (0..n_bands).flat_map(|op| deployment.masks(op).iter().copied()).collect();
            // with one shared fade column and no exclusions every band is identical
            let identical = fades.n_bands() == 1 && scenario.coordination_radius == 0.0;
            for (i, &k) in used.iter().enumerate() {
                if identical && i > 0 {
                    sinr[k] = sinr[used[0]];
                    continue;
                }
                let interference: f64 = (0..gains.len())
                    .filter(|&l| l != serving_link && masks[l].allows(k))
                    .map(|l| fade(l, k) * gains[l])
                    .sum();
                let signal = fade(serving_link, k) * gains[serving_link];
                sinr[k] = signal / (interference + noise);
            }
        }
    }
    Ok(RealizationResult {
        sinr,
        serving_operator: serving.operator,
        serving_distance: serving.distance,
    })
}

/// Stream `index` of the master seed.
pub fn realization_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Draw a deployment for `scenario` (exclusion zones not yet applied).
pub fn sample_deployment<R: rand::Rng + ?Sized>(scenario: &Scenario, window: &Window, rng: &mut R) -> Result<Deployment> {
    let points = match &scenario.geometry {
        Geometry::Ppp { densities } => densities
            .iter()
            .map(|&d| pointprocess::sample_ppp(d, window, rng))
            .collect::<std::result::Result<Vec<_>, _>>()?,
        Geometry::Gpp(p) => pointprocess::sample_gpp(p, window, rng)?.into(),
    };
    Ok(Deployment::new(points)?)
}

fn has_server(scenario: &Scenario, deployment: &Deployment) -> bool {
    match scenario.sharing {
        Sharing::None | Sharing::Spectrum => !deployment.points(scenario.served_operator).is_empty(),
        Sharing::Infrastructure | Sharing::Full => deployment.total_points() > 0,
    }
}

/// Everything a single realization contributes to the estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationOutcome {
    pub result: RealizationResult,
    pub resamples: u32,
    pub deployment: Deployment,
}

/// One full realization on stream `index`. Empty deployments are redrawn
/// from the same stream.
pub fn run_realization(scenario: &Scenario, master_seed: u64, index: u64) -> Result<RealizationOutcome> {
    let window = scenario.window()?;
    let sampler = scenario.fading.sampler()?;
    let mut rng = realization_rng(master_seed, index);
    run_on_stream(scenario, &window, &sampler, &mut rng, index)
}

fn run_on_stream(
    scenario: &Scenario,
    window: &Window,
    sampler: &crate::channel::FadeSampler,
    rng: &mut ChaCha8Rng,
    index: u64,
) -> Result<RealizationOutcome> {
    let mut resamples = 0;
    let mut deployment = loop {
        let d = sample_deployment(scenario, window, rng)?;
        if has_server(scenario, &d) {
            break d;
        }
        resamples += 1;
        if resamples >= MAX_RESAMPLES {
            return Err(SimError::Degenerate { index, resamples });
        }
    };
    if scenario.coordination_radius > 0.0 {
        deployment.apply_exclusion_zones(scenario.coordination_radius)?;
    }
    let fade_bands = match (scenario.sharing, scenario.band_mode()) {
        (Sharing::Spectrum | Sharing::Full, BandMode::Selective) => deployment.n_operators(),
        _ => 1,
    };
    let fades = sampler.sample(deployment.total_points(), fade_bands, rng);
    let result = evaluate_deployment(scenario, &deployment, &fades)?;
    Ok(RealizationOutcome {
        result,
        resamples,
        deployment,
    })
}

/// Per-realization samples from [`simulate`], in realization order.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOutput {
    pub max_sinr: Vec<f64>,
    pub rates: Vec<f64>,
    pub resamples: u64,
    /// Border-corrected `(excluded, total)` counts of other-operator
    /// transmitters barred from the served operator's band, per realization.
    /// Empty without coordination.
    pub exclusion: Vec<(u32, u32)>,
}

impl SimulationOutput {
    pub fn len(&self) -> usize {
        self.max_sinr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.max_sinr.is_empty()
    }

    pub fn coverage_curve(&self, thresholds_db: &[f64], label: impl Into<String>) -> CoverageCurve {
        let mut sorted = self.max_sinr.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut probabilities = Vec::with_capacity(thresholds_db.len());
        let mut std_errors = Vec::with_capacity(thresholds_db.len());
        for &t in thresholds_db {
            let theta = crate::analytic::db_to_linear(t);
            let above = sorted.len() - sorted.partition_point(|&s| s <= theta);
            let p = above as f64 / n;
            probabilities.push(p);
            std_errors.push((p * (1.0 - p) / n).sqrt());
        }
        CoverageCurve {
            label: label.into(),
            thresholds_db: thresholds_db.to_vec(),
            probabilities,
            std_errors,
        }
    }

    pub fn rate_stats(&self) -> RateStats {
        RateStats::from_samples(&self.rates)
    }

    /// Ratio estimate of the excluded fraction with its standard error,
    /// treating realizations as independent clusters.
    pub fn excluded_fraction(&self) -> Option<(f64, f64)> {
        let total: f64 = self.exclusion.iter().map(|&(_, t)| f64::from(t)).sum();
        if total == 0.0 {
            return None;
        }
        let excluded: f64 = self.exclusion.iter().map(|&(e, _)| f64::from(e)).sum();
        let ratio = excluded / total;
        let n = self.exclusion.len() as f64;
        if n < 2.0 {
            return Some((ratio, f64::NAN));
        }
        let mean_total = total / n;
        let ss: f64 = self
            .exclusion
            .iter()
            .map(|&(e, t)| (f64::from(e) - ratio * f64::from(t)).powi(2))
            .sum();
        Some((ratio, (ss / (n * (n - 1.0))).sqrt() / mean_total))
    }
}

/// Run `n` realizations in parallel.
pub fn simulate(scenario: &Scenario, n: usize, master_seed: u64) -> Result<SimulationOutput> {
    scenario.validate()?;
    if n == 0 {
        return Err(SimError::NoRealizations);
    }
    let window = scenario.window()?;
    let sampler = scenario.fading.sampler()?;
    let coordinated = scenario.coordination_radius > 0.0;
    let band = scenario.served_operator;
    let per: Vec<Result<(f64, f64, u32, (u32, u32))>> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = realization_rng(master_seed, i);
            let o = run_on_stream(scenario, &window, &sampler, &mut rng, i)?;
            let excl = if coordinated {
                let (e, t) = o.deployment.excluded_count(band, &window, scenario.coordination_radius);
                (e as u32, t as u32)
            } else {
                (0, 0)
            };
            Ok((o.result.max_sinr(), o.result.rate(scenario.bandwidth), o.resamples, excl))
        })
        .collect();
    let mut out = SimulationOutput {
        max_sinr: Vec::with_capacity(n),
        rates: Vec::with_capacity(n),
        resamples: 0,
        exclusion: Vec::new(),
    };
    for r in per {
        let (s, rate, res, excl) = r?;
        out.max_sinr.push(s);
        out.rates.push(rate);
        out.resamples += u64::from(res);
        if coordinated {
            out.exclusion.push(excl);
        }
    }
    Ok(out)
}

pub fn estimate_coverage(scenario: &Scenario, thresholds_db: &[f64], n: usize, master_seed: u64) -> Result<CoverageCurve> {
    let label = format!("{}-{}-mc", scenario.sharing.name(), scenario.band_mode().name());
    Ok(simulate(scenario, n, master_seed)?.coverage_curve(thresholds_db, label))
}

pub fn estimate_rate_stats(scenario: &Scenario, n: usize, master_seed: u64) -> Result<RateStats> {
    Ok(simulate(scenario, n, master_seed)?.rate_stats())
}

/// Rate summary. Percentiles interpolate linearly between order statistics
/// at rank `(n-1)q` (Hyndman–Fan type 7).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateStats {
    pub mean: f64,
    pub p5: f64,
    pub p50: f64,
    pub p95: f64,
    pub n_realizations: usize,
    pub std_error: f64,
}

impl RateStats {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            mean,
            p5: quantile_sorted(&sorted, 0.05),
            p50: quantile_sorted(&sorted, 0.5),
            p95: quantile_sorted(&sorted, 0.95),
            n_realizations: n,
            std_error: (var / n as f64).sqrt(),
        }
    }

    pub fn mean_to_median(&self) -> f64 {
        self.mean / self.p50
    }
}

/// Type-7 quantile of ascending `sorted`; NaN when empty.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        n => {
            let h = (n - 1) as f64 * q.clamp(0.0, 1.0);
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(n - 1);
            sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
        }
    }
}
