//! Closed-form and single-integral coverage probability and average rate for
//! every sharing scenario over independent PPP deployments.
//!
//! Every coverage expression has the shape
//!
//! ```text
//! p(θ) = Σ_t  w_t · π λ_t ∫₀^∞ exp(-θ v^{α/2} m_t W) · exp(-π v c_t) dv
//! ```
//!
//! (the integration variable is the squared serving distance). A scenario is
//! therefore described by a list of [`ExpTerm`]s; without noise the integral
//! is `λ_t / c_t` and the coverage is a finite sum, with noise it is
//! evaluated by adaptive quadrature on `[0, V]` where `exp(-π c V) = 1e-12`.
//!
//! Frequency-selective scenarios expand the "covered in at least one band"
//! event with inclusion–exclusion, so their term weights alternate in sign.
//! These sums are accumulated with compensated summation and the number of
//! operators is capped (default 8).
//!
//! Noise scaling: a transmitter spreading its power over `η` bands sees an
//! effective per-band noise `ηW`. Spectrum and full sharing without
//! coordination use all `|𝒩|` bands, so flat fading uses `|𝒩|W` and the
//! `k`-th inclusion–exclusion term of selective fading uses `k|𝒩|W`.

use std::cell::RefCell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::BandMode;
use crate::quad::{self, QuadConfig, QuadratureError};
use crate::specfun::{self, SpecFunError};

pub mod closed_form;

/// Default cap on `|𝒩|` for the alternating binomial sums.
pub const DEFAULT_SELECTIVE_CAP: usize = 8;

/// Largest tolerated rounding residual of an alternating sum.
pub const PRECISION_LIMIT: f64 = 1e-6;

// exp(-π c V) = 1e-12 at the upper integration limit
const ENVELOPE_LOG: f64 = 27.631_021_115_928_547;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("invalid operator set: {0}")]
    InvalidOperators(String),
    #[error("operator index {index} out of range for {operators} operators")]
    OperatorIndex { index: usize, operators: usize },
    #[error("frequency-selective closed forms are limited to {cap} operators (got {operators}); use the Monte-Carlo path")]
    TooManyOperators { operators: usize, cap: usize },
    #[error("alternating sum lost precision: residual {residual:e} exceeds {limit:e}")]
    LossOfPrecision { residual: f64, limit: f64 },
    #[error("invalid threshold {0}")]
    InvalidTheta(f64),
    #[error("invalid pathloss exponent {0} (must exceed 2)")]
    InvalidAlpha(f64),
    #[error("invalid noise power {0}")]
    InvalidNoise(f64),
    #[error("rate integral not converged by t = {span} (integrand {integrand:e}, total {total:e})")]
    RateTruncation {
        span: f64,
        integrand: f64,
        total: f64,
    },
}

pub type Result<T> = std::result::Result<T, AnalyticError>;

/// Resource sharing scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sharing {
    /// Each operator on its own infrastructure and band.
    None,
    /// Pooled infrastructure, each transmitter keeps its own band.
    Infrastructure,
    /// Pooled bands, users stay on their operator's infrastructure.
    Spectrum,
    /// Both pooled.
    Full,
}

impl Sharing {
    pub const ALL: [Sharing; 4] = [
        Sharing::None,
        Sharing::Infrastructure,
        Sharing::Spectrum,
        Sharing::Full,
    ];

    pub fn shares_infrastructure(self) -> bool {
        matches!(self, Sharing::Infrastructure | Sharing::Full)
    }

    pub fn shares_spectrum(self) -> bool {
        matches!(self, Sharing::Spectrum | Sharing::Full)
    }

    pub fn name(self) -> &'static str {
        match self {
            Sharing::None => "none",
            Sharing::Infrastructure => "infrastructure",
            Sharing::Spectrum => "spectrum",
            Sharing::Full => "full",
        }
    }
}

/// Transmitter densities of the sharing operators and the per-band bandwidth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSet {
    densities: Vec<f64>,
    bandwidth: f64,
}

impl OperatorSet {
    pub fn new(densities: Vec<f64>) -> Result<Self> {
        Self::with_bandwidth(densities, 1.0)
    }

    pub fn with_bandwidth(densities: Vec<f64>, bandwidth: f64) -> Result<Self> {
        if densities.is_empty() {
            return Err(AnalyticError::InvalidOperators(
                "at least one operator is required".into(),
            ));
        }
        if let Some(d) = densities.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(AnalyticError::InvalidOperators(format!(
                "densities must be positive and finite, got {d}"
            )));
        }
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(AnalyticError::InvalidOperators(format!(
                "bandwidth must be positive, got {bandwidth}"
            )));
        }
        Ok(Self {
            densities,
            bandwidth,
        })
    }

    /// `count` operators of identical density.
    pub fn equal(count: usize, density: f64) -> Result<Self> {
        Self::new(vec![density; count])
    }

    pub fn len(&self) -> usize {
        self.densities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.densities.is_empty()
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn density(&self, index: usize) -> f64 {
        self.densities[index]
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn total_density(&self) -> f64 {
        self.densities.iter().sum()
    }

    /// Sum of the densities of every operator except `index`.
    pub fn other_density(&self, index: usize) -> f64 {
        self.densities
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != index)
            .map(|(_, d)| d)
            .sum()
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(AnalyticError::OperatorIndex {
                index,
                operators: self.len(),
            })
        }
    }
}

/// Receiver noise. Interference-limited operation ignores any noise power.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum NoiseModel {
    #[default]
    InterferenceLimited,
    WithNoise { power: f64 },
}

impl NoiseModel {
    pub fn power(&self) -> f64 {
        match *self {
            NoiseModel::InterferenceLimited => 0.0,
            NoiseModel::WithNoise { power } => power,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let w = self.power();
        if w.is_finite() && w >= 0.0 {
            Ok(())
        } else {
            Err(AnalyticError::InvalidNoise(w))
        }
    }
}

/// Probability that the nearest transmitter overall belongs to `index`.
pub fn association_probability(ops: &OperatorSet, index: usize) -> Result<f64> {
    ops.check_index(index)?;
    Ok(ops.density(index) / ops.total_density())
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Inclusive grid `min, min+step, ..., max` (within half a step).
pub fn theta_grid_db(min: f64, max: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && max >= min, "bad grid [{min}, {max}] / {step}");
    let n = ((max - min) / step + 0.5).floor() as usize;
    (0..=n).map(|i| min + i as f64 * step).collect()
}

/// Coverage probability sampled on a threshold grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageCurve {
    pub label: String,
    pub thresholds_db: Vec<f64>,
    pub probabilities: Vec<f64>,
    /// Estimator standard error per point; zero for closed forms.
    pub std_errors: Vec<f64>,
}

impl CoverageCurve {
    pub fn len(&self) -> usize {
        self.thresholds_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds_db.is_empty()
    }

    /// Values lie in [0, 1] and never increase with the threshold.
    pub fn is_valid_ccdf(&self) -> bool {
        let in_range = self
            .probabilities
            .iter()
            .all(|p| (0.0..=1.0 + 1e-12).contains(p));
        let monotone = self
            .probabilities
            .windows(2)
            .all(|w| w[1] <= w[0] + 1e-12);
        in_range && monotone
    }

    /// Largest pointwise absolute difference to `other` on the same grid.
    pub fn max_abs_deviation(&self, other: &CoverageCurve) -> f64 {
        assert_eq!(self.len(), other.len(), "curves on different grids");
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Source of the interference functionals. The analytic model is generic over
/// it so alternative (or deliberately broken) implementations can be plugged
/// into the validation harness.
pub trait Functionals: Sync {
    fn zeta(&self, theta: f64, alpha: f64, order: u32) -> Result<f64>;
    fn zeta0(&self, theta: f64, alpha: f64, order: u32) -> Result<f64>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ExactFunctionals;

impl Functionals for ExactFunctionals {
    fn zeta(&self, theta: f64, alpha: f64, order: u32) -> Result<f64> {
        Ok(specfun::zeta_l(theta, alpha, order)?)
    }

    fn zeta0(&self, theta: f64, alpha: f64, order: u32) -> Result<f64> {
        Ok(specfun::zeta0_l(theta, alpha, order)?)
    }
}

/// How the per-term integrals are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Exact finite sum without noise, quadrature otherwise.
    #[default]
    Auto,
    /// Always integrate numerically.
    Integral,
}

/// Truncation rule for `∫₀^∞ p(2^{ρ/B} - 1) dρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateIntegration {
    /// Stop once the integrand falls below this fraction of the running total.
    pub cutoff: f64,
    /// Hard limit on `ρ/B`.
    pub max_span: f64,
}

impl Default for RateIntegration {
    fn default() -> Self {
        Self {
            cutoff: 1e-8,
            max_span: 1000.0,
        }
    }
}

/// One `w · πλ ∫ exp(-θ v^{α/2} m W - π c v) dv` term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub weight: f64,
    pub serving_density: f64,
    pub decay: f64,
    pub noise_multiplier: f64,
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Neumaier-compensated sum that also tracks `Σ|x|` for a rounding bound.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
    magnitude: f64,
    count: usize,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
        self.magnitude += x.abs();
        self.count += 1;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    fn residual(&self) -> f64 {
        f64::EPSILON * self.magnitude * self.count.max(1) as f64
    }
}

/// Analytic coverage/rate model.
#[derive(Debug, Clone)]
pub struct Analytic<F = ExactFunctionals> {
    pub functionals: F,
    pub quad: QuadConfig,
    pub rate: RateIntegration,
    pub selective_cap: usize,
}

impl Default for Analytic<ExactFunctionals> {
    fn default() -> Self {
        Self::with_functionals(ExactFunctionals)
    }
}

impl Analytic<ExactFunctionals> {
    pub fn new() -> Self {
        Self::default()
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta >= 0.0 {
        Ok(())
    } else {
        Err(AnalyticError::InvalidTheta(theta))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 2.0 {
        Ok(())
    } else {
        Err(AnalyticError::InvalidAlpha(alpha))
    }
}

impl<F: Functionals> Analytic<F> {
    pub fn with_functionals(functionals: F) -> Self {
        Self {
            functionals,
            quad: QuadConfig {
                abs_tol: 1e-14,
                rel_tol: 1e-12,
                max_intervals: 500,
            },
            rate: RateIntegration::default(),
            selective_cap: DEFAULT_SELECTIVE_CAP,
        }
    }

    // Σ_{l=1}^{k} C(k,l)(-1)^{l+1} g(l)
    fn diversity_sum(&self, k: usize, g: impl Fn(u32) -> Result<f64>) -> Result<f64> {
        let mut acc = CompensatedSum::default();
        for l in 1..=k {
            let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
            acc.add(sign * binomial(k, l) * g(l as u32)?);
        }
        if acc.residual() > PRECISION_LIMIT {
            return Err(AnalyticError::LossOfPrecision {
                residual: acc.residual(),
                limit: PRECISION_LIMIT,
            });
        }
        Ok(acc.value())
    }

    fn check_selective(&self, ops: &OperatorSet) -> Result<()> {
        if ops.len() > self.selective_cap {
            Err(AnalyticError::TooManyOperators {
                operators: ops.len(),
                cap: self.selective_cap,
            })
        } else {
            Ok(())
        }
    }

    /// Term decomposition of the coverage of a user of operator `index`.
    pub fn terms(
        &self,
        sharing: Sharing,
        band_mode: BandMode,
        theta: f64,
        ops: &OperatorSet,
        index: usize,
        alpha: f64,
    ) -> Result<Vec<ExpTerm>> {
        check_theta(theta)?;
        check_alpha(alpha)?;
        ops.check_index(index)?;
        let f = &self.functionals;
        let n_ops = ops.len() as f64;
        let own = ops.density(index);
        let others = ops.other_density(index);
        let total = ops.total_density();
        let single = |serving_density, decay, noise_multiplier| {
            vec![ExpTerm {
                weight: 1.0,
                serving_density,
                decay,
                noise_multiplier,
            }]
        };
        let terms = match (sharing, band_mode) {
            (Sharing::None, _) => {
                let z = f.zeta(theta, alpha, 1)?;
                single(own, own * (1.0 + z), 1.0)
            }
            (Sharing::Infrastructure, _) => {
                let z = f.zeta(theta, alpha, 1)?;
                ops.densities()
                    .iter()
                    .map(|&li| ExpTerm {
                        weight: 1.0,
                        serving_density: li,
                        decay: total + li * z,
                        noise_multiplier: 1.0,
                    })
                    .collect()
            }
            (Sharing::Spectrum, BandMode::Flat) => {
                let z = f.zeta(theta, alpha, 1)?;
                let z0 = if others > 0.0 {
                    f.zeta0(theta, alpha, 1)?
                } else {
                    0.0
                };
                single(own, (1.0 + z) * own + z0 * others, n_ops)
            }
            (Sharing::Full, BandMode::Flat) => {
                let z = f.zeta(theta, alpha, 1)?;
                single(total, (1.0 + z) * total, n_ops)
            }
            (Sharing::Spectrum, BandMode::Selective) => {
                self.check_selective(ops)?;
                let n = ops.len();
                let mut out = Vec::with_capacity(n);
                for k in 1..=n {
                    let s = self.diversity_sum(k, |l| f.zeta(theta, alpha, l))?;
                    let s0 = if others > 0.0 {
                        self.diversity_sum(k, |l| f.zeta0(theta, alpha, l))?
                    } else {
                        0.0
                    };
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    out.push(ExpTerm {
                        weight: sign * binomial(n, k),
                        serving_density: own,
                        decay: own * (1.0 + s) + others * s0,
                        noise_multiplier: (k * n) as f64,
                    });
                }
                out
            }
            (Sharing::Full, BandMode::Selective) => {
                self.check_selective(ops)?;
                let n = ops.len();
                let mut out = Vec::with_capacity(n);
                for k in 1..=n {
                    let s = self.diversity_sum(k, |l| f.zeta(theta, alpha, l))?;
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    out.push(ExpTerm {
                        weight: sign * binomial(n, k),
                        serving_density: total,
                        decay: total * (1.0 + s),
                        noise_multiplier: (k * n) as f64,
                    });
                }
                out
            }
        };
        Ok(terms)
    }

    // π λ ∫₀^V exp(-θ v^{α/2} m W - π c v) dv, returned with its error bound
    fn term_integral(&self, term: &ExpTerm, theta: f64, alpha: f64, noise: f64) -> Result<(f64, f64)> {
        let c = term.decay;
        let upper = ENVELOPE_LOG / (PI * c);
        let noise_coef = theta * term.noise_multiplier * noise;
        let half_alpha = alpha / 2.0;
        let r = quad::integrate(
            |v| (-PI * c * v - noise_coef * v.powf(half_alpha)).exp(),
            0.0,
            upper,
            &self.quad,
        )?;
        // envelope tail beyond V is at most 1e-12 / (π c)
        let tail = 1e-12 / (PI * c);
        let scale = PI * term.serving_density;
        Ok((scale * r.value, scale * (r.abs_error + tail)))
    }

    fn evaluate_terms(
        &self,
        terms: &[ExpTerm],
        theta: f64,
        alpha: f64,
        noise: &NoiseModel,
        route: Route,
    ) -> Result<f64> {
        noise.validate()?;
        let w = noise.power();
        let mut acc = CompensatedSum::default();
        let mut quad_error = 0.0;
        for term in terms {
            let value = if route == Route::Auto && w == 0.0 {
                term.serving_density / term.decay
            } else {
                let (v, e) = self.term_integral(term, theta, alpha, w)?;
                quad_error += term.weight.abs() * e;
                v
            };
            acc.add(term.weight * value);
        }
        let residual = acc.residual() + quad_error;
        if residual > PRECISION_LIMIT {
            return Err(AnalyticError::LossOfPrecision {
                residual,
                limit: PRECISION_LIMIT,
            });
        }
        Ok(acc.value().clamp(0.0, 1.0))
    }

    /// Coverage probability `P(max_k SINR_k > θ)` of a user of operator
    /// `index` (linear threshold).
    #[allow(clippy::too_many_arguments)]
    pub fn coverage_with_route(
        &self,
        sharing: Sharing,
        band_mode: BandMode,
        theta: f64,
        ops: &OperatorSet,
        index: usize,
        alpha: f64,
        noise: &NoiseModel,
        route: Route,
    ) -> Result<f64> {
        let terms = self.terms(sharing, band_mode, theta, ops, index, alpha)?;
        self.evaluate_terms(&terms, theta, alpha, noise, route)
    }

    pub fn coverage(
        &self,
        sharing: Sharing,
        band_mode: BandMode,
        theta: f64,
        ops: &OperatorSet,
        index: usize,
        alpha: f64,
        noise: &NoiseModel,
    ) -> Result<f64> {
        self.coverage_with_route(sharing, band_mode, theta, ops, index, alpha, noise, Route::Auto)
    }

    /// Coverage on a dB threshold grid.
    #[allow(clippy::too_many_arguments)]
    pub fn curve(
        &self,
        sharing: Sharing,
        band_mode: BandMode,
        thresholds_db: &[f64],
        ops: &OperatorSet,
        index: usize,
        alpha: f64,
        noise: &NoiseModel,
        label: impl Into<String>,
    ) -> Result<CoverageCurve> {
        let probabilities = thresholds_db
            .iter()
            .map(|&db| self.coverage(sharing, band_mode, db_to_linear(db), ops, index, alpha, noise))
            .collect::<Result<Vec<_>>>()?;
        Ok(CoverageCurve {
            label: label.into(),
            thresholds_db: thresholds_db.to_vec(),
            std_errors: vec![0.0; probabilities.len()],
            probabilities,
        })
    }

    /// Average user rate (bit/s per unit bandwidth when `b = 1`).
    ///
    /// `d = ∫₀^∞ p(2^{ρ/B} - 1) dρ`, with `B = b` without spectrum pooling
    /// and `B = |𝒩| b` with it. The rate sums `log₂(1 + SINR_k)` over bands,
    /// so it only depends on the per-band marginal of the SINR; that marginal
    /// is the same under flat and frequency-selective fading, and both band
    /// modes therefore share the flat-fading integrand.
    pub fn average_rate(
        &self,
        sharing: Sharing,
        ops: &OperatorSet,
        index: usize,
        alpha: f64,
        noise: &NoiseModel,
    ) -> Result<f64> {
        ops.check_index(index)?;
        check_alpha(alpha)?;
        noise.validate()?;
        let bands = if sharing.shares_spectrum() {
            ops.len() as f64
        } else {
            1.0
        };
        let p = |t: f64| -> Result<f64> {
            let theta = t.exp2() - 1.0;
            self.coverage(sharing, BandMode::Flat, theta, ops, index, alpha, noise)
        };
        let quad_cfg = QuadConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-10,
            max_intervals: 200,
        };
        let mut total = 0.0;
        let mut t = 0.0;
        loop {
            // quad cannot propagate errors from the integrand; keep the first one
            let failure = RefCell::new(None);
            let r = quad::integrate(
                |x| match p(x) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        0.0
                    }
                },
                t,
                t + 1.0,
                &quad_cfg,
            )?;
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            total += r.value;
            t += 1.0;
            let tail = p(t)?;
            if tail < self.rate.cutoff * total {
                break;
            }
            if t >= self.rate.max_span {
                return Err(AnalyticError::RateTruncation {
                    span: t,
                    integrand: tail,
                    total,
                });
            }
        }
        Ok(bands * ops.bandwidth() * total)
    }
}

fn default_model() -> Analytic {
    Analytic::default()
}

/// Single-operator PPP coverage of operator `index` (interferers from its
/// own network only).
pub fn coverage_baseline(
    theta: f64,
    ops: &OperatorSet,
    index: usize,
    alpha: f64,
    noise: &NoiseModel,
) -> Result<f64> {
    default_model().coverage(Sharing::None, BandMode::Flat, theta, ops, index, alpha, noise)
}

pub fn coverage_infrastructure(
    theta: f64,
    ops: &OperatorSet,
    index: usize,
    alpha: f64,
    noise: &NoiseModel,
) -> Result<f64> {
    default_model().coverage(Sharing::Infrastructure, BandMode::Flat, theta, ops, index, alpha, noise)
}

pub fn coverage_spectrum_flat(
    theta: f64,
    ops: &OperatorSet,
    index: usize,
    alpha: f64,
    noise: &NoiseModel,
) -> Result<f64> {
    default_model().coverage(Sharing::Spectrum, BandMode::Flat, theta, ops, index, alpha, noise)
}

pub fn coverage_spectrum_selective(
    theta: f64,
    ops: &OperatorSet,
    index: usize,
    alpha: f64,
    noise: &NoiseModel,
) -> Result<f64> {
    default_model().coverage(Sharing::Spectrum, BandMode::Selective, theta, ops, index, alpha, noise)
}

pub fn coverage_full_flat(theta: f64, ops: &OperatorSet, alpha: f64, noise: &NoiseModel) -> Result<f64> {
    default_model().coverage(Sharing::Full, BandMode::Flat, theta, ops, 0, alpha, noise)
}

pub fn coverage_full_selective(
    theta: f64,
    ops: &OperatorSet,
    alpha: f64,
    noise: &NoiseModel,
) -> Result<f64> {
    default_model().coverage(Sharing::Full, BandMode::Selective, theta, ops, 0, alpha, noise)
}

pub fn average_rate(
    sharing: Sharing,
    ops: &OperatorSet,
    index: usize,
    alpha: f64,
    noise: &NoiseModel,
) -> Result<f64> {
    default_model().average_rate(sharing, ops, index, alpha, noise)
}

#[cfg(test)]
mod tests {
    use super::*;

    const IL: NoiseModel = NoiseModel::InterferenceLimited;

    fn ops(d: &[f64]) -> OperatorSet {
        OperatorSet::new(d.to_vec()).unwrap()
    }

    #[test]
    fn operator_set_validation() {
        assert!(OperatorSet::new(vec![]).is_err());
        assert!(OperatorSet::new(vec![1.0, 0.0]).is_err());
        assert!(OperatorSet::new(vec![1.0, f64::NAN]).is_err());
        assert!(OperatorSet::with_bandwidth(vec![1.0], 0.0).is_err());
        assert_eq!(ops(&[1.0, 3.0]).other_density(0), 3.0);
    }

    #[test]
    fn association_probabilities() {
        assert_eq!(association_probability(&ops(&[1.0, 1.0]), 0).unwrap(), 0.5);
        assert_eq!(association_probability(&ops(&[1.0, 3.0]), 0).unwrap(), 0.25);
        assert_eq!(association_probability(&ops(&[2.0]), 0).unwrap(), 1.0);
        assert!(association_probability(&ops(&[2.0]), 1).is_err());
        let o = ops(&[0.3, 1.7, 4.0]);
        let s: f64 = (0..3).map(|i| association_probability(&o, i).unwrap()).sum();
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn baseline_examples() {
        let expected = 1.0 / (1.0 + PI / 4.0);
        let p = coverage_baseline(1.0, &ops(&[1.0]), 0, 4.0, &IL).unwrap();
        assert!((p - expected).abs() < 1e-12);
        assert!((p - 0.56010).abs() < 5e-6);
        let p5 = coverage_baseline(1.0, &ops(&[5.0]), 0, 4.0, &IL).unwrap();
        assert!((p5 - expected).abs() < 1e-12);
        assert!((coverage_baseline(1e-12, &ops(&[1.0]), 0, 4.0, &IL).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infrastructure_examples() {
        let p = coverage_infrastructure(1.0, &ops(&[1.0, 1.0]), 0, 4.0, &IL).unwrap();
        assert!((p - 2.0 / (2.0 + PI / 4.0)).abs() < 1e-12);
        assert!((p - 0.71803).abs() < 5e-6);
        let single = coverage_infrastructure(1.0, &ops(&[1.0]), 0, 4.0, &IL).unwrap();
        assert!((single - 1.0 / (1.0 + PI / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn spectrum_flat_examples() {
        let p = coverage_spectrum_flat(1.0, &ops(&[1.0, 1.0]), 0, 4.0, &IL).unwrap();
        assert!((p - 1.0 / (1.0 + PI / 4.0 + PI / 2.0)).abs() < 1e-12);
        assert!((p - 0.29796).abs() < 5e-6);
        let p2 = coverage_spectrum_flat(1.0, &ops(&[1.0, 2.0]), 0, 4.0, &IL).unwrap();
        assert!((p2 - 1.0 / (1.0 + PI / 4.0 + PI)).abs() < 1e-12);
    }

    #[test]
    fn selective_single_operator_is_baseline() {
        let b = 1.0 / (1.0 + PI / 4.0);
        let s = coverage_spectrum_selective(1.0, &ops(&[1.0]), 0, 4.0, &IL).unwrap();
        let f = coverage_full_selective(1.0, &ops(&[1.0]), 4.0, &IL).unwrap();
        assert!((s - b).abs() < 1e-12);
        assert!((f - b).abs() < 1e-12);
    }

    #[test]
    fn selective_beats_flat_and_vanishes_at_high_threshold() {
        let o = ops(&[1.0, 1.0]);
        let sel = coverage_spectrum_selective(1.0, &o, 0, 4.0, &IL).unwrap();
        let flat = coverage_spectrum_flat(1.0, &o, 0, 4.0, &IL).unwrap();
        assert!(sel > flat);
        assert!(coverage_spectrum_selective(1e12, &o, 0, 4.0, &IL).unwrap() < 1e-5);
    }

    #[test]
    fn full_flat_is_density_invariant() {
        let b = 1.0 / (1.0 + PI / 4.0);
        for d in [vec![1.0, 1.0], vec![2.0], vec![0.3, 5.0, 1.0]] {
            let p = coverage_full_flat(1.0, &ops(&d), 4.0, &IL).unwrap();
            assert!((p - b).abs() < 1e-12);
        }
    }

    #[test]
    fn noise_reduces_full_flat_coverage() {
        let o = ops(&[1.0, 1.0]);
        let clean = coverage_full_flat(1.0, &o, 4.0, &IL).unwrap();
        let noisy = coverage_full_flat(1.0, &o, 4.0, &NoiseModel::WithNoise { power: 0.1 }).unwrap();
        assert!(noisy < clean);
        // |𝒩| W scaling: same as a single band with twice the noise
        let single = coverage_baseline(1.0, &ops(&[2.0]), 0, 4.0, &NoiseModel::WithNoise { power: 0.2 }).unwrap();
        assert!((noisy - single).abs() < 1e-10);
    }

    #[test]
    fn selective_cap_is_enforced() {
        let o = OperatorSet::equal(9, 1.0).unwrap();
        let err = coverage_full_selective(1.0, &o, 4.0, &IL).unwrap_err();
        assert!(matches!(err, AnalyticError::TooManyOperators { operators: 9, cap: 8 }));
        let mut m = Analytic::new();
        m.selective_cap = 12;
        assert!(m.coverage(Sharing::Full, BandMode::Selective, 1.0, &o, 0, 4.0, &IL).is_ok());
    }

    #[test]
    fn rejects_bad_inputs() {
        let o = ops(&[1.0]);
        assert!(coverage_baseline(-1.0, &o, 0, 4.0, &IL).is_err());
        assert!(coverage_baseline(1.0, &o, 0, 2.0, &IL).is_err());
        assert!(coverage_baseline(1.0, &o, 3, 4.0, &IL).is_err());
        assert!(coverage_baseline(1.0, &o, 0, 4.0, &NoiseModel::WithNoise { power: -1.0 }).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 4), 70.0);
        assert_eq!(binomial(5, 0), 1.0);
        assert_eq!(binomial(3, 5), 0.0);
    }

    #[test]
    fn grid_is_inclusive() {
        let g = theta_grid_db(-10.0, 20.0, 2.5);
        assert_eq!(g.len(), 13);
        assert_eq!(g[12], 20.0);
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
        assert!((linear_to_db(100.0) - 20.0).abs() < 1e-12);
    }
}
