//! Pathloss and small-scale power fading.
//!
//! Fades are power gains with unit mean: exponential for Rayleigh and
//! Gamma(m, 1/m) for Nakagami-m. Under flat fading one draw per link is reused
//! on every band; under frequency-selective fading each (link, band) pair is
//! drawn independently.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("Nakagami shape m must be at least 0.5, got {0}")]
    InvalidShape(f64),
    #[error("pathloss exponent must exceed 2, got {0}")]
    InvalidAlpha(f64),
    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),
}

/// Correlation of a link's fade across pooled bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandMode {
    #[default]
    Flat,
    Selective,
}

impl BandMode {
    pub fn name(self) -> &'static str {
        match self {
            BandMode::Flat => "flat",
            BandMode::Selective => "selective",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FadingKind {
    #[default]
    Rayleigh,
    Nakagami { m: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FadingModel {
    pub kind: FadingKind,
    pub band_mode: BandMode,
}

impl FadingModel {
    pub fn rayleigh(band_mode: BandMode) -> Self {
        Self {
            kind: FadingKind::Rayleigh,
            band_mode,
        }
    }

    pub fn nakagami(m: f64, band_mode: BandMode) -> Result<Self, ChannelError> {
        let model = Self {
            kind: FadingKind::Nakagami { m },
            band_mode,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        match self.kind {
            FadingKind::Nakagami { m } if !(m.is_finite() && m >= 0.5) => {
                Err(ChannelError::InvalidShape(m))
            }
            _ => Ok(()),
        }
    }

    pub fn is_rayleigh(&self) -> bool {
        matches!(self.kind, FadingKind::Rayleigh)
    }

    /// Reusable sampler for repeated draws.
    pub fn sampler(&self) -> Result<FadeSampler, ChannelError> {
        self.validate()?;
        let power = match self.kind {
            FadingKind::Rayleigh => PowerDistribution::Exponential,
            FadingKind::Nakagami { m } => PowerDistribution::Gamma(
                Gamma::new(m, 1.0 / m).map_err(|_| ChannelError::InvalidShape(m))?,
            ),
        };
        Ok(FadeSampler {
            power,
            band_mode: self.band_mode,
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum PowerDistribution {
    Exponential,
    Gamma(Gamma<f64>),
}

#[derive(Debug, Clone, Copy)]
pub struct FadeSampler {
    power: PowerDistribution,
    band_mode: BandMode,
}

impl FadeSampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.power {
            PowerDistribution::Exponential => Exp1.sample(rng),
            PowerDistribution::Gamma(g) => g.sample(rng),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, n_links: usize, n_bands: usize, rng: &mut R) -> FadeMatrix {
        let mut data = Vec::with_capacity(n_links * n_bands);
        for _ in 0..n_links {
            match self.band_mode {
                BandMode::Flat => {
                    let h = self.draw(rng);
                    data.extend(std::iter::repeat_n(h, n_bands));
                }
                BandMode::Selective => {
                    for _ in 0..n_bands {
                        data.push(self.draw(rng));
                    }
                }
            }
        }
        FadeMatrix {
            n_links,
            n_bands,
            data,
        }
    }
}

/// Power fades, one row per link and one column per band.
#[derive(Debug, Clone, PartialEq)]
pub struct FadeMatrix {
    n_links: usize,
    n_bands: usize,
    data: Vec<f64>,
}

impl FadeMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n_bands = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_bands), "ragged fade rows");
        Self {
            n_links: rows.len(),
            n_bands,
            data: rows.concat(),
        }
    }

    /// Every fade equal to `value`.
    pub fn constant(n_links: usize, n_bands: usize, value: f64) -> Self {
        Self {
            n_links,
            n_bands,
            data: vec![value; n_links * n_bands],
        }
    }

    pub fn n_links(&self) -> usize {
        self.n_links
    }

    pub fn n_bands(&self) -> usize {
        self.n_bands
    }

    #[inline]
    pub fn get(&self, link: usize, band: usize) -> f64 {
        self.data[link * self.n_bands + band]
    }

    pub fn column(&self, band: usize) -> impl Iterator<Item = f64> + '_ {
        self.data.iter().skip(band).step_by(self.n_bands.max(1)).copied()
    }
}

pub fn sample_power_fade<R: Rng + ?Sized>(
    model: &FadingModel,
    n_links: usize,
    n_bands: usize,
    rng: &mut R,
) -> Result<FadeMatrix, ChannelError> {
    Ok(model.sampler()?.sample(n_links, n_bands, rng))
}

/// Single-slope pathloss `l(d) = d^{-α}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLoss {
    alpha: f64,
}

impl PathLoss {
    pub fn new(alpha: f64) -> Result<Self, ChannelError> {
        if alpha.is_finite() && alpha > 2.0 {
            Ok(Self { alpha })
        } else {
            Err(ChannelError::InvalidAlpha(alpha))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gain(&self, distance: f64) -> Result<f64, ChannelError> {
        if distance > 0.0 {
            Ok(self.gain_squared(distance * distance))
        } else {
            Err(ChannelError::NonPositiveDistance(distance))
        }
    }

    /// Gain from a squared distance; `α = 4` avoids `powf`.
    #[inline]
    pub fn gain_squared(&self, distance_sq: f64) -> f64 {
        if self.alpha == 4.0 {
            1.0 / (distance_sq * distance_sq)
        } else {
            distance_sq.powf(-0.5 * self.alpha)
        }
    }
}

/// `fade · d^{-α}` with unit transmit power.
pub fn received_power(fade: f64, distance: f64, alpha: f64) -> Result<f64, ChannelError> {
    Ok(fade * PathLoss::new(alpha)?.gain(distance)?)
}
