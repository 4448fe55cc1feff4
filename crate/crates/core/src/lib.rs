//! Coverage and rate of cellular networks whose operators share
//! infrastructure, spectrum, or both.
//!
//! The [`analytic`] module evaluates stochastic-geometry expressions for the
//! downlink SINR distribution of a typical user; [`simulator`] estimates the
//! same quantities by Monte-Carlo over PPP and Gauss–Poisson deployments.

pub mod analytic;
pub mod channel;
pub mod csvfmt;
pub mod experiment;
pub mod pointprocess;
pub mod quad;
pub mod simulator;
pub mod specfun;

pub use analytic::{Analytic, CoverageCurve, NoiseModel, OperatorSet, Sharing};
pub use channel::{BandMode, FadingKind, FadingModel};
