//! Explicit interference-limited expressions for `α = 4`.
//!
//! These are written out directly in terms of `√θ·arctan√θ` and `(π/2)√θ`
//! rather than going through [`ExpTerm`](super::ExpTerm) lists, so they act
//! as an independent route against the integral forms. Selective fading
//! still needs `𝔷(θ, 4, l)` for `l ≥ 2`; `𝔷₀(θ, 4, l)` uses the exact
//! `(√θ/2)·β(1/2, l-1/2)`.

use std::f64::consts::{FRAC_PI_2, PI};

use super::{binomial, AnalyticError, OperatorSet, Result};
use crate::specfun;

fn sqrt_atan(theta: f64) -> f64 {
    let s = theta.sqrt();
    s * s.atan()
}

fn check(theta: f64) -> Result<()> {
    if theta.is_finite() && theta >= 0.0 {
        Ok(())
    } else {
        Err(AnalyticError::InvalidTheta(theta))
    }
}

fn density_ratio(ops: &OperatorSet, index: usize) -> Result<f64> {
    ops.check_index(index)?;
    Ok(ops.other_density(index) / ops.density(index))
}

/// `𝔷₀(θ, 4, l) = (√θ/2)·β(1/2, l - 1/2)`.
pub fn zeta0_alpha4(theta: f64, l: u32) -> f64 {
    0.5 * theta.sqrt() * specfun::beta(0.5, f64::from(l) - 0.5)
}

/// `1 / (1 + √θ arctan√θ)`.
pub fn baseline(theta: f64) -> Result<f64> {
    check(theta)?;
    Ok(1.0 / (1.0 + sqrt_atan(theta)))
}

/// `Σᵢ 1 / (Σⱼ λⱼ/λᵢ + √θ arctan√θ)`.
pub fn infrastructure(theta: f64, ops: &OperatorSet) -> Result<f64> {
    check(theta)?;
    let total = ops.total_density();
    let z = sqrt_atan(theta);
    Ok(ops.densities().iter().map(|&li| 1.0 / (total / li + z)).sum())
}

/// `1 / (1 + √θ (arctan√θ + (π/2) Σ_{j≠n} λⱼ/λₙ))`.
pub fn spectrum_flat(theta: f64, ops: &OperatorSet, index: usize) -> Result<f64> {
    check(theta)?;
    let ratio = density_ratio(ops, index)?;
    let s = theta.sqrt();
    Ok(1.0 / (1.0 + s * (s.atan() + FRAC_PI_2 * ratio)))
}

/// `Σ_k C(N,k)(-1)^{k+1} / (1 + Σ_l C(k,l)(-1)^{l+1} (𝔷(θ,4,l) + Σ_{j≠n} λⱼ/λₙ 𝔷₀(θ,4,l)))`.
pub fn spectrum_selective(theta: f64, ops: &OperatorSet, index: usize) -> Result<f64> {
    check(theta)?;
    let ratio = density_ratio(ops, index)?;
    selective_sum(ops.len(), |l| {
        Ok(specfun::zeta_l(theta, 4.0, l)? + ratio * zeta0_alpha4(theta, l))
    })
}

/// `Σ_k C(N,k)(-1)^{k+1} / (1 + Σ_l C(k,l)(-1)^{l+1} 𝔷(θ,4,l))`; depends on
/// `|𝒩|` only.
pub fn full_selective(theta: f64, operators: usize) -> Result<f64> {
    check(theta)?;
    selective_sum(operators, |l| Ok(specfun::zeta_l(theta, 4.0, l)?))
}

fn selective_sum(n: usize, inner: impl Fn(u32) -> Result<f64>) -> Result<f64> {
    let values = (1..=n as u32).map(&inner).collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for k in 1..=n {
        let mut s = 0.0;
        for l in 1..=k {
            let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
            s += sign * binomial(k, l) * values[l - 1];
        }
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * binomial(n, k) / (1.0 + s);
    }
    Ok(total)
}

/// Leading large-`l` behaviour of `𝔷₀(θ, 4, l)`, `√(πθ)/(2√l)`.
pub fn zeta0_alpha4_asymptote(theta: f64, l: u32) -> f64 {
    (PI * theta).sqrt() / (2.0 * f64::from(l).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta0_alpha4_matches_general() {
        for l in 1..=6 {
            let a = zeta0_alpha4(2.5, l);
            let b = specfun::zeta0_l(2.5, 4.0, l).unwrap();
            assert!((a - b).abs() < 1e-13 * b);
        }
    }

    #[test]
    fn zeta0_asymptote_has_pi_in_numerator() {
        let exact = zeta0_alpha4(1.0, 400);
        let asym = zeta0_alpha4_asymptote(1.0, 400);
        assert!((exact / asym - 1.0).abs() < 2e-3);
        // the 1/(2√(πl)) variant is a factor π smaller
        let other = 1.0 / (2.0 * (PI * 400.0).sqrt());
        assert!((asym / other - PI).abs() < 1e-12);
    }

    #[test]
    fn full_selective_two_operators_hand_value() {
        // k=1: 2/(1+z1), k=2: -1/(1+2 z1 - z2)
        let z1 = specfun::zeta_l(1.0, 4.0, 1).unwrap();
        let z2 = specfun::zeta_l(1.0, 4.0, 2).unwrap();
        let expected = 2.0 / (1.0 + z1) - 1.0 / (1.0 + 2.0 * z1 - z2);
        assert!((full_selective(1.0, 2).unwrap() - expected).abs() < 1e-15);
    }
}
