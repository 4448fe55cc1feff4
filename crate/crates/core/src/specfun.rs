//! Special functions and the interference functionals used by the coverage
//! expressions.
//!
//! Two families of functionals appear in the Laplace transform of PPP
//! interference seen by a user at distance `r` from its serving transmitter:
//!
//! * `zeta(θ, α, l)`: interferers restricted to distances beyond `r`
//!   (they belong to the serving network, so none can be closer),
//!   `(2/α) ∫₁^∞ t^{2/α-1} (1 + t/θ)^{-l} dt`.
//! * `zeta0(θ, α, l)`: interferers that may sit arbitrarily close to the
//!   user, `(2/α) ∫₀^∞ t^{2/α-1} (1 + t/θ)^{-l} dt`.
//!
//! `l` is the diversity order: the integrand raised to the power `l` comes
//! from the binomial expansion used for frequency-selective fading. With
//! `l = 1` both reduce to the classic single-band forms.
//!
//! Note on large `l`: for `α = 4` the exact value of `zeta0(θ, 4, l)` is
//! `(√θ/2)·β(1/2, l-1/2)`, which behaves as `√(πθ)/(2√l)`. A frequently
//! quoted approximation `√θ/(2√(πl))` is off by a factor `π`; only the exact
//! Beta form is used here.

use std::f64::consts::PI;

use thiserror::Error;

/// Maximum number of series terms before giving up.
pub const MAX_SERIES_TERMS: usize = 10_000;

/// Series stop criterion: last term relative to the partial sum.
pub const SERIES_TOLERANCE: f64 = 1e-14;

// Above this argument the Pfaff-transformed series is replaced by the
// 1-w connection formula.
const CONNECTION_THRESHOLD: f64 = 0.75;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("argument out of domain: {what} = {value}")]
    Domain { what: &'static str, value: f64 },
    #[error(
        "2F1({a}, {b}; {c}; {z}) did not converge after {terms} terms (last term {last_term:e}, partial sum {partial_sum:e})"
    )]
    NonConvergence {
        a: f64,
        b: f64,
        c: f64,
        z: f64,
        terms: usize,
        last_term: f64,
        partial_sum: f64,
    },
}

pub type Result<T> = std::result::Result<T, SpecFunError>;

/// Validated arguments of the interference functionals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceFunctionalParams {
    pub theta: f64,
    pub alpha: f64,
    pub l: u32,
}

impl InterferenceFunctionalParams {
    pub fn new(theta: f64, alpha: f64, l: u32) -> Result<Self> {
        check_theta(theta)?;
        check_alpha(alpha)?;
        if l == 0 {
            return Err(SpecFunError::Domain {
                what: "l",
                value: 0.0,
            });
        }
        if theta == 0.0 {
            return Err(SpecFunError::Domain {
                what: "theta",
                value: theta,
            });
        }
        Ok(Self { theta, alpha, l })
    }

    pub fn with_unit_order(theta: f64, alpha: f64) -> Result<Self> {
        Self::new(theta, alpha, 1)
    }

    pub fn zeta(&self) -> Result<f64> {
        zeta_l(self.theta, self.alpha, self.l)
    }

    pub fn zeta0(&self) -> Result<f64> {
        zeta0_l(self.theta, self.alpha, self.l)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 2.0 {
        Ok(())
    } else {
        Err(SpecFunError::Domain {
            what: "alpha",
            value: alpha,
        })
    }
}

// theta = 0 is accepted by the functionals (value 0), negative is not.
fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta >= 0.0 {
        Ok(())
    } else {
        Err(SpecFunError::Domain {
            what: "theta",
            value: theta,
        })
    }
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (Γ(x+1) form)
    let mut sum = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    sum
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // reflection keeps the Lanczos sum in its accurate range
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (xm + 0.5) * t.ln() - t + lanczos_sum(xm).ln()
}

/// `(ln |Γ(x)|, sign Γ(x))` for any real `x` that is not a pole.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (ln_gamma(x), 1.0);
    }
    // Γ(x) = π / (sin(πx) Γ(1-x)), with 1-x > 1
    let s = (PI * x).sin();
    let ln_abs = PI.ln() - s.abs().ln() - ln_gamma(1.0 - x);
    (ln_abs, s.signum())
}

fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Γ(x). Returns ±∞ at the poles `x = 0, -1, -2, ...`.
pub fn gamma(x: f64) -> f64 {
    if is_non_positive_integer(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    if x > 140.0 {
        return ln_gamma(x).exp();
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(xm + 0.5) * (-t).exp() * lanczos_sum(xm)
}

/// ln B(a, b) for positive arguments.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// B(a, b) for positive arguments, evaluated through log-Gamma.
pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

// Γ(n1)Γ(n2) / (Γ(d1)Γ(d2)), zero when a denominator argument is a pole.
fn gamma_ratio(num: [f64; 2], den: [f64; 2]) -> f64 {
    if den.iter().any(|&d| is_non_positive_integer(d)) {
        return 0.0;
    }
    let mut ln = 0.0;
    let mut sign = 1.0;
    for &n in &num {
        let (l, s) = ln_gamma_signed(n);
        ln += l;
        sign *= s;
    }
    for &d in &den {
        let (l, s) = ln_gamma_signed(d);
        ln -= l;
        sign *= s;
    }
    sign * ln.exp()
}

// Plain hypergeometric series, argument assumed in [0, 1).
fn series(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * w;
        sum += term;
        if term == 0.0 || term.abs() <= SERIES_TOLERANCE * sum.abs() {
            return Ok(sum);
        }
    }
    Err(SpecFunError::NonConvergence {
        a,
        b,
        c,
        z: w,
        terms: MAX_SERIES_TERMS,
        last_term: term,
        partial_sum: sum,
    })
}

/// ₂F₁(a, b; c; w) for `w ∈ [0, 1)`, with `one_minus = 1 - w` supplied
/// exactly by the caller.
///
/// Direct series up to `w = 0.75`; above it the 1-w connection formula,
/// which needs `c - a - b` away from an integer. When it is not, the direct
/// series is used and may hit the iteration cap.
pub(crate) fn hyp2f1_unit_interval(a: f64, b: f64, c: f64, w: f64, one_minus: f64) -> Result<f64> {
    debug_assert!((0.0..1.0).contains(&w));
    if w == 0.0 {
        return Ok(1.0);
    }
    let d = c - a - b;
    if w <= CONNECTION_THRESHOLD || (d - d.round()).abs() < 1e-8 {
        return series(a, b, c, w);
    }
    let first = gamma_ratio([c, d], [c - a, c - b]);
    let second = gamma_ratio([c, -d], [a, b]);
    let mut value = 0.0;
    if first != 0.0 {
        value += first * series(a, b, 1.0 - d, one_minus)?;
    }
    if second != 0.0 {
        value += second * one_minus.powf(d) * series(c - a, c - b, 1.0 + d, one_minus)?;
    }
    Ok(value)
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) on the ray `z ≤ 0`.
///
/// The argument is mapped into `[0, 1)` with the Pfaff transformation
/// `₂F₁(a,b;c;z) = (1-z)^{-a} ₂F₁(a, c-b; c; z/(z-1))`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if is_non_positive_integer(c) {
        return Err(SpecFunError::Domain {
            what: "c",
            value: c,
        });
    }
    if !(z.is_finite() && z <= 0.0) {
        return Err(SpecFunError::Domain {
            what: "z",
            value: z,
        });
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let w = z / (z - 1.0);
    let f = hyp2f1_unit_interval(a, c - b, c, w, 1.0 / (1.0 - z)).map_err(|e| match e {
        // report the caller's parameters, not the transformed ones
        SpecFunError::NonConvergence {
            terms,
            last_term,
            partial_sum,
            ..
        } => SpecFunError::NonConvergence {
            a,
            b,
            c,
            z,
            terms,
            last_term,
            partial_sum,
        },
        other => other,
    })?;
    Ok((1.0 - z).powf(-a) * f)
}

/// `𝔷(θ, α) = 2θ/(α-2) ₂F₁(1, 1-2/α; 2-2/α; -θ)`.
pub fn zeta(theta: f64, alpha: f64) -> Result<f64> {
    zeta_l(theta, alpha, 1)
}

/// `𝔷(θ, α, l) = 2θˡ/(lα-2) ₂F₁(l, l-2/α; l-2/α+1; -θ)`.
///
/// Evaluated in the Pfaff-transformed form
/// `2/(lα-2) · wˡ · ₂F₁(l, 1; l-2/α+1; w)` with `w = θ/(1+θ)`, which is
/// the same function without the `θˡ (1+θ)^{-l}` overflow for large `l`.
pub fn zeta_l(theta: f64, alpha: f64, l: u32) -> Result<f64> {
    check_theta(theta)?;
    check_alpha(alpha)?;
    if l == 0 {
        return Err(SpecFunError::Domain {
            what: "l",
            value: 0.0,
        });
    }
    if theta == 0.0 {
        return Ok(0.0);
    }
    let lf = f64::from(l);
    let delta = 2.0 / alpha;
    let w = theta / (1.0 + theta);
    let f = hyp2f1_unit_interval(lf, 1.0, lf - delta + 1.0, w, 1.0 / (1.0 + theta))?;
    Ok(2.0 / (lf * alpha - 2.0) * w.powf(lf) * f)
}

/// `𝔷₀(θ, α) = θ^{2/α} Γ(1+2/α) Γ(1-2/α)`.
pub fn zeta0(theta: f64, alpha: f64) -> Result<f64> {
    check_theta(theta)?;
    check_alpha(alpha)?;
    let delta = 2.0 / alpha;
    Ok(theta.powf(delta) * gamma(1.0 + delta) * gamma(1.0 - delta))
}

/// `𝔷₀(θ, α, l) = (2θ^{2/α}/α) β(2/α, l-2/α)`.
pub fn zeta0_l(theta: f64, alpha: f64, l: u32) -> Result<f64> {
    check_theta(theta)?;
    check_alpha(alpha)?;
    if l == 0 {
        return Err(SpecFunError::Domain {
            what: "l",
            value: 0.0,
        });
    }
    let delta = 2.0 / alpha;
    Ok(2.0 * theta.powf(delta) / alpha * beta(delta, f64::from(l) - delta))
}
