//! Test-only reference computations, independent of the library's
//! quadrature and special functions.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

/// Tanh-sinh quadrature on `[a, b]`; tolerates endpoint singularities.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let d = 0.5 * (b - a);
    let mut h = 1.0;
    let t_max = 6.5;
    let eval = |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let w = FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        // distance to the nearer endpoint, computed without cancellation
        let gap = d / (u.exp() * u.cosh());
        let x = if t < 0.0 { a + d / ((-u).exp() * u.cosh()) } else { b - gap };
        if x <= a || x >= b {
            0.0
        } else {
            w * f(x)
        }
    };
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        let t = k as f64 * h;
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut prev = sum * h * d;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            k += 2;
        }
        let cur = sum * h * d;
        if (cur - prev).abs() <= 1e-15 * cur.abs().max(1e-300) {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Exp-sinh quadrature on `[a, ∞)` for integrands decaying at infinity.
pub fn exp_sinh(f: impl Fn(f64) -> f64, a: f64) -> f64 {
    let mut h = 1.0;
    let (t_lo, t_hi) = (-5.0, 6.7);
    let eval = |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let e = u.exp();
        let x = a + e;
        let v = f(x);
        if v == 0.0 || !v.is_finite() && e > 1e300 {
            0.0
        } else {
            FRAC_PI_2 * t.cosh() * e * v
        }
    };
    let n = |h: f64| ((t_hi - t_lo) / h).round() as i64;
    let mut sum: f64 = (0..=n(h)).map(|i| eval(t_lo + i as f64 * h)).sum();
    let mut prev = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        sum += (0..n(h)).filter(|i| i % 2 == 1).map(|i| eval(t_lo + i as f64 * h)).sum::<f64>();
        let cur = sum * h;
        if (cur - prev).abs() <= 1e-15 * cur.abs().max(1e-300) {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// `∫₀^∞ f`, split at `split` with tanh-sinh below and exp-sinh above.
pub fn half_line(f: impl Fn(f64) -> f64, split: f64) -> f64 {
    tanh_sinh(&f, 0.0, split) + exp_sinh(&f, split)
}

/// `(2/α) ∫₁^∞ t^{2/α-1} (1+t/θ)^{-l} dt`.
pub fn zeta_oracle(theta: f64, alpha: f64, l: u32) -> f64 {
    let d = 2.0 / alpha;
    d * exp_sinh(|t| t.powf(d - 1.0) * (1.0 + t / theta).powi(-(l as i32)), 1.0)
}

/// Same integrand over `(0, ∞)`.
pub fn zeta0_oracle(theta: f64, alpha: f64, l: u32) -> f64 {
    let d = 2.0 / alpha;
    d * half_line(|t| t.powf(d - 1.0) * (1.0 + t / theta).powi(-(l as i32)), theta.max(1.0))
}

/// `ln E[Π_k exp(-s h_k r^{-α})]`-type PGFL exponent: the integral
/// `2π ∫_{r₀}^∞ (1 - (1 + s x^{-α})^{-k}) x dx` for a unit-density PPP of
/// Rayleigh-faded interferers seen on `k` bands with independent fades.
pub fn pgfl_exponent(s: f64, alpha: f64, r0: f64, k: i32) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let g = |x: f64| {
        let y = s * x.powf(-alpha);
        // 1 - (1+y)^{-k} without cancellation for small y
        -(-(k as f64) * y.ln_1p()).exp_m1() * x
    };
    let scale = s.powf(1.0 / alpha).max(r0).max(1e-3);
    2.0 * PI
        * if r0 > 0.0 {
            tanh_sinh(g, r0, r0 + scale) + exp_sinh(g, r0 + scale)
        } else {
            half_line(g, scale)
        }
}

/// Coverage from first principles: nearest-transmitter distance density,
/// the Rayleigh Laplace functional of each PPP, and inclusion–exclusion
/// over bands for selective fading. `served` is the serving operator for
/// none/spectrum; infrastructure and full average over all operators.
pub fn coverage_oracle(sharing: &str, selective: bool, theta: f64, densities: &[f64], served: usize, alpha: f64, noise: f64) -> f64 {
    let n = densities.len();
    let total: f64 = densities.iter().sum();
    match sharing {
        "none" => single_band(theta, densities[served], densities[served], alpha, noise),
        "infrastructure" => densities
            .iter()
            .map(|&li| {
                // serving transmitter of operator i closer than every other operator's
                let inner = |r: f64| {
                    let s = theta * r.powf(alpha);
                    let head = 2.0 * PI * li * r * (-PI * total * r * r).exp() * noise_factor(s, noise);
                    if head == 0.0 {
                        return 0.0;
                    }
                    head * (-li * pgfl_exponent(s, alpha, r, 1)).exp()
                };
                half_line(inner, 1.0 / total.sqrt())
            })
            .sum(),
        "spectrum" | "full" => {
            let bands = if selective { n } else { 1 };
            let mut p = 0.0;
            for k in 1..=bands {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                let choose = binom(bands, k);
                let term = |r: f64, lambda_s: f64, lambda_near: f64| {
                    let s = theta * r.powf(alpha);
                    let head = 2.0 * PI * lambda_s * r * (-PI * lambda_near * r * r).exp() * noise_factor(s, (k * n) as f64 * noise);
                    if head == 0.0 {
                        return 0.0;
                    }
                    let near = lambda_near * pgfl_exponent(s, alpha, r, k as i32);
                    let far = (total - lambda_near) * pgfl_exponent(s, alpha, 0.0, k as i32);
                    let far = if sharing == "full" { 0.0 } else { far };
                    head * (-near - far).exp()
                };
                let v = if sharing == "full" {
                    half_line(|r| term(r, total, total), 1.0 / total.sqrt())
                } else {
                    let l = densities[served];
                    half_line(|r| term(r, l, l), 1.0 / l.sqrt())
                };
                p += sign * choose * v;
            }
            p
        }
        other => panic!("unknown sharing {other}"),
    }
}

fn single_band(theta: f64, lambda_s: f64, lambda_i: f64, alpha: f64, noise: f64) -> f64 {
    let f = |r: f64| {
        let s = theta * r.powf(alpha);
        let head = 2.0 * PI * lambda_s * r * (-PI * lambda_s * r * r).exp() * noise_factor(s, noise);
        if head == 0.0 {
            return 0.0;
        }
        head * (-lambda_i * pgfl_exponent(s, alpha, r, 1)).exp()
    };
    half_line(f, 1.0 / lambda_s.sqrt())
}

fn noise_factor(s: f64, noise: f64) -> f64 {
    if noise == 0.0 {
        1.0
    } else {
        (-s * noise).exp()
    }
}

pub fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Kolmogorov–Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// 1% critical value of the one-sample KS test, large-sample form.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}
