//! Numerical checks of the analytic objects behind the algorithms.
//!
//! [`lstar_one_p2`] evaluates, for `p = 2`, the adjoint of the generator of
//! X (at frozen `α`, `β`) applied to the Gibbs density, normalized so that
//! it vanishes exactly when `μ_β` is invariant:
//!
//! ```text
//! L*𝟙(x) = (β²/2) U'(x)² − (β/2) U''(x) − 1/α
//!        + 1/(α(1−αβ)) ∫_{B(x,(1−αβ)π)} exp(β[U(x) − U(x − η(y−x))]) ν(dy),
//! η = αβ / (1 − αβ).
//! ```
//!
//! The increment `U(x) − U(x − δ)` is computed from the exact `p = 2`
//! identity `U'' = 2 − 2ν(·')` as `δU'(x) − δ² + 2∫₀^δ (δ−s) ν(x'−s) ds`,
//! which keeps the cancellation against `1/α` accurate for small `α`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::CirclePoint;
use crate::measures::CircleMeasure;
use crate::potential::{u_grad, u_hess, grid_point};
use crate::quadrature::{gauss_legendre8, simpson};
use crate::schedules::a_exponent;
use crate::stats::{ks_statistic, normal_cdf};
use crate::{Error, Result};

/// Default quadrature size for the ball integral.
pub const DEFAULT_ADJOINT_QUAD: usize = 8192;

fn check_domain(alpha: f64, beta: f64) -> Result<()> {
    let ab = alpha * beta;
    if !(alpha > 0.0 && beta > 0.0) || ab >= 0.5 || ab * beta > 0.5 {
        return Err(Error::AdjointDomain { alpha, beta });
    }
    Ok(())
}

/// `L*𝟙(x)` for `p = 2` and a density `m`.
pub fn lstar_one_p2(m: &CircleMeasure, alpha: f64, beta: f64, x: CirclePoint, n_quad: usize) -> Result<f64> {
    check_domain(alpha, beta)?;
    if m.is_atomic() {
        return Err(Error::NoDensity);
    }
    let grad = u_grad(2.0, m, x)?;
    let hess = u_hess(2.0, m, x)?;
    let ab = alpha * beta;
    let eta = ab / (1.0 - ab);
    let radius = (1.0 - ab) * PI;
    let anti = x.antipode();
    let nu = |z: CirclePoint| m.density(z).expect("density measure");
    // U(x) − U(x − δ)
    let increment = |delta: f64| {
        let tail = gauss_legendre8(|s| (delta - s) * nu(anti.rotate(-s)), 0.0, delta);
        delta * grad - delta * delta + 2.0 * tail
    };
    let integrand = |u: f64| (beta * increment(eta * u)).exp() * nu(x.rotate(u));
    let half = (n_quad / 2).max(2);
    let ball = (simpson(integrand, -radius, 0.0, half) + simpson(integrand, 0.0, radius, half)) / TAU;
    Ok(0.5 * beta * beta * grad * grad - 0.5 * beta * hess - 1.0 / alpha + ball / (alpha * (1.0 - ab)))
}

/// `sup |L*𝟙|` over an `grid_n`-point grid.
pub fn lstar_sup(m: &CircleMeasure, alpha: f64, beta: f64, grid_n: usize, n_quad: usize) -> Result<f64> {
    let values: Result<Vec<f64>> = (0..grid_n)
        .into_par_iter()
        .map(|i| lstar_one_p2(m, alpha, beta, grid_point(i, grid_n), n_quad).map(f64::abs))
        .collect();
    Ok(values?.into_iter().fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub alpha: f64,
    pub beta: f64,
    pub sup_abs_lstar: f64,
}

/// Log-log slope of `sup |L*𝟙|` in `α` at one `β`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaSlope {
    pub beta: f64,
    pub slope: f64,
    pub pass: bool,
}

/// Growth of `sup |L*𝟙|` between two `β` at one `α`, against the `β⁴` envelope.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaGrowth {
    pub alpha: f64,
    pub beta_from: f64,
    pub beta_to: f64,
    pub ratio: f64,
    pub envelope: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingTable {
    pub holder_a: f64,
    pub rows: Vec<ScalingRow>,
    pub slopes: Vec<AlphaSlope>,
    pub beta_growth: Vec<BetaGrowth>,
}

/// Accepted deviation of the fitted slope from its bounds.
pub const SLOPE_TOLERANCE: f64 = 0.15;

impl ScalingTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,beta,sup_abs_lstar\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.alpha, r.beta, r.sup_abs_lstar));
        }
        out
    }

    pub fn pass(&self) -> bool {
        self.slopes.iter().all(|s| s.pass)
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Tabulates `sup |L*𝟙|` over `α_list × β_list`, fits the slope in `α` at
/// every `β`, and records growth between every pair of `β` values.
pub fn lstar_scaling_study(
    m: &CircleMeasure,
    alphas: &[f64],
    betas: &[f64],
    grid_n: usize,
    n_quad: usize,
) -> Result<ScalingTable> {
    for &a in alphas {
        for &b in betas {
            check_domain(a, b)?;
        }
    }
    let holder_a = m.holder().map(|h| h.a).unwrap_or(1.0);
    let a_p = a_exponent(2.0, holder_a);
    let mut rows = Vec::new();
    for &beta in betas {
        for &alpha in alphas {
            rows.push(ScalingRow { alpha, beta, sup_abs_lstar: lstar_sup(m, alpha, beta, grid_n, n_quad)? });
        }
    }
    let mut slopes = Vec::new();
    if alphas.len() >= 2 {
        for &beta in betas {
            let (xs, ys): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|r| r.beta == beta)
                .map(|r| (r.alpha.ln(), r.sup_abs_lstar.ln()))
                .unzip();
            let slope = fit_slope(&xs, &ys);
            let pass = slope >= a_p - SLOPE_TOLERANCE && slope <= 1.0 + SLOPE_TOLERANCE;
            slopes.push(AlphaSlope { beta, slope, pass });
        }
    }
    let mut beta_growth = Vec::new();
    for &alpha in alphas {
        for (i, &b0) in betas.iter().enumerate() {
            for &b1 in &betas[i + 1..] {
                let find = |b: f64| rows.iter().find(|r| r.alpha == alpha && r.beta == b).map(|r| r.sup_abs_lstar);
                if let (Some(s0), Some(s1)) = (find(b0), find(b1)) {
                    beta_growth.push(BetaGrowth {
                        alpha,
                        beta_from: b0,
                        beta_to: b1,
                        ratio: s1 / s0,
                        envelope: (b1 / b0).powi(4),
                    });
                }
            }
        }
    }
    Ok(ScalingTable { holder_a, rows, slopes, beta_growth })
}

const WRAP_TERMS: i32 = 8;

/// Density (w.r.t. `dy`) of the wrapped Gaussian with variance `s` started
/// at 0, truncated to `|n| ≤ 8`.
pub fn wrapped_gaussian_density(y: f64, s: f64) -> f64 {
    let norm = (TAU * s).sqrt();
    (-WRAP_TERMS..=WRAP_TERMS)
        .map(|n| {
            let z = y + TAU * n as f64;
            (-z * z / (2.0 * s)).exp() / norm
        })
        .sum()
}

/// CDF on `(−π, π]` of the wrapped Gaussian with variance `s` started at 0.
pub fn wrapped_gaussian_cdf(y: f64, s: f64) -> f64 {
    let sd = s.sqrt();
    (-WRAP_TERMS..=WRAP_TERMS)
        .map(|n| {
            let shift = TAU * n as f64;
            normal_cdf((y + shift) / sd) - normal_cdf((-PI + shift) / sd)
        })
        .sum()
}

/// Two-sided KS statistic of `samples` against the wrapped Gaussian with
/// variance `s` started at 0.
pub fn wrapped_gaussian_ks(samples: &[CirclePoint], s: f64) -> f64 {
    assert!(s > 0.0, "variance must be positive");
    let raw: Vec<f64> = samples.iter().map(|x| x.theta()).collect();
    ks_statistic(&raw, |y| wrapped_gaussian_cdf(y, s))
}
