//! Gibbs measures `μ_β ∝ exp(−β U_p) dλ` on a potential grid, their masses,
//! and grid comparisons (total variation and the chi-square discrepancy).
//!
//! All densities are with respect to the normalized Lebesgue measure
//! `λ = dx / 2π`, so on an `n`-point periodic grid `∫ f dλ = mean(f)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::geometry::{dist, CirclePoint};
use crate::measures::CircleMeasure;
use crate::potential::PotentialGrid;
use crate::{Error, Result};

/// `μ_β` sampled on the nodes of a [`PotentialGrid`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GibbsGrid {
    beta: f64,
    density: Vec<f64>,
    /// `ln Z_β` with `Z_β = ∫ exp(−β U) dλ`.
    log_z: f64,
}

/// Builds `μ_β` from `g`. Exponentials are shifted by `min U` before
/// normalizing, so large `β` cannot overflow.
///
/// # Panics
/// If `beta` is negative or not finite.
pub fn gibbs_build(g: &PotentialGrid, beta: f64) -> GibbsGrid {
    assert!(beta.is_finite() && beta >= 0.0, "β must be finite and ≥ 0, got {beta}");
    let umin = g.min_value();
    let raw: Vec<f64> = g.values().iter().map(|u| (-beta * (u - umin)).exp()).collect();
    let mean = raw.iter().sum::<f64>() / raw.len() as f64;
    let density = raw.iter().map(|r| r / mean).collect();
    GibbsGrid { beta, density, log_z: mean.ln() - beta * umin }
}

impl GibbsGrid {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn len(&self) -> usize {
        self.density.len()
    }

    pub fn is_empty(&self) -> bool {
        self.density.is_empty()
    }

    pub fn log_partition(&self) -> f64 {
        self.log_z
    }

    pub fn theta(&self, i: usize) -> CirclePoint {
        crate::potential::grid_point(i, self.density.len())
    }

    /// Averages the density over `bins` equal arcs
    /// `[−π + 2πk/B, −π + 2π(k+1)/B)`, the layout used by ensemble
    /// histograms. Grid nodes on an arc boundary count half to each side.
    pub fn coarsen(&self, bins: usize) -> Result<Vec<f64>> {
        let n = self.density.len();
        if bins == 0 || !n.is_multiple_of(bins) {
            return Err(Error::GridMismatch(n, bins));
        }
        let per = n / bins;
        // Node i sits at 2πi/n; node n/2 is the point −π ≡ π.
        let mut out = vec![0.0; bins];
        for (i, d) in self.density.iter().enumerate() {
            let shifted = (i + n / 2) % n;
            let k = shifted / per;
            if shifted.is_multiple_of(per) {
                out[k] += 0.5 * d;
                out[(k + bins - 1) % bins] += 0.5 * d;
            } else {
                out[k] += d;
            }
        }
        Ok(out.into_iter().map(|m| m / per as f64).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,density\n");
        for (i, d) in self.density.iter().enumerate() {
            out.push_str(&format!("{},{}\n", self.theta(i).theta(), d));
        }
        out
    }
}

/// `μ_β(∪ B(c_i, δ))`. Nodes at distance exactly `δ` count half.
pub fn gibbs_mass(g: &GibbsGrid, centers: &[CirclePoint], delta: f64) -> f64 {
    assert!(delta > 0.0, "δ must be positive");
    if delta >= PI {
        return 1.0;
    }
    let n = g.density.len();
    let total: f64 = (0..n)
        .map(|i| {
            let x = g.theta(i);
            let d = centers.iter().map(|c| dist(x, *c)).fold(f64::INFINITY, f64::min);
            let w = if (d - delta).abs() <= 1e-12 {
                0.5
            } else if d < delta {
                1.0
            } else {
                0.0
            };
            w * g.density[i]
        })
        .sum();
    total / n as f64
}

/// `½ ∫ |d1 − d2| dλ` for two densities on the same periodic grid.
pub fn tv_grid(d1: &[f64], d2: &[f64]) -> Result<f64> {
    if d1.len() != d2.len() || d1.is_empty() {
        return Err(Error::GridMismatch(d1.len(), d2.len()));
    }
    Ok(0.5 * d1.iter().zip(d2).map(|(a, b)| (a - b).abs()).sum::<f64>() / d1.len() as f64)
}

/// `∫ (h/μ − 1)² dμ = ∫ (h − μ)²/μ dλ` for grid densities `h` and `μ`.
pub fn chi2_grid(hist: &[f64], gibbs: &[f64]) -> Result<f64> {
    if hist.len() != gibbs.len() || hist.is_empty() {
        return Err(Error::GridMismatch(hist.len(), gibbs.len()));
    }
    let mut acc = 0.0;
    for (i, (h, g)) in hist.iter().zip(gibbs).enumerate() {
        if *g <= 0.0 {
            return Err(Error::ZeroGibbsCell(i));
        }
        acc += (h - g) * (h - g) / g;
    }
    Ok(acc / hist.len() as f64)
}

/// Zero-temperature limit weights on the minimizers, proportional to
/// `(1 − ν(x'))^{−1/2}`.
pub fn hwang_weights(minima: &[CirclePoint], m: &CircleMeasure) -> Result<Vec<f64>> {
    if minima.is_empty() {
        return Err(Error::Precondition("no minimizers given".into()));
    }
    let mut raw = Vec::with_capacity(minima.len());
    for x in minima {
        let nu = m.density(x.antipode())?;
        if nu >= 1.0 {
            return Err(Error::DegenerateLimit(nu));
        }
        raw.push((1.0 - nu).powf(-0.5));
    }
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|w| w / total).collect())
}
