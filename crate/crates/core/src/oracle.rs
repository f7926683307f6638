//! Reference p-means: brute-force grid minimization for any measure and an
//! exact `O(N²)` enumeration for the `p = 2` mean of weighted atoms.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::geometry::{dist, signed_gap, CirclePoint};
use crate::measures::CircleMeasure;
use crate::potential::{minima, MinimaSet, Minimizer};
use crate::{Error, Result};

/// Result of an oracle call, as exported to JSON.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    pub method: &'static str,
    pub p: f64,
    pub degenerate: bool,
    pub minimizers: Vec<Minimizer>,
}

/// All global minimizers of `U_p` found on an `n`-point grid and refined by
/// golden-section search to bracket width `tol`.
pub fn grid_minimize(p: f64, m: &CircleMeasure, n: usize, tol: f64) -> Result<MinimaSet> {
    if n < 256 {
        return Err(Error::Precondition(format!("grid oracle needs n ≥ 256, got {n}")));
    }
    minima(p, m, n, tol)
}

const INTERIOR_TOL: f64 = 1e-12;

/// Exact global minimizers of `U_2` for weighted atoms.
///
/// Cutting the circle at one atom and unrolling the others into the window
/// `(x_k, x_k + 2π]` gives a configuration whose weighted mean `m` is the
/// stationary point of `U_2` on the arcs where no antipode of an atom lies
/// between `m` and the atoms. Every local minimizer of `U_2` arises from one
/// such cut; a candidate is kept if every unrolled atom lies strictly within
/// `π` of it.
pub fn exact_mean_p2_empirical(atoms: &[CirclePoint], weights: &[f64]) -> Result<Vec<Minimizer>> {
    if atoms.is_empty() || atoms.len() != weights.len() {
        return Err(Error::InvalidMeasure("atoms and weights must be nonempty and of equal length".into()));
    }
    if weights.iter().any(|w| !(*w > 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidMeasure("weights must be positive and sum to 1".into()));
    }
    let mut candidates: Vec<Minimizer> = Vec::new();
    for cut in atoms {
        // Unrolled coordinate of atom y: cut + offset in [0, 2π).
        let offsets: Vec<f64> = atoms
            .iter()
            .map(|y| {
                let g = signed_gap(*cut, *y);
                if g < 0.0 { g + TAU } else { g }
            })
            .collect();
        let mean: f64 = offsets.iter().zip(weights).map(|(o, w)| o * w).sum();
        let consistent = offsets.iter().all(|o| (o - mean).abs() < PI - INTERIOR_TOL);
        if !consistent {
            continue;
        }
        let value: f64 = offsets.iter().zip(weights).map(|(o, w)| w * (o - mean) * (o - mean)).sum();
        candidates.push(Minimizer { theta: cut.rotate(mean), value });
    }
    assert!(!candidates.is_empty(), "every finite atom set has a consistent cut");
    let best = candidates.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
    let mut out: Vec<Minimizer> = Vec::new();
    for c in candidates {
        if c.value <= best + 1e-12 * best.max(1.0) && out.iter().all(|o| dist(o.theta, c.theta) > 1e-9) {
            out.push(c);
        }
    }
    out.sort_by(|a, b| a.theta.theta().total_cmp(&b.theta.theta()));
    Ok(out)
}

/// Histogram bins are the arcs `[−π + 2πk/B, −π + 2π(k+1)/B)`.
pub fn bin_center(k: usize, bins: usize) -> CirclePoint {
    CirclePoint::wrap(-PI + TAU * (k as f64 + 0.5) / bins as f64)
}

/// Index of the histogram bin containing `x`.
pub fn bin_index(x: CirclePoint, bins: usize) -> usize {
    let k = ((x.theta() + PI) / TAU * bins as f64).floor() as usize;
    k.min(bins - 1)
}

/// Summed mass of the bins whose centres lie within `δ` of a minimizer.
/// `hist` holds bin probabilities (summing to 1). With an empty minimizer
/// list the potential is taken as flat and the mass is 1.
pub fn neighborhood_mass(hist: &[f64], minima: &[CirclePoint], delta: f64) -> Result<f64> {
    let bins = hist.len();
    if bins == 0 {
        return Err(Error::Precondition("empty histogram".into()));
    }
    let width = TAU / bins as f64;
    if delta < width * (1.0 - 1e-12) {
        return Err(Error::Precondition(format!("δ = {delta} is below the bin width {width}")));
    }
    if delta >= PI || minima.is_empty() {
        return Ok(hist.iter().sum());
    }
    Ok(hist
        .iter()
        .enumerate()
        .filter(|(k, _)| {
            let c = bin_center(*k, bins);
            minima.iter().any(|x| dist(c, *x) <= delta + 1e-12)
        })
        .map(|(_, h)| h)
        .sum())
}
