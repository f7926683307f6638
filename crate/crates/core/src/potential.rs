//! The cost landscape `U_p(x) = ∫ d(x, y)^p ν(dy)` and its derivatives.
//!
//! For densities every integral is taken in the chart `y = x + u`,
//! `u ∈ [−π, π]`, split at `u = 0` so the kink of `|u|^p` sits on a panel
//! boundary; each half uses composite Simpson. Empirical measures are summed
//! exactly.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{dist, signed_gap, CirclePoint};
use crate::measures::{CircleMeasure, MeasureKind};
use crate::quadrature::{golden_section, simpson};
use crate::{Error, Result};

/// Default quadrature size (panels over the full chart).
pub const DEFAULT_QUAD: usize = 4096;
/// Default potential grid size.
pub const DEFAULT_GRID: usize = 4096;
/// Half-width of the excluded window around `u = 0` in the `p ∈ (1, 2)` Hessian.
const HESS_EXCLUSION: f64 = 1e-4;
const SINGULAR_TOL: f64 = 1e-12;

#[inline]
fn powp(d: f64, p: f64) -> f64 {
    if p == 2.0 {
        d * d
    } else if p == 1.0 {
        d
    } else if p == 3.0 {
        d * d * d
    } else {
        d.powf(p)
    }
}

fn check_p(p: f64) {
    assert!(p.is_finite() && p >= 1.0, "p must be ≥ 1, got {p}");
}

fn half_chart_integrals<F: Fn(f64) -> f64>(m: &CircleMeasure, x: CirclePoint, weight: F, n: usize) -> (f64, f64) {
    let half = (n / 2).max(2);
    let left = simpson(|u| weight(-u) * m.density_unchecked(x.rotate(u)), -PI, 0.0, half);
    let right = simpson(|u| weight(u) * m.density_unchecked(x.rotate(u)), 0.0, PI, half);
    (left, right)
}

/// `U_p(x)` with the default quadrature size.
///
/// # Panics
/// If `p < 1`.
pub fn u_value(p: f64, m: &CircleMeasure, x: CirclePoint) -> f64 {
    u_value_n(p, m, x, DEFAULT_QUAD)
}

/// `U_p(x)` with `n` quadrature panels.
pub fn u_value_n(p: f64, m: &CircleMeasure, x: CirclePoint, n: usize) -> f64 {
    check_p(p);
    match m.kind() {
        MeasureKind::Uniform => PI.powf(p) / (p + 1.0),
        MeasureKind::Empirical { atoms, weights, .. } => {
            atoms.iter().zip(weights).map(|(a, w)| w * powp(dist(x, *a), p)).sum()
        }
        _ => {
            let (l, r) = half_chart_integrals(m, x, |u| powp(u, p), n);
            (l + r) / TAU
        }
    }
}

/// `U_p'(x)`: `p (∫_{x−π}^{x} (x−y)^{p−1} ν(dy) − ∫_{x}^{x+π} (y−x)^{p−1} ν(dy))`.
///
/// For atomic measures with `p < 2` the derivative does not exist at atoms
/// or their antipodes and a [`Error::SingularPoint`] is returned.
pub fn u_grad(p: f64, m: &CircleMeasure, x: CirclePoint) -> Result<f64> {
    u_grad_n(p, m, x, DEFAULT_QUAD)
}

pub fn u_grad_n(p: f64, m: &CircleMeasure, x: CirclePoint, n: usize) -> Result<f64> {
    check_p(p);
    match m.kind() {
        MeasureKind::Uniform => Ok(0.0),
        MeasureKind::Empirical { atoms, weights, .. } => {
            let mut acc = 0.0;
            for (a, w) in atoms.iter().zip(weights) {
                let g = signed_gap(x, *a);
                if p < 2.0 && (g.abs() < SINGULAR_TOL || g > PI - SINGULAR_TOL) {
                    return Err(Error::SingularPoint { theta: x.theta(), p });
                }
                acc -= w * p * g.signum() * powp(g.abs(), p - 1.0);
            }
            Ok(acc)
        }
        _ => {
            let (l, r) = half_chart_integrals(m, x, |u| powp(u, p - 1.0), n);
            Ok(p * (l - r) / TAU)
        }
    }
}

/// `U_p''(x)` for densities:
/// `p(p−1) ∫ d^{p−2}(y, x) ν(dy) − p π^{p−2} ν(x')` for `p > 1`,
/// `(ν(x) − ν(x')) / π` for `p = 1`.
pub fn u_hess(p: f64, m: &CircleMeasure, x: CirclePoint) -> Result<f64> {
    u_hess_n(p, m, x, DEFAULT_QUAD)
}

pub fn u_hess_n(p: f64, m: &CircleMeasure, x: CirclePoint, n: usize) -> Result<f64> {
    check_p(p);
    if m.is_atomic() {
        return Err(Error::DistributionalOnly);
    }
    let nu_x = m.density_unchecked(x);
    let nu_anti = m.density_unchecked(x.antipode());
    if p == 1.0 {
        return Ok((nu_x - nu_anti) / PI);
    }
    if p == 2.0 {
        return Ok(2.0 - 2.0 * nu_anti);
    }
    let integral = if m.is_uniform() {
        PI.powf(p - 2.0) / (p - 1.0)
    } else if p >= 2.0 {
        let (l, r) = half_chart_integrals(m, x, |u| powp(u, p - 2.0), n);
        (l + r) / TAU
    } else {
        // Exclude (−ε, ε), where |u|^{p−2} blows up, and replace it by
        // ν(x) ∫_{−ε}^{ε} |u|^{p−2} du. Outside, substitute u = ε (π/ε)^s so
        // the integrand becomes smooth in s.
        let eps = HESS_EXCLUSION;
        let log_ratio = (PI / eps).ln();
        let mapped = |s: f64, sign: f64| {
            let u = eps * (s * log_ratio).exp();
            u.powf(p - 1.0) * log_ratio * m.density_unchecked(x.rotate(sign * u))
        };
        let right = simpson(|s| mapped(s, 1.0), 0.0, 1.0, n);
        let left = simpson(|s| mapped(s, -1.0), 0.0, 1.0, n);
        let core = 2.0 * nu_x * eps.powf(p - 1.0) / (p - 1.0);
        (left + right + core) / TAU
    };
    Ok(p * (p - 1.0) * integral - p * PI.powf(p - 2.0) * nu_anti)
}

/// A global minimizer candidate of `U_p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Minimizer {
    pub theta: CirclePoint,
    pub value: f64,
}

/// The set `𝓜_p` at grid resolution. A flat potential is reported as
/// degenerate with no listed points; every point of the circle is then a
/// minimizer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimaSet {
    pub degenerate: bool,
    pub minimizers: Vec<Minimizer>,
}

impl MinimaSet {
    pub fn points(&self) -> Vec<CirclePoint> {
        self.minimizers.iter().map(|m| m.theta).collect()
    }

    /// The minimizer with the smallest value.
    pub fn best(&self) -> Option<Minimizer> {
        self.minimizers.iter().copied().min_by(|a, b| a.value.total_cmp(&b.value))
    }
}

/// `U_p` sampled at `θ_i = 2πi/n` (reduced to `(−π, π]`).
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialGrid {
    p: f64,
    values: Vec<f64>,
    lipschitz: f64,
    min_value: f64,
}

/// Critical depths of a potential grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalDepth {
    /// `max_{x,y} U(x,y) − U(x) − U(y) + min U` over all grid pairs.
    pub b: f64,
    /// `max_y U(x₀,y) − U(y)` for one grid argmin `x₀`.
    pub b_alt: f64,
    /// Minimum of the `b_alt` expression over all grid global minimizers.
    pub b_prime: f64,
}

impl PotentialGrid {
    /// Evaluates `U_p` of `m` on an `n`-point grid.
    pub fn build(p: f64, m: &CircleMeasure, n: usize) -> Self {
        Self::build_with_quadrature(p, m, n, DEFAULT_QUAD)
    }

    pub fn build_with_quadrature(p: f64, m: &CircleMeasure, n: usize, n_quad: usize) -> Self {
        check_p(p);
        assert!(n >= 4, "grid too small");
        let values: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| u_value_n(p, m, grid_point(i, n), n_quad))
            .collect();
        Self::assemble(p, values)
    }

    /// Wraps precomputed values (e.g. a hand-built potential).
    pub fn from_values(p: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 4 || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("potential grid needs ≥ 4 finite values".into()));
        }
        Ok(Self::assemble(p, values))
    }

    fn assemble(p: f64, values: Vec<f64>) -> Self {
        let n = values.len();
        let h = TAU / n as f64;
        let lipschitz = (0..n).map(|i| (values[(i + 1) % n] - values[i]).abs() / h).fold(0.0, f64::max);
        let min_value = values.iter().cloned().fold(f64::INFINITY, f64::min);
        PotentialGrid { p, values, lipschitz, min_value }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.values.len() as f64
    }

    /// Largest slope between neighbouring grid values.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn theta(&self, i: usize) -> CirclePoint {
        grid_point(i, self.values.len())
    }

    /// True when the grid values agree to round-off.
    pub fn is_flat(&self) -> bool {
        let spread = self.max_value() - self.min_value;
        spread <= 1e-12 * self.max_value().abs().max(1.0)
    }

    /// Indices of discrete local minima (plateaus included).
    pub fn local_minima(&self) -> Vec<usize> {
        let n = self.values.len();
        (0..n)
            .filter(|&i| {
                let v = self.values[i];
                v <= self.values[(i + n - 1) % n] && v <= self.values[(i + 1) % n]
            })
            .collect()
    }

    /// Grid local minima within `L·h` of the grid minimum.
    pub fn global_minimum_indices(&self) -> Vec<usize> {
        let slack = self.lipschitz * self.spacing();
        self.local_minima()
            .into_iter()
            .filter(|&i| self.values[i] <= self.min_value + slack)
            .collect()
    }

    /// Minimal elevation `U(x_i, x_j)`: the smaller of the running maxima
    /// along the two arcs joining `i` and `j`.
    pub fn elevation(&self, i: usize, j: usize) -> f64 {
        let n = self.values.len();
        assert!(i < n && j < n, "grid index out of range");
        let forward = (0..=((j + n - i) % n)).map(|k| self.values[(i + k) % n]).fold(f64::NEG_INFINITY, f64::max);
        let backward = (0..=((i + n - j) % n)).map(|k| self.values[(i + n - k) % n]).fold(f64::NEG_INFINITY, f64::max);
        forward.min(backward)
    }

    /// For row `i`: `max_j U(x_i, x_j) − U(x_j)`.
    fn row_depth(&self, i: usize) -> f64 {
        let n = self.values.len();
        let v = &self.values;
        let mut fwd = vec![0.0; n];
        let mut bwd = vec![0.0; n];
        fwd[0] = v[i];
        bwd[0] = v[i];
        for k in 1..n {
            fwd[k] = fwd[k - 1].max(v[(i + k) % n]);
            bwd[k] = bwd[k - 1].max(v[(i + n - k) % n]);
        }
        let mut best = 0.0_f64;
        for k in 0..n {
            let elev = fwd[k].min(bwd[(n - k) % n]);
            best = best.max(elev - v[(i + k) % n]);
        }
        best
    }

    /// Brute-force critical depths over all grid pairs.
    pub fn critical_depth(&self) -> CriticalDepth {
        let n = self.values.len();
        let rows: Vec<f64> = (0..n).into_par_iter().map(|i| self.row_depth(i)).collect();
        let b = rows
            .iter()
            .zip(&self.values)
            .map(|(r, v)| r - v + self.min_value)
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0);
        let argmin = (0..n).min_by(|&a, &c| self.values[a].total_cmp(&self.values[c])).unwrap_or(0);
        let b_alt = rows[argmin];
        let b_prime = self
            .global_minimum_indices()
            .into_iter()
            .map(|i| rows[i])
            .fold(b_alt, f64::min);
        CriticalDepth { b, b_alt, b_prime }
    }

    /// Grid nodes and values as CSV with header `theta,U_p`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,U_p\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{}\n", self.theta(i).theta(), v));
        }
        out
    }
}

pub(crate) fn grid_point(i: usize, n: usize) -> CirclePoint {
    CirclePoint::wrap(TAU * i as f64 / n as f64)
}

/// Global minimizers of `U_p` on an `n`-point grid, refined by golden-section
/// search to bracket width `tol`.
pub fn minima(p: f64, m: &CircleMeasure, n: usize, tol: f64) -> Result<MinimaSet> {
    if n < 64 {
        return Err(Error::Precondition(format!("minima needs a grid of at least 64 points, got {n}")));
    }
    let grid = PotentialGrid::build(p, m, n);
    Ok(refine_minima(&grid, |x| u_value(p, m, x), tol))
}

/// Refines the grid local minima of `grid` with `f` and keeps those within
/// `L·h + tol` of the best refined value.
pub fn refine_minima<F: Fn(CirclePoint) -> f64 + Sync>(grid: &PotentialGrid, f: F, tol: f64) -> MinimaSet {
    if grid.is_flat() {
        return MinimaSet { degenerate: true, minimizers: Vec::new() };
    }
    let h = grid.spacing();
    let slack = grid.lipschitz() * h + tol;
    let candidates: Vec<usize> = grid
        .local_minima()
        .into_iter()
        .filter(|&i| grid.values()[i] <= grid.min_value() + 2.0 * slack)
        .collect();
    let mut refined: Vec<Minimizer> = candidates
        .par_iter()
        .map(|&i| {
            let centre = grid.theta(i);
            let (t, v) = golden_section(|t| f(centre.rotate(t)), -h, h, tol);
            if v <= grid.values()[i] {
                Minimizer { theta: centre.rotate(t), value: v }
            } else {
                Minimizer { theta: centre, value: grid.values()[i] }
            }
        })
        .collect();
    let best = refined.iter().map(|m| m.value).fold(f64::INFINITY, f64::min);
    refined.retain(|m| m.value <= best + slack);
    refined.sort_by(|a, b| a.value.total_cmp(&b.value));
    // Neighbouring grid minima of one plateau refine to the same point.
    let mut merged: Vec<Minimizer> = Vec::new();
    for m in refined {
        if merged.iter().all(|k| dist(k.theta, m.theta) > 2.0 * h) {
            merged.push(m);
        }
    }
    merged.sort_by(|a, b| a.theta.theta().total_cmp(&b.theta.theta()));
    MinimaSet { degenerate: false, minimizers: merged }
}
