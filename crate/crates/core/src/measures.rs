//! Target measures `ν` on the circle.
//!
//! Densities are expressed with respect to the normalized uniform measure
//! `λ = dx / 2π`, so the uniform measure has density 1 everywhere. A density
//! `f` with respect to Lebesgue measure corresponds to `2π f` here.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{dist, CirclePoint};
use crate::quadrature::simpson;
use crate::{Error, Result};

/// Grid size used for validation scans, rejection envelopes and Hölder constants.
pub const SCAN_GRID: usize = 4096;
const ENVELOPE_SAFETY: f64 = 1.001;
const HOLDER_SAFETY: f64 = 1.001;
const SMOOTHING_NODES: usize = 2048;

/// Hölder regularity `|ν(x) − ν(y)| ≤ A d(x, y)^a` of a density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Holder {
    pub a: f64,
    #[serde(rename = "A")]
    pub constant: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VonMises {
    pub location: CirclePoint,
    pub concentration: f64,
    pub weight: f64,
    inv_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeasureKind {
    Uniform,
    /// `1 + Σ_k cos_k cos(kx) + sin_k sin(kx)`, `k ≥ 1`.
    TrigPoly { cos: Vec<f64>, sin: Vec<f64> },
    VonMisesMixture(Vec<VonMises>),
    /// Linear interpolation of `values[j]` at `−π + 2πj/n`, periodic.
    PiecewiseLinear { values: Vec<f64> },
    Empirical { atoms: Vec<CirclePoint>, weights: Vec<f64>, cumulative: Vec<f64> },
}

/// A probability measure on the circle.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleMeasure {
    kind: MeasureKind,
    holder: Option<Holder>,
    envelope: f64,
}

/// JSON form of a measure, tagged by `"type"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    Uniform {},
    #[serde(rename = "trigpoly")]
    TrigPoly {
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
        #[serde(default)]
        holder: Option<Holder>,
    },
    VonmisesMixture {
        locations: Vec<f64>,
        concentrations: Vec<f64>,
        weights: Vec<f64>,
        #[serde(default)]
        holder: Option<Holder>,
    },
    Piecewise {
        values: Vec<f64>,
        #[serde(default)]
        holder: Option<Holder>,
    },
    Empirical {
        atoms: Vec<f64>,
        #[serde(default)]
        weights: Option<Vec<f64>>,
    },
}

/// `exp(−κ) I₀(κ)`.
pub(crate) fn bessel_i0_scaled(kappa: f64) -> f64 {
    let k = kappa.abs();
    if k <= 30.0 {
        let q = 0.25 * k * k;
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..200 {
            term *= q / (j as f64 * j as f64);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum * (-k).exp()
    } else {
        // Asymptotic series; terms keep shrinking well past j = 20 for κ > 30.
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..=20 {
            let odd = (2 * j - 1) as f64;
            term *= odd * odd / (j as f64 * 8.0 * k);
            sum += term;
        }
        sum / (TAU * k).sqrt()
    }
}

impl CircleMeasure {
    pub fn uniform() -> Self {
        CircleMeasure {
            kind: MeasureKind::Uniform,
            holder: Some(Holder { a: 1.0, constant: 0.0 }),
            envelope: 1.0,
        }
    }

    /// Trigonometric polynomial density `1 + Σ c_k cos kx + s_k sin kx`.
    /// Rejected when negative somewhere on the scan grid.
    pub fn trig_poly(cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if cos.iter().chain(sin.iter()).any(|c| !c.is_finite()) {
            return Err(Error::InvalidMeasure("non-finite trig coefficient".into()));
        }
        Self::finish_density(MeasureKind::TrigPoly { cos, sin })
    }

    /// Mixture of von Mises densities. Weights are normalized to sum to 1.
    pub fn von_mises_mixture(locations: &[f64], concentrations: &[f64], weights: &[f64]) -> Result<Self> {
        if locations.is_empty()
            || locations.len() != concentrations.len()
            || locations.len() != weights.len()
        {
            return Err(Error::InvalidMeasure(
                "von Mises mixture needs equally many locations, concentrations and weights".into(),
            ));
        }
        if concentrations.iter().any(|k| !(k.is_finite() && *k >= 0.0)) {
            return Err(Error::InvalidMeasure("concentrations must be finite and ≥ 0".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidMeasure("mixture weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        let components = locations
            .iter()
            .zip(concentrations)
            .zip(weights)
            .map(|((&mu, &kappa), &w)| {
                Ok(VonMises {
                    location: crate::geometry::canonical(mu)?,
                    concentration: kappa,
                    weight: w / total,
                    inv_norm: 1.0 / bessel_i0_scaled(kappa),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::finish_density(MeasureKind::VonMisesMixture(components))
    }

    /// Piecewise-linear density through `values` at the nodes `−π + 2πj/n`.
    /// The values are rescaled so the density integrates to 1.
    pub fn piecewise_linear(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidMeasure("piecewise density needs at least 2 nodes".into()));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidMeasure("piecewise values must be finite and ≥ 0".into()));
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        if mean <= 0.0 {
            return Err(Error::InvalidMeasure("piecewise density is identically zero".into()));
        }
        let values = values.into_iter().map(|v| v / mean).collect();
        Self::finish_density(MeasureKind::PiecewiseLinear { values })
    }

    /// Weighted atoms. Weights must be positive and sum to 1 within 1e−12;
    /// atoms must be distinct.
    pub fn empirical(atoms: &[f64], weights: &[f64]) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != weights.len() {
            return Err(Error::InvalidMeasure("empirical measure needs one weight per atom".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidMeasure("atom weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMeasure(format!("atom weights sum to {total}, not 1")));
        }
        let atoms = atoms
            .iter()
            .map(|&a| crate::geometry::canonical(a))
            .collect::<Result<Vec<_>>>()?;
        let mut sorted: Vec<f64> = atoms.iter().map(|a| a.theta()).collect();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidMeasure("atoms must be distinct".into()));
        }
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Ok(CircleMeasure {
            kind: MeasureKind::Empirical { atoms, weights: weights.to_vec(), cumulative },
            holder: None,
            envelope: f64::INFINITY,
        })
    }

    /// Equally weighted atoms.
    pub fn empirical_uniform(atoms: &[f64]) -> Result<Self> {
        let w = vec![1.0 / atoms.len() as f64; atoms.len()];
        Self::empirical(atoms, &w)
    }

    /// Builds a measure from its JSON description.
    pub fn from_spec(spec: &MeasureSpec) -> Result<Self> {
        let (measure, holder) = match spec {
            MeasureSpec::Uniform {} => (Self::uniform(), None),
            MeasureSpec::TrigPoly { cos, sin, holder } => (Self::trig_poly(cos.clone(), sin.clone())?, *holder),
            MeasureSpec::VonmisesMixture { locations, concentrations, weights, holder } => {
                (Self::von_mises_mixture(locations, concentrations, weights)?, *holder)
            }
            MeasureSpec::Piecewise { values, holder } => (Self::piecewise_linear(values.clone())?, *holder),
            MeasureSpec::Empirical { atoms, weights } => match weights {
                Some(w) => (Self::empirical(atoms, w)?, None),
                None => (Self::empirical_uniform(atoms)?, None),
            },
        };
        match holder {
            Some(h) => measure.with_holder(h),
            None => Ok(measure),
        }
    }

    fn finish_density(kind: MeasureKind) -> Result<Self> {
        let mut m = CircleMeasure { kind, holder: None, envelope: 1.0 };
        let mut max_density: f64 = 0.0;
        let mut max_slope: f64 = 0.0;
        for i in 0..SCAN_GRID {
            let x = CirclePoint::wrap(-PI + TAU * i as f64 / SCAN_GRID as f64);
            let v = m.density_unchecked(x);
            if v < -1e-9 {
                return Err(Error::InvalidMeasure(format!(
                    "density is negative ({v:.3e}) at θ = {}",
                    x.theta()
                )));
            }
            max_density = max_density.max(v);
            max_slope = max_slope.max(m.density_slope(x).abs());
        }
        m.envelope = match &m.kind {
            MeasureKind::PiecewiseLinear { values } => values.iter().cloned().fold(0.0, f64::max),
            _ => max_density * ENVELOPE_SAFETY,
        };
        let constant = match &m.kind {
            MeasureKind::Uniform => 0.0,
            MeasureKind::PiecewiseLinear { values } => {
                let n = values.len();
                let h = TAU / n as f64;
                (0..n).map(|j| (values[(j + 1) % n] - values[j]).abs() / h).fold(0.0, f64::max)
            }
            _ => max_slope * HOLDER_SAFETY,
        };
        m.holder = Some(Holder { a: 1.0, constant });
        Ok(m)
    }

    /// Overrides the declared Hölder regularity.
    pub fn with_holder(mut self, holder: Holder) -> Result<Self> {
        if self.is_atomic() {
            return Err(Error::InvalidMeasure("atomic measures carry no Hölder constant".into()));
        }
        if !(holder.a > 0.0 && holder.a <= 1.0 && holder.constant >= 0.0) {
            return Err(Error::InvalidMeasure("Hölder exponent must lie in (0, 1] and A ≥ 0".into()));
        }
        self.holder = Some(holder);
        Ok(self)
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn holder(&self) -> Option<Holder> {
        self.holder
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self.kind, MeasureKind::Empirical { .. })
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.kind, MeasureKind::Uniform)
    }

    /// Atoms and weights of an empirical measure.
    pub fn atoms(&self) -> Option<(&[CirclePoint], &[f64])> {
        match &self.kind {
            MeasureKind::Empirical { atoms, weights, .. } => Some((atoms, weights)),
            _ => None,
        }
    }

    /// Density with respect to `λ` at `x`.
    pub fn density(&self, x: CirclePoint) -> Result<f64> {
        if self.is_atomic() {
            return Err(Error::NoDensity);
        }
        Ok(self.density_unchecked(x))
    }

    pub(crate) fn density_unchecked(&self, x: CirclePoint) -> f64 {
        let t = x.theta();
        match &self.kind {
            MeasureKind::Uniform => 1.0,
            MeasureKind::TrigPoly { cos, sin } => {
                let mut v = 1.0;
                for (k, c) in cos.iter().enumerate() {
                    v += c * ((k + 1) as f64 * t).cos();
                }
                for (k, s) in sin.iter().enumerate() {
                    v += s * ((k + 1) as f64 * t).sin();
                }
                v
            }
            MeasureKind::VonMisesMixture(components) => components
                .iter()
                .map(|c| c.weight * c.inv_norm * (c.concentration * ((t - c.location.theta()).cos() - 1.0)).exp())
                .sum(),
            MeasureKind::PiecewiseLinear { values } => {
                let n = values.len();
                let pos = (t + PI) / TAU * n as f64;
                let j = (pos.floor() as usize).min(n - 1);
                let frac = pos - j as f64;
                values[j % n] * (1.0 - frac) + values[(j + 1) % n] * frac
            }
            MeasureKind::Empirical { .. } => f64::NAN,
        }
    }

    /// Derivative of the density in θ (one-sided on piecewise nodes).
    pub fn density_slope(&self, x: CirclePoint) -> f64 {
        let t = x.theta();
        match &self.kind {
            MeasureKind::Uniform => 0.0,
            MeasureKind::TrigPoly { cos, sin } => {
                let mut v = 0.0;
                for (k, c) in cos.iter().enumerate() {
                    let kf = (k + 1) as f64;
                    v -= c * kf * (kf * t).sin();
                }
                for (k, s) in sin.iter().enumerate() {
                    let kf = (k + 1) as f64;
                    v += s * kf * (kf * t).cos();
                }
                v
            }
            MeasureKind::VonMisesMixture(components) => components
                .iter()
                .map(|c| {
                    let u = t - c.location.theta();
                    -c.concentration * u.sin() * c.weight * c.inv_norm * (c.concentration * (u.cos() - 1.0)).exp()
                })
                .sum(),
            MeasureKind::PiecewiseLinear { values } => {
                let n = values.len();
                let pos = (t + PI) / TAU * n as f64;
                let j = (pos.floor() as usize).min(n - 1);
                (values[(j + 1) % n] - values[j % n]) * n as f64 / TAU
            }
            MeasureKind::Empirical { .. } => f64::NAN,
        }
    }

    /// Draws one exact sample from `ν`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CirclePoint {
        match &self.kind {
            MeasureKind::Uniform => uniform_point(rng),
            MeasureKind::VonMisesMixture(components) => {
                let c = if components.len() == 1 {
                    &components[0]
                } else {
                    let u: f64 = rng.random();
                    let mut acc = 0.0;
                    let mut chosen = &components[components.len() - 1];
                    for c in components {
                        acc += c.weight;
                        if u < acc {
                            chosen = c;
                            break;
                        }
                    }
                    chosen
                };
                sample_von_mises(c.location, c.concentration, rng)
            }
            MeasureKind::TrigPoly { .. } | MeasureKind::PiecewiseLinear { .. } => loop {
                let x = uniform_point(rng);
                let u: f64 = rng.random();
                if u * self.envelope < self.density_unchecked(x) {
                    break x;
                }
            },
            MeasureKind::Empirical { atoms, cumulative, .. } => {
                let u: f64 = rng.random::<f64>() * cumulative[cumulative.len() - 1];
                let idx = cumulative.partition_point(|&c| c <= u).min(atoms.len() - 1);
                atoms[idx]
            }
        }
    }

    /// Density of `ν_κ`, the image of `ν` under the smoothing kernel `K_{·,κ}`:
    /// `2πκ ∫ (1 − κ d(y, z))₊ ν(dy)`.
    pub fn smoothed_density(&self, kappa: f64, z: CirclePoint) -> Result<f64> {
        check_kernel(kappa)?;
        match &self.kind {
            MeasureKind::Uniform => Ok(1.0),
            MeasureKind::Empirical { atoms, weights, .. } => Ok(TAU
                * kappa
                * atoms
                    .iter()
                    .zip(weights)
                    .map(|(a, w)| w * (1.0 - kappa * dist(*a, z)).max(0.0))
                    .sum::<f64>()),
            _ => {
                // In Lebesgue units: κ ∫_{−1/κ}^{1/κ} (1 − κ|u|) ν(z + u) du, split at the kink.
                let r = 1.0 / kappa;
                let f = |u: f64| (1.0 - kappa * u.abs()) * self.density_unchecked(z.rotate(u));
                let half = SMOOTHING_NODES / 2;
                Ok(kappa * (simpson(f, -r, 0.0, half) + simpson(f, 0.0, r, half)))
            }
        }
    }
}

fn check_kernel(kappa: f64) -> Result<()> {
    if !(kappa.is_finite() && kappa > 1.0 / PI) {
        return Err(Error::KernelTooWide(kappa));
    }
    Ok(())
}

pub(crate) fn uniform_point<R: Rng + ?Sized>(rng: &mut R) -> CirclePoint {
    // (−π, π]
    let u: f64 = rng.random();
    CirclePoint::wrap(PI - TAU * u)
}

/// Best–Fisher rejection sampler for the von Mises law.
fn sample_von_mises<R: Rng + ?Sized>(mu: CirclePoint, kappa: f64, rng: &mut R) -> CirclePoint {
    if kappa < 1e-8 {
        return uniform_point(rng);
    }
    let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
    let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
    let r = (1.0 + rho * rho) / (2.0 * rho);
    loop {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        let z = (PI * u1).cos();
        let f = (1.0 + r * z) / (r + z);
        let c = kappa * (r - f);
        if c * (2.0 - c) > u2 || (c / u2).ln() + 1.0 >= c {
            let u3: f64 = rng.random();
            let angle = f.clamp(-1.0, 1.0).acos();
            return mu.rotate(if u3 < 0.5 { -angle } else { angle });
        }
    }
}

/// Draws from `K_{y,κ}`: `y + v` with `v` triangular on `[−1/κ, 1/κ]`.
pub fn kernel_sample<R: Rng + ?Sized>(y: CirclePoint, kappa: f64, rng: &mut R) -> Result<CirclePoint> {
    check_kernel(kappa)?;
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    Ok(y.rotate((u1 - u2) / kappa))
}
