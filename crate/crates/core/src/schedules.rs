//! Annealing schedules `(α_t, β_t, κ_t)`.
//!
//! - `α_t = C₁ (r₁ + t)^{−c}`: jump clock scale, jumps arrive at rate `1/α_t`.
//! - `β_t = ln(r₂ + t) / b`: inverse temperature.
//! - `κ_t = C₂ (r₃ + t)^k`: inverse kernel width for the regularized algorithm.
//!
//! Constant variants exist for experiments that freeze one component.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Alpha {
    Power { c1: f64, r1: f64, c: f64 },
    Constant(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Beta {
    Log { b: f64, r2: f64 },
    Constant(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerKappa {
    pub c2: f64,
    pub r3: f64,
    pub k: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    alpha: Alpha,
    beta: Beta,
    kappa: Option<PowerKappa>,
}

/// Schedule values at one time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScheduleValues {
    pub alpha: f64,
    pub beta: f64,
    pub kappa: Option<f64>,
    pub beta_prime: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSchedule(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl Schedule {
    pub fn new(alpha: Alpha, beta: Beta, kappa: Option<PowerKappa>) -> Result<Self> {
        match alpha {
            Alpha::Power { c1, r1, c } => {
                positive("C1", c1)?;
                positive("r1", r1)?;
                positive("c", c)?;
            }
            Alpha::Constant(v) => positive("alpha", v)?,
        }
        match beta {
            Beta::Log { b, r2 } => {
                positive("b", b)?;
                if !(r2.is_finite() && r2 >= 1.0) {
                    return Err(Error::InvalidSchedule(format!("r2 must be ≥ 1, got {r2}")));
                }
            }
            Beta::Constant(v) => {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::InvalidSchedule(format!("beta must be ≥ 0, got {v}")));
                }
            }
        }
        if let Some(k) = kappa {
            positive("C2", k.c2)?;
            positive("r3", k.r3)?;
            positive("k", k.k)?;
        }
        Ok(Schedule { alpha, beta, kappa })
    }

    /// The default family `α_t = (1 + t)^{−1/a_p}`, `β_t = ln(1 + t)/b`.
    pub fn annealing(a_p: f64, b: f64) -> Result<Self> {
        positive("a_p", a_p)?;
        Self::new(Alpha::Power { c1: 1.0, r1: 1.0, c: 1.0 / a_p }, Beta::Log { b, r2: 1.0 }, None)
    }

    pub fn with_kappa(mut self, kappa: PowerKappa) -> Result<Self> {
        self.kappa = Some(kappa);
        Self::new(self.alpha, self.beta, self.kappa)
    }

    pub fn alpha_spec(&self) -> Alpha {
        self.alpha
    }

    pub fn beta_spec(&self) -> Beta {
        self.beta
    }

    pub fn kappa_spec(&self) -> Option<PowerKappa> {
        self.kappa
    }

    pub fn alpha(&self, t: f64) -> f64 {
        match self.alpha {
            Alpha::Power { c1, r1, c } if c == 1.0 => c1 / (r1 + t),
            Alpha::Power { c1, r1, c } => c1 * (r1 + t).powf(-c),
            Alpha::Constant(v) => v,
        }
    }

    pub fn beta(&self, t: f64) -> f64 {
        match self.beta {
            Beta::Log { b, r2 } => (r2 + t).ln() / b,
            Beta::Constant(v) => v,
        }
    }

    pub fn beta_prime(&self, t: f64) -> f64 {
        match self.beta {
            Beta::Log { b, r2 } => 1.0 / (b * (r2 + t)),
            Beta::Constant(_) => 0.0,
        }
    }

    pub fn kappa(&self, t: f64) -> Option<f64> {
        self.kappa.map(|k| k.c2 * (k.r3 + t).powf(k.k))
    }

    pub fn evaluate(&self, t: f64) -> ScheduleValues {
        ScheduleValues { alpha: self.alpha(t), beta: self.beta(t), kappa: self.kappa(t), beta_prime: self.beta_prime(t) }
    }

    /// `∫_{t0}^{t1} ds / α_s`, the expected number of clock events on `[t0, t1]`.
    pub fn clock_integral(&self, t0: f64, t1: f64) -> f64 {
        match self.alpha {
            Alpha::Power { c1, r1, c } => {
                ((r1 + t1).powf(c + 1.0) - (r1 + t0).powf(c + 1.0)) / (c1 * (c + 1.0))
            }
            Alpha::Constant(v) => (t1 - t0) / v,
        }
    }

    /// The `T > t_now` with `∫_{t_now}^{T} ds / α_s = τ`.
    pub fn next_jump_time(&self, t_now: f64, tau: f64) -> f64 {
        match self.alpha {
            Alpha::Power { c1, r1, c } if c == 1.0 => {
                let u = r1 + t_now;
                (u * u + 2.0 * c1 * tau).sqrt() - r1
            }
            Alpha::Power { c1, r1, c } => {
                ((r1 + t_now).powf(c + 1.0) + c1 * (c + 1.0) * tau).powf(1.0 / (c + 1.0)) - r1
            }
            Alpha::Constant(_) => self.next_jump_time_bisect(t_now, tau),
        }
    }

    /// Bisection on the clock integral. Because `α` is nonincreasing the
    /// root lies in `[t_now, t_now + τ α(t_now)]`.
    pub fn next_jump_time_bisect(&self, t_now: f64, tau: f64) -> f64 {
        let mut lo = t_now;
        let mut hi = t_now + tau * self.alpha(t_now);
        while hi - lo > 1e-13 * hi.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.clock_integral(t_now, mid) < tau {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Hölder-adjusted exponent `a(p)`: `a` for `p = 1` and `p ≥ 2`,
/// `min(a, p − 1)` for `1 < p < 2`.
pub fn a_exponent(p: f64, a: f64) -> f64 {
    if p > 1.0 && p < 2.0 {
        a.min(p - 1.0)
    } else {
        a
    }
}

/// Exponent `ã(p)`: `2(p − 1)` for `1 < p < 3/2`, else 1.
pub fn a_tilde(p: f64) -> f64 {
    if p > 1.0 && p < 1.5 {
        2.0 * (p - 1.0)
    } else {
        1.0
    }
}

/// Log-schedule rate `b` for which `β_t = ln(r₂ + t)/b` equals
/// `(α_t U_min)^{−1/2}` at time `t`. For `p = 2`, near a minimizer the
/// Brownian part of X contributes variance `1/(β U'')` and the jumps add
/// `α β U_min / U''`; this `β` minimizes their sum.
pub fn balanced_rate(alpha_t: f64, t: f64, r2: f64, u_min: f64) -> f64 {
    (r2 + t).ln() * (alpha_t * u_min).sqrt()
}

/// Outcome of [`validate`]. Warnings never block a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub p: f64,
    pub holder_a: f64,
    pub a_p: f64,
    pub a_tilde_p: f64,
    pub b: Option<f64>,
    pub b_estimate: f64,
    pub recommended_b: f64,
    /// `b > b_estimate`.
    pub rate_ok: Option<bool>,
    /// Regularized schedules only: `k > 0` and `c ≥ 2k + 1`.
    pub kappa_ok: Option<bool>,
    /// Regularized schedules only: `κ_0 > 1/π`.
    pub kappa0_ok: Option<bool>,
    /// Smallest scanned time beyond which the error terms stay below
    /// `exp(−b_estimate β_t)`; `None` if the scan up to `1e12` never settles.
    pub dominance_time: Option<f64>,
    /// Whether `∫ (1 ∨ β_t)^{−3} exp(−b_estimate β_t) dt` diverges.
    pub divergence: Option<bool>,
    pub warnings: Vec<String>,
}

const SCAN_POINTS: usize = 4000;
const SCAN_END: f64 = 1e12;

/// Checks a schedule against the sufficient conditions for convergence,
/// given an estimate of the critical depth and the Hölder exponent `a` of
/// the target density.
pub fn validate(s: &Schedule, p: f64, b_estimate: f64, holder_a: f64) -> ValidationReport {
    let a_p = a_exponent(p, holder_a);
    let at_p = a_tilde(p);
    let mut warnings = Vec::new();
    let b = match s.beta {
        Beta::Log { b, .. } => Some(b),
        Beta::Constant(_) => {
            warnings.push("constant β: not an annealing schedule".to_string());
            None
        }
    };
    let rate_ok = b.map(|b| b > b_estimate);
    if rate_ok == Some(false) {
        warnings.push(format!(
            "annealing too fast: b = {} does not exceed the estimated critical depth {}",
            b.unwrap_or(f64::NAN),
            b_estimate
        ));
    }
    if let Alpha::Constant(_) = s.alpha {
        warnings.push("constant α: the jump rate does not grow".to_string());
    }
    let (kappa_ok, kappa0_ok) = match (s.kappa, s.alpha) {
        (Some(k), Alpha::Power { c, .. }) => {
            let ok = k.k > 0.0 && c >= 2.0 * k.k + 1.0;
            if !ok {
                warnings.push(format!("regularized schedule needs c ≥ 2k + 1, got c = {c}, k = {}", k.k));
            }
            let k0 = k.c2 * k.r3.powf(k.k);
            let ok0 = k0 > 1.0 / std::f64::consts::PI;
            if !ok0 {
                warnings.push(format!("κ_0 = {k0} ≤ 1/π: kernel wider than the circle before warm-up"));
            }
            (Some(ok), Some(ok0))
        }
        (Some(_), Alpha::Constant(_)) => (Some(false), None),
        (None, _) => (None, None),
    };
    let dominance_time = dominance_scan(s, a_p, at_p, b_estimate);
    if dominance_time.is_none() {
        warnings.push("error terms do not fall below exp(−b β_t) before t = 1e12".to_string());
    }
    ValidationReport {
        p,
        holder_a,
        a_p,
        a_tilde_p: at_p,
        b,
        b_estimate,
        recommended_b: 1.1 * b_estimate,
        rate_ok,
        kappa_ok,
        kappa0_ok,
        dominance_time,
        divergence: rate_ok,
        warnings,
    }
}

fn dominance_scan(s: &Schedule, a_p: f64, at_p: f64, b_estimate: f64) -> Option<f64> {
    let holds = |t: f64| {
        let v = s.evaluate(t);
        let lhs = (v.alpha.powf(a_p) * v.beta.powi(4)).max(v.alpha.powf(at_p) * v.beta.powi(3)).max(v.beta_prime.abs());
        lhs < (-b_estimate * v.beta).exp()
    };
    let log_end = SCAN_END.log10();
    let mut first_good: Option<f64> = None;
    for i in 0..=SCAN_POINTS {
        let t = 10f64.powf(log_end * i as f64 / SCAN_POINTS as f64);
        if holds(t) {
            first_good.get_or_insert(t);
        } else {
            first_good = None;
        }
    }
    first_good
}

/// JSON form of a schedule:
/// `{"alpha": {"C1", "r1", "c"}, "beta": {"b", "r2"}, "kappa": {"C2", "r3", "k"} | null}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub alpha: AlphaSpec,
    pub beta: BetaSpec,
    #[serde(default)]
    pub kappa: Option<KappaSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaSpec {
    #[serde(rename = "C1")]
    pub c1: f64,
    pub r1: f64,
    pub c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaSpec {
    pub b: f64,
    pub r2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaSpec {
    #[serde(rename = "C2")]
    pub c2: f64,
    pub r3: f64,
    pub k: f64,
}

impl ScheduleSpec {
    pub fn build(&self) -> Result<Schedule> {
        Schedule::new(
            Alpha::Power { c1: self.alpha.c1, r1: self.alpha.r1, c: self.alpha.c },
            Beta::Log { b: self.beta.b, r2: self.beta.r2 },
            self.kappa.map(|k| PowerKappa { c2: k.c2, r3: k.r3, k: k.k }),
        )
    }
}
