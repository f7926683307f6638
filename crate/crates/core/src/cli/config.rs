//! JSON run configuration. Unknown keys are rejected everywhere.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::geometry::CirclePoint;
use crate::measures::MeasureSpec;
use crate::potential::DEFAULT_GRID;
use crate::schedules::ScheduleSpec;
use crate::simulator::{Algorithm, Initial, SimConfig, MAX_EULER_DT};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub measure: MeasureSpec,
    pub p: f64,
    #[serde(default)]
    pub schedule: Option<ScheduleSpec>,
    #[serde(default)]
    pub sim: Option<SimSpec>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default = "default_threads")]
    pub threads: usize,
    /// Potential grid size for depth estimates and Gibbs comparisons.
    #[serde(default = "default_grid")]
    pub grid_n: usize,
    #[serde(default)]
    pub oracle: OracleSpec,
    #[serde(default)]
    pub gibbs: GibbsSpec,
    #[serde(default)]
    pub diagnose: DiagnoseSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSpec {
    pub algorithm: Algorithm,
    pub t_end: f64,
    pub checkpoints: Vec<f64>,
    #[serde(default = "default_n_traj")]
    pub n_traj: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_euler_dt")]
    pub euler_dt: f64,
    #[serde(default)]
    pub initial: InitialSpec,
    /// Centres for the neighbourhood mass; the potential minima when absent.
    #[serde(default)]
    pub minima: Option<Vec<f64>>,
}

/// `"uniform"` or a fixed angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialSpec {
    Named(String),
    Angle(f64),
}

impl Default for InitialSpec {
    fn default() -> Self {
        InitialSpec::Named("uniform".into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    #[serde(default = "default_oracle_n")]
    pub n: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl Default for OracleSpec {
    fn default() -> Self {
        OracleSpec { n: default_oracle_n(), tol: default_tol() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GibbsSpec {
    #[serde(default)]
    pub betas: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnoseSpec {
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default = "default_betas")]
    pub betas: Vec<f64>,
    #[serde(default = "default_diag_grid")]
    pub grid_n: usize,
    #[serde(default = "default_quad")]
    pub n_quad: usize,
}

impl Default for DiagnoseSpec {
    fn default() -> Self {
        DiagnoseSpec { alphas: default_alphas(), betas: default_betas(), grid_n: default_diag_grid(), n_quad: default_quad() }
    }
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}
fn default_threads() -> usize {
    1
}
fn default_grid() -> usize {
    DEFAULT_GRID
}
fn default_n_traj() -> usize {
    1
}
fn default_bins() -> usize {
    128
}
fn default_delta() -> f64 {
    0.1
}
fn default_euler_dt() -> f64 {
    MAX_EULER_DT
}
fn default_oracle_n() -> usize {
    8192
}
fn default_tol() -> f64 {
    1e-10
}
fn default_alphas() -> Vec<f64> {
    vec![1e-4, 3e-4, 1e-3, 3e-3]
}
fn default_betas() -> Vec<f64> {
    vec![2.0]
}
fn default_diag_grid() -> usize {
    256
}
fn default_quad() -> usize {
    crate::diagnostics::DEFAULT_ADJOINT_QUAD
}

/// A configuration problem, reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| ConfigError(format!("{}: {}", path.display(), e.0)))
    }

    /// Parses and validates a configuration. Parse errors carry the line
    /// and column reported by the JSON reader.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError(m.to_string()));
        if !(self.p.is_finite() && self.p >= 1.0) {
            return bad("p must be ≥ 1");
        }
        if self.threads == 0 {
            return bad("threads must be ≥ 1");
        }
        if self.grid_n < 256 {
            return bad("grid_n must be ≥ 256");
        }
        if let Some(sim) = &self.sim {
            if sim.n_traj == 0 {
                return bad("sim.n_traj must be ≥ 1");
            }
            if sim.bins == 0 || !self.grid_n.is_multiple_of(sim.bins) {
                return bad("sim.bins must divide grid_n");
            }
            if let InitialSpec::Named(name) = &sim.initial {
                if name != "uniform" {
                    return bad("sim.initial must be \"uniform\" or an angle");
                }
            }
        }
        Ok(())
    }

    pub fn sim_spec(&self) -> Result<&SimSpec, ConfigError> {
        self.sim.as_ref().ok_or_else(|| ConfigError("config has no \"sim\" section".into()))
    }

    pub fn schedule_spec(&self) -> Result<&ScheduleSpec, ConfigError> {
        self.schedule.as_ref().ok_or_else(|| ConfigError("config has no \"schedule\" section".into()))
    }

    pub fn sim_config(&self) -> Result<SimConfig, ConfigError> {
        let sim = self.sim_spec()?;
        let initial = match sim.initial {
            InitialSpec::Angle(a) => Initial::Fixed(CirclePoint::new(a).map_err(|e| ConfigError(e.to_string()))?),
            InitialSpec::Named(_) => Initial::Uniform,
        };
        let cfg = SimConfig {
            algorithm: sim.algorithm,
            p: self.p,
            t_end: sim.t_end,
            checkpoints: sim.checkpoints.clone(),
            seed: sim.seed,
            euler_dt: sim.euler_dt,
            initial,
        };
        cfg.validate().map_err(|e| ConfigError(e.to_string()))?;
        Ok(cfg)
    }
}
