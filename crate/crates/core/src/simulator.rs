//! Trajectories of the three annealing algorithms and the ensemble runner.
//!
//! - **X**: Brownian motion on the circle, interrupted at the events of a
//!   clock with rate `1/α_t` by jumps `x ← γ(x, Y, (p/2) α_T β_T d^{p−1})`
//!   towards fresh samples `Y ~ ν`.
//! - **Z**: as X, with each target replaced by a draw from the kernel
//!   `K_{Y,κ_T}`, so atomic measures become usable.
//! - **X̃**: the diffusion `dX = dB + (p/2) β_t d^{p−1}(X, Y) γ̇ dt`
//!   integrated by Euler–Maruyama, with `Y` redrawn at every clock event.
//!
//! # Random streams
//!
//! Trajectory `i` of a run with master seed `s` owns the ChaCha8 stream
//! keyed by `(s, i, MAIN)`. Each inter-jump Brownian segment draws its full
//! increment from that stream; positions at checkpoints inside a segment are
//! filled in by Brownian-bridge draws from a separate stream keyed by
//! `(s, i, n)` for segment `n`. Adding or removing checkpoints therefore
//! never changes the path at other times.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{jump_target, signed_gap, CirclePoint};
use crate::gibbs::{chi2_grid, gibbs_build, tv_grid};
use crate::measures::{kernel_sample, uniform_point, CircleMeasure};
use crate::oracle::{bin_index, neighborhood_mass};
use crate::potential::{refine_minima, u_value, PotentialGrid, DEFAULT_GRID};
use crate::schedules::Schedule;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    X,
    Z,
    XTilde,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Initial {
    Uniform,
    Fixed(CirclePoint),
}

/// Largest Euler step accepted for X̃.
pub const MAX_EULER_DT: f64 = 1e-2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimConfig {
    pub algorithm: Algorithm,
    pub p: f64,
    pub t_end: f64,
    pub checkpoints: Vec<f64>,
    pub seed: u64,
    pub euler_dt: f64,
    pub initial: Initial,
}

impl SimConfig {
    pub fn new(algorithm: Algorithm, p: f64, t_end: f64, checkpoints: Vec<f64>, seed: u64) -> Result<Self> {
        let cfg = SimConfig { algorithm, p, t_end, checkpoints, seed, euler_dt: MAX_EULER_DT, initial: Initial::Uniform };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_initial(mut self, initial: Initial) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_euler_dt(mut self, dt: f64) -> Result<Self> {
        self.euler_dt = dt;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.p.is_finite() && self.p >= 1.0) {
            return bad(format!("p must be ≥ 1, got {}", self.p));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return bad(format!("t_end must be > 0, got {}", self.t_end));
        }
        for w in self.checkpoints.windows(2) {
            if !(w[0] < w[1]) {
                return bad("checkpoints must be strictly increasing".into());
            }
        }
        if let (Some(first), Some(last)) = (self.checkpoints.first(), self.checkpoints.last()) {
            if !(*first > 0.0) || *last > self.t_end {
                return bad("checkpoints must lie in (0, t_end]".into());
            }
        }
        if !(self.euler_dt > 0.0 && self.euler_dt <= MAX_EULER_DT) {
            return bad(format!("euler_dt must lie in (0, {MAX_EULER_DT}], got {}", self.euler_dt));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    /// Position at each configured checkpoint.
    pub checkpoints: Vec<CirclePoint>,
    /// Clock events in `[0, t_end]` (jumps for X and Z, target refreshes for X̃).
    pub jump_count: u64,
    pub final_position: CirclePoint,
}

const MAIN_LANE: u64 = u64::MAX;
const STREAM_DOMAIN: u64 = 0x706d_6561_6e73_0001;

fn stream_key(seed: u64, index: u64, lane: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    key[16..24].copy_from_slice(&lane.to_le_bytes());
    key[24..].copy_from_slice(&STREAM_DOMAIN.to_le_bytes());
    key
}

/// The random streams owned by one trajectory.
pub struct Streams {
    seed: u64,
    index: u64,
    main: ChaCha8Rng,
}

impl Streams {
    pub fn new(seed: u64, index: u64) -> Self {
        Streams { seed, index, main: ChaCha8Rng::from_seed(stream_key(seed, index, MAIN_LANE)) }
    }

    pub fn main(&mut self) -> &mut ChaCha8Rng {
        &mut self.main
    }

    fn segment(&self, n: u64) -> ChaCha8Rng {
        ChaCha8Rng::from_seed(stream_key(self.seed, self.index, n))
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn start(cfg: &SimConfig, rng: &mut ChaCha8Rng) -> CirclePoint {
    match cfg.initial {
        Initial::Uniform => uniform_point(rng),
        Initial::Fixed(x) => x,
    }
}

/// Simulates algorithm X. Atomic measures are accepted although the
/// convergence theory asks for a density.
pub fn run_x(m: &CircleMeasure, s: &Schedule, cfg: &SimConfig, streams: &mut Streams) -> Result<TrajectoryRecord> {
    run_jumps(m, s, cfg, streams, false)
}

/// Simulates algorithm Z. Fails if `κ_T ≤ 1/π` at a jump.
pub fn run_z(m: &CircleMeasure, s: &Schedule, cfg: &SimConfig, streams: &mut Streams) -> Result<TrajectoryRecord> {
    if s.kappa_spec().is_none() {
        return Err(Error::InvalidSchedule("algorithm Z needs a κ schedule".into()));
    }
    run_jumps(m, s, cfg, streams, true)
}

fn run_jumps(
    m: &CircleMeasure,
    s: &Schedule,
    cfg: &SimConfig,
    streams: &mut Streams,
    smooth: bool,
) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    let half_p = 0.5 * cfg.p;
    let mut x = start(cfg, &mut streams.main);
    let mut t = 0.0;
    let mut segment = 0u64;
    let mut next_cp = 0usize;
    let mut out = Vec::with_capacity(cfg.checkpoints.len());
    loop {
        let tau: f64 = Exp1.sample(&mut streams.main);
        let t_jump = s.next_jump_time(t, tau);
        let end = t_jump.min(cfg.t_end);
        let total = (end - t).sqrt() * normal(&mut streams.main);
        if next_cp < cfg.checkpoints.len() && cfg.checkpoints[next_cp] <= end {
            let mut bridge = streams.segment(segment);
            let (mut tb, mut wb) = (t, 0.0);
            while next_cp < cfg.checkpoints.len() && cfg.checkpoints[next_cp] <= end {
                let c = cfg.checkpoints[next_cp];
                let w = if c >= end {
                    total
                } else {
                    let rest = end - tb;
                    let mean = wb + (c - tb) / rest * (total - wb);
                    let var = (c - tb) * (end - c) / rest;
                    mean + var.sqrt() * normal(&mut bridge)
                };
                out.push(x.rotate(w));
                tb = c;
                wb = w;
                next_cp += 1;
            }
        }
        x = x.rotate(total);
        if t_jump > cfg.t_end {
            break;
        }
        let y = m.sample(&mut streams.main);
        let target = if smooth {
            let kappa = s.kappa(t_jump).unwrap_or(0.0);
            kernel_sample(y, kappa, &mut streams.main)?
        } else {
            y
        };
        let step = half_p * s.alpha(t_jump) * s.beta(t_jump);
        x = jump_target(x, target, cfg.p, step);
        t = t_jump;
        segment += 1;
    }
    Ok(TrajectoryRecord { checkpoints: out, jump_count: segment, final_position: x })
}

/// Simulates the diffusion X̃ by Euler–Maruyama with step `cfg.euler_dt`,
/// shortened so clock events and checkpoints fall on step boundaries.
pub fn run_xtilde(m: &CircleMeasure, s: &Schedule, cfg: &SimConfig, streams: &mut Streams) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    let rng = &mut streams.main;
    let half_p = 0.5 * cfg.p;
    let mut x = start(cfg, rng);
    let mut y = m.sample(rng);
    let mut next_event = s.next_jump_time(0.0, Exp1.sample(rng));
    let mut events = 0u64;
    let mut t = 0.0;
    let mut next_cp = 0usize;
    let mut out = Vec::with_capacity(cfg.checkpoints.len());
    while t < cfg.t_end {
        let mut stop = (t + cfg.euler_dt).min(cfg.t_end).min(next_event);
        if let Some(c) = cfg.checkpoints.get(next_cp) {
            stop = stop.min(*c);
        }
        let dt = stop - t;
        let gap = signed_gap(x, y);
        let drift = if gap == 0.0 {
            0.0
        } else {
            let d = gap.abs();
            let pull = if cfg.p == 2.0 { d } else { d.powf(cfg.p - 1.0) };
            dt * half_p * s.beta(t) * pull * gap.signum()
        };
        if drift.abs() > FRAC_PI_2 {
            return Err(Error::DriftStepTooLarge { step: drift, t });
        }
        x = x.rotate(dt.sqrt() * normal(rng) + drift);
        t = stop;
        if cfg.checkpoints.get(next_cp) == Some(&t) {
            out.push(x);
            next_cp += 1;
        }
        if t == next_event && t <= cfg.t_end {
            y = m.sample(rng);
            events += 1;
            next_event = s.next_jump_time(t, Exp1.sample(rng));
        }
    }
    Ok(TrajectoryRecord { checkpoints: out, jump_count: events, final_position: x })
}

/// Runs the configured algorithm for trajectory `index`.
pub fn run_trajectory(m: &CircleMeasure, s: &Schedule, cfg: &SimConfig, index: u64) -> Result<TrajectoryRecord> {
    let mut streams = Streams::new(cfg.seed, index);
    match cfg.algorithm {
        Algorithm::X => run_x(m, s, cfg, &mut streams),
        Algorithm::Z => run_z(m, s, cfg, &mut streams),
        Algorithm::XTilde => run_xtilde(m, s, cfg, &mut streams),
    }
}

/// Runs trajectories `0..n_traj` in parallel; the result is ordered by index.
pub fn run_trajectories(m: &CircleMeasure, s: &Schedule, cfg: &SimConfig, n_traj: usize) -> Result<Vec<TrajectoryRecord>> {
    (0..n_traj as u64).into_par_iter().map(|i| run_trajectory(m, s, cfg, i)).collect()
}

/// Ensemble settings beyond the per-trajectory configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleOptions {
    pub bins: usize,
    /// Neighbourhood radius around the minimizers.
    pub delta: f64,
    /// Potential grid size for the Gibbs comparison (a multiple of `bins`).
    pub grid_n: usize,
    /// Minimizers to measure concentration around; computed from the
    /// potential grid when absent.
    pub minima: Option<Vec<CirclePoint>>,
}

impl Default for EnsembleOptions {
    fn default() -> Self {
        EnsembleOptions { bins: 128, delta: 0.1, grid_n: DEFAULT_GRID, minima: None }
    }
}

/// Ensemble statistics at one checkpoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckpointSummary {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub kappa: Option<f64>,
    /// Bin probabilities over `[−π + 2πk/B, −π + 2π(k+1)/B)`.
    pub hist: Vec<f64>,
    pub tv: f64,
    /// `None` when the Gibbs density underflows in some bin.
    pub chi2: Option<f64>,
    pub nbhd_mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JumpStats {
    pub mean: f64,
    pub min: u64,
    pub max: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleSummary {
    pub n_traj: usize,
    pub bins: usize,
    pub delta: f64,
    pub minima: Vec<CirclePoint>,
    pub checkpoints: Vec<CheckpointSummary>,
    pub jumps: JumpStats,
}

impl EnsembleSummary {
    /// One JSON object per checkpoint, newline terminated.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for c in &self.checkpoints {
            out.push_str(&serde_json::to_string(c).expect("checkpoint serializes"));
            out.push('\n');
        }
        out
    }

    /// Histograms as CSV: one row per checkpoint and bin.
    pub fn histograms_csv(&self) -> String {
        let mut out = String::from("t,bin,center,mass\n");
        for c in &self.checkpoints {
            for (k, h) in c.hist.iter().enumerate() {
                let centre = -PI + TAU * (k as f64 + 0.5) / self.bins as f64;
                out.push_str(&format!("{},{},{},{}\n", c.t, k, centre, h));
            }
        }
        out
    }
}

/// Simulates `n_traj` trajectories and compares their checkpoint histograms
/// with the Gibbs measures of `U_p` at the scheduled temperatures.
pub fn run_ensemble(
    m: &CircleMeasure,
    s: &Schedule,
    cfg: &SimConfig,
    n_traj: usize,
    opts: &EnsembleOptions,
) -> Result<EnsembleSummary> {
    if n_traj == 0 {
        return Err(Error::InvalidConfig("n_traj must be ≥ 1".into()));
    }
    if opts.bins == 0 || !opts.grid_n.is_multiple_of(opts.bins) {
        return Err(Error::GridMismatch(opts.grid_n, opts.bins));
    }
    let records = run_trajectories(m, s, cfg, n_traj)?;
    let grid = PotentialGrid::build(cfg.p, m, opts.grid_n);
    let minima = match &opts.minima {
        Some(v) => v.clone(),
        None => refine_minima(&grid, |x| u_value(cfg.p, m, x), 1e-10).points(),
    };
    summarize(&records, s, cfg, &grid, &minima, opts)
}

/// Reduces trajectory records (in index order) to an ensemble summary.
pub fn summarize(
    records: &[TrajectoryRecord],
    s: &Schedule,
    cfg: &SimConfig,
    grid: &PotentialGrid,
    minima: &[CirclePoint],
    opts: &EnsembleOptions,
) -> Result<EnsembleSummary> {
    let n = records.len() as f64;
    let bins = opts.bins;
    let mut checkpoints = Vec::with_capacity(cfg.checkpoints.len());
    for (j, &t) in cfg.checkpoints.iter().enumerate() {
        let mut hist = vec![0.0; bins];
        for r in records {
            hist[bin_index(r.checkpoints[j], bins)] += 1.0;
        }
        hist.iter_mut().for_each(|h| *h /= n);
        let v = s.evaluate(t);
        let gibbs = gibbs_build(grid, v.beta).coarsen(bins)?;
        let density: Vec<f64> = hist.iter().map(|h| h * bins as f64).collect();
        let tv = tv_grid(&density, &gibbs)?;
        let chi2 = chi2_grid(&density, &gibbs).ok();
        let nbhd_mass = neighborhood_mass(&hist, minima, opts.delta)?;
        checkpoints.push(CheckpointSummary { t, alpha: v.alpha, beta: v.beta, kappa: v.kappa, hist, tv, chi2, nbhd_mass });
    }
    let counts = records.iter().map(|r| r.jump_count);
    let jumps = JumpStats {
        mean: records.iter().map(|r| r.jump_count as f64).sum::<f64>() / n,
        min: counts.clone().min().unwrap_or(0),
        max: counts.max().unwrap_or(0),
    };
    Ok(EnsembleSummary { n_traj: records.len(), bins, delta: opts.delta, minima: minima.to_vec(), checkpoints, jumps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedules::{Alpha, Beta, PowerKappa};

    fn frozen(alpha: f64, beta: f64) -> Schedule {
        Schedule::new(Alpha::Constant(alpha), Beta::Constant(beta), None).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::new(Algorithm::X, 2.0, 1.0, vec![0.5, 0.5], 1).is_err());
        assert!(SimConfig::new(Algorithm::X, 2.0, 1.0, vec![2.0], 1).is_err());
        assert!(SimConfig::new(Algorithm::X, 0.5, 1.0, vec![], 1).is_err());
        let c = SimConfig::new(Algorithm::XTilde, 2.0, 1.0, vec![1.0], 1).unwrap();
        assert!(c.with_euler_dt(0.05).is_err());
    }

    #[test]
    fn forced_jump_lands_on_single_atom() {
        // α β = 1 and p = 2: the first jump lands exactly on the atom.
        let m = CircleMeasure::empirical(&[0.0], &[1.0]).unwrap();
        let s = frozen(0.5, 2.0);
        let cfg = SimConfig::new(Algorithm::X, 2.0, 50.0, vec![], 3).unwrap();
        // Stop right after the first jump by using its time as t_end.
        let mut probe = Streams::new(3, 0);
        let _x0 = uniform_point(probe.main());
        let tau: f64 = Exp1.sample(probe.main());
        let t1 = s.next_jump_time(0.0, tau);
        let cfg = SimConfig { t_end: t1, ..cfg };
        let r = run_trajectory(&m, &s, &cfg, 0).unwrap();
        assert_eq!(r.jump_count, 1);
        assert_eq!(r.final_position, CirclePoint::ZERO);
    }

    #[test]
    fn deterministic_per_seed() {
        let m = CircleMeasure::von_mises_mixture(&[0.0, 2.5], &[6.0, 6.0], &[0.65, 0.35]).unwrap();
        let s = Schedule::annealing(1.0, 0.5).unwrap();
        let cfg = SimConfig::new(Algorithm::X, 2.0, 20.0, vec![5.0, 20.0], 11).unwrap();
        let a = run_trajectory(&m, &s, &cfg, 4).unwrap();
        let b = run_trajectory(&m, &s, &cfg, 4).unwrap();
        assert_eq!(a, b);
        let c = run_trajectory(&m, &s, &cfg, 5).unwrap();
        assert_ne!(a.final_position, c.final_position);
    }

    #[test]
    fn checkpoints_do_not_perturb_the_path() {
        let m = CircleMeasure::von_mises_mixture(&[1.0], &[2.0], &[1.0]).unwrap();
        let s = Schedule::annealing(1.0, 0.5).unwrap();
        let bare = SimConfig::new(Algorithm::X, 2.0, 10.0, vec![10.0], 5).unwrap();
        let dense = SimConfig { checkpoints: vec![0.3, 1.7, 4.25, 9.99, 10.0], ..bare.clone() };
        for i in 0..20 {
            let a = run_trajectory(&m, &s, &bare, i).unwrap();
            let b = run_trajectory(&m, &s, &dense, i).unwrap();
            assert_eq!(a.final_position, b.final_position);
            assert_eq!(a.jump_count, b.jump_count);
            assert_eq!(b.checkpoints[4], b.final_position);
        }
    }

    #[test]
    fn z_runs_on_atoms_and_rejects_wide_kernels() {
        let m = CircleMeasure::empirical(&[0.0, 1.0, 2.0], &[0.2, 0.5, 0.3]).unwrap();
        let k = PowerKappa { c2: 2.0, r3: 1.0, k: 0.25 };
        let s = Schedule::annealing(1.0, 0.5).unwrap().with_kappa(k).unwrap();
        let cfg = SimConfig::new(Algorithm::Z, 2.0, 20.0, vec![20.0], 9).unwrap();
        let r = run_trajectory(&m, &s, &cfg, 0).unwrap();
        assert!(r.jump_count > 0);
        assert_eq!(r, run_trajectory(&m, &s, &cfg, 0).unwrap());
        let wide = Schedule::annealing(1.0, 0.5).unwrap().with_kappa(PowerKappa { c2: 0.1, r3: 1.0, k: 0.25 }).unwrap();
        assert!(matches!(run_trajectory(&m, &wide, &cfg, 0), Err(Error::KernelTooWide(_))));
        let no_kappa = Schedule::annealing(1.0, 0.5).unwrap();
        assert!(run_trajectory(&m, &no_kappa, &cfg, 0).is_err());
    }

    #[test]
    fn xtilde_counts_events_and_rejects_huge_drift() {
        let m = CircleMeasure::empirical(&[0.0], &[1.0]).unwrap();
        let s = frozen(0.1, 1.0);
        let cfg = SimConfig::new(Algorithm::XTilde, 2.0, 5.0, vec![1.0, 5.0], 2).unwrap();
        let r = run_trajectory(&m, &s, &cfg, 0).unwrap();
        assert_eq!(r.checkpoints.len(), 2);
        assert!(r.jump_count > 10);
        let hot = frozen(0.1, 1e4);
        assert!(matches!(run_trajectory(&m, &hot, &cfg, 0), Err(Error::DriftStepTooLarge { .. })));
    }

    #[test]
    fn ensemble_histograms_sum_to_one() {
        let m = CircleMeasure::von_mises_mixture(&[0.5], &[3.0], &[1.0]).unwrap();
        let s = Schedule::annealing(1.0, 0.5).unwrap();
        let cfg = SimConfig::new(Algorithm::X, 2.0, 5.0, vec![1.0, 5.0], 1).unwrap();
        let opts = EnsembleOptions { grid_n: 1024, ..Default::default() };
        let e = run_ensemble(&m, &s, &cfg, 64, &opts).unwrap();
        for c in &e.checkpoints {
            assert!((c.hist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            if let Some(chi2) = c.chi2 {
                assert!(c.tv <= chi2.sqrt());
            }
        }
        assert_eq!(e.to_jsonl().lines().count(), 2);
        let one = run_ensemble(&m, &s, &cfg, 1, &opts).unwrap();
        let r = run_trajectory(&m, &s, &cfg, 0).unwrap();
        let k = bin_index(r.final_position, 128);
        assert_eq!(one.checkpoints[1].hist[k], 1.0);
    }
}
