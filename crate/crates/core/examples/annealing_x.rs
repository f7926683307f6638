//! Runs an ensemble of the jump-diffusion X on a bimodal density and
//! reports how it concentrates around the 2-mean.

use pmeans::oracle::grid_minimize;
use pmeans::schedules::{balanced_rate, Schedule};
use pmeans::simulator::{run_ensemble, Algorithm, EnsembleOptions, SimConfig};
use pmeans::CircleMeasure;

fn main() -> pmeans::Result<()> {
    let m = CircleMeasure::von_mises_mixture(&[0.0, 2.5], &[6.0, 6.0], &[0.65, 0.35])?;
    let best = grid_minimize(2.0, &m, 8192, 1e-10)?;
    let u_min = best.best().expect("a minimizer").value;
    let t_end = 200.0;
    let b = balanced_rate(1.0 / (1.0 + t_end), t_end, 1.0, u_min);
    let s = Schedule::annealing(1.0, b)?;
    let cfg = SimConfig::new(Algorithm::X, 2.0, t_end, vec![10.0, 50.0, 100.0, 200.0], 2024)?;
    let opts = EnsembleOptions { delta: 0.15, minima: Some(best.points()), ..Default::default() };
    let e = run_ensemble(&m, &s, &cfg, 200, &opts)?;
    println!("b = {b:.4}, minimizer {:?}, mean clock events {:.0}", e.minima, e.jumps.mean);
    for c in &e.checkpoints {
        println!("t = {:<5} β = {:<7.3} mass near minimizer = {:.3}  TV to Gibbs = {:.3}", c.t, c.beta, c.nbhd_mass, c.tv);
    }
    Ok(())
}
