//! Compares the jump process X with its diffusion counterpart X̃ at a
//! fixed small α and temperature.

use pmeans::schedules::{Alpha, Beta, Schedule};
use pmeans::simulator::{run_trajectories, Algorithm, SimConfig};
use pmeans::CircleMeasure;

fn moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    (xs.iter().map(|x| x.cos()).sum::<f64>() / n, xs.iter().map(|x| x.sin()).sum::<f64>() / n)
}

fn main() -> pmeans::Result<()> {
    let m = CircleMeasure::von_mises_mixture(&[0.0, 2.5], &[6.0, 6.0], &[0.65, 0.35])?;
    let s = Schedule::new(Alpha::Constant(0.01), Beta::Constant(2.0), None)?;
    for algorithm in [Algorithm::X, Algorithm::XTilde] {
        let cfg = SimConfig::new(algorithm, 2.0, 10.0, vec![10.0], 5)?;
        let runs = run_trajectories(&m, &s, &cfg, 2000)?;
        let finals: Vec<f64> = runs.iter().map(|r| r.final_position.theta()).collect();
        let (c, sn) = moments(&finals);
        println!("{algorithm:?}: E[cos] = {c:.4}, E[sin] = {sn:.4}");
    }
    Ok(())
}
