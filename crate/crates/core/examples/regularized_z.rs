//! Runs algorithm Z on an empirical measure, where the jump targets are
//! smoothed by a shrinking von Mises kernel, and compares with the exact
//! circular mean.

use pmeans::oracle::exact_mean_p2_empirical;
use pmeans::schedules::{balanced_rate, Alpha, Beta, PowerKappa, Schedule};
use pmeans::simulator::{run_ensemble, Algorithm, EnsembleOptions, SimConfig};
use pmeans::CircleMeasure;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> pmeans::Result<()> {
    let source = CircleMeasure::von_mises_mixture(&[0.0, 2.5], &[6.0, 6.0], &[0.65, 0.35])?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let atoms: Vec<f64> = (0..100).map(|_| source.sample(&mut rng).theta()).collect();
    let m = CircleMeasure::empirical_uniform(&atoms)?;
    let (a, w) = m.atoms().expect("atomic");
    let exact = exact_mean_p2_empirical(a, w)?;
    println!("exact minimizers: {:?}", exact.iter().map(|e| e.theta).collect::<Vec<_>>());

    let (c1, c, t_end): (f64, f64, f64) = (20.0, 1.5, 200.0);
    let b = balanced_rate(c1 * (1.0 + t_end).powf(-c), t_end, 1.0, exact[0].value);
    let s = Schedule::new(
        Alpha::Power { c1, r1: 1.0, c },
        Beta::Log { b, r2: 1.0 },
        Some(PowerKappa { c2: 1.0, r3: 1.0, k: 0.25 }),
    )?;
    let cfg = SimConfig::new(Algorithm::Z, 2.0, t_end, vec![20.0, 100.0, 200.0], 11)?;
    let opts = EnsembleOptions { delta: 0.2, minima: Some(exact.iter().map(|e| e.theta).collect()), ..Default::default() };
    let e = run_ensemble(&m, &s, &cfg, 100, &opts)?;
    for cp in &e.checkpoints {
        println!("t = {:<5} κ = {:<7.3} mass near the mean = {:.3}", cp.t, cp.kappa.unwrap_or(0.0), cp.nbhd_mass);
    }
    Ok(())
}
