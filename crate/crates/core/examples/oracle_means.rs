//! Intrinsic p-means from the grid oracle, and the exact 2-mean of an
//! empirical measure.

use pmeans::oracle::{exact_mean_p2_empirical, grid_minimize};
use pmeans::CircleMeasure;

fn main() -> pmeans::Result<()> {
    let m = CircleMeasure::empirical(&[-2.8, -0.4, 0.3, 2.9], &[0.1, 0.4, 0.3, 0.2])?;
    let (atoms, weights) = m.atoms().expect("atomic");
    for e in exact_mean_p2_empirical(atoms, weights)? {
        println!("exact 2-mean: {} (U = {})", e.theta, e.value);
    }
    for p in [1.0, 1.5, 2.0, 4.0] {
        let r = grid_minimize(p, &m, 8192, 1e-10)?;
        for x in &r.minimizers {
            println!("grid p = {p}: {} (U = {:.8})", x.theta, x.value);
        }
    }
    // A rotationally symmetric measure has no isolated minimizer.
    let uniform = grid_minimize(2.0, &CircleMeasure::uniform(), 1024, 1e-10)?;
    println!("uniform: degenerate = {}", uniform.degenerate);
    Ok(())
}
