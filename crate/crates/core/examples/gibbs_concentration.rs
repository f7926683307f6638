//! Gibbs measures of U_2 concentrate on its minimizers as β grows.

use pmeans::gibbs::{gibbs_build, gibbs_mass, hwang_weights};
use pmeans::potential::{minima, PotentialGrid};
use pmeans::CircleMeasure;

fn main() -> pmeans::Result<()> {
    // Symmetric trimodal density: U_2 has several equal minima.
    let m = CircleMeasure::trig_poly(vec![0.0, 0.0, 0.5], vec![])?;
    let grid = PotentialGrid::build(2.0, &m, 4096);
    let found = minima(2.0, &m, 4096, 1e-10)?;
    let centres = found.points();
    println!("minimizers: {:?}", centres.iter().map(|c| c.theta()).collect::<Vec<_>>());
    for beta in [0.0, 1.0, 10.0, 100.0, 1000.0] {
        let g = gibbs_build(&grid, beta);
        println!("β = {beta:<6} mass within 0.2 of the minimizers = {:.4}", gibbs_mass(&g, &centres, 0.2));
    }
    println!("zero-temperature weights: {:?}", hwang_weights(&centres, &m)?);
    Ok(())
}
