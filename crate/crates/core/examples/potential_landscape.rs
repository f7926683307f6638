//! Tabulates U_p for a bimodal density, locates its minimizers and the
//! critical depth for several exponents p.

use pmeans::potential::{minima, PotentialGrid};
use pmeans::CircleMeasure;

fn main() -> pmeans::Result<()> {
    let m = CircleMeasure::von_mises_mixture(&[0.0, 2.5], &[6.0, 6.0], &[0.65, 0.35])?;
    for p in [1.0, 1.5, 2.0, 3.0] {
        let grid = PotentialGrid::build(p, &m, 4096);
        let depth = grid.critical_depth();
        let found = minima(p, &m, 4096, 1e-10)?;
        let points: Vec<String> = found.minimizers.iter().map(|x| format!("{:.6} (U = {:.6})", x.theta, x.value)).collect();
        println!(
            "p = {p}: range [{:.4}, {:.4}], critical depth {:.4}, minimizers {}",
            grid.min_value(),
            grid.max_value(),
            depth.b,
            points.join(", ")
        );
    }
    Ok(())
}
