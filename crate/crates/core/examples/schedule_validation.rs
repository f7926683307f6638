//! Checks annealing schedules against the convergence conditions.

use pmeans::potential::PotentialGrid;
use pmeans::schedules::{a_exponent, validate, Alpha, Beta, PowerKappa, Schedule};
use pmeans::CircleMeasure;

fn main() -> pmeans::Result<()> {
    let m = CircleMeasure::trig_poly(vec![0.0, 0.0, 0.4], vec![0.0, 0.1])?;
    let p = 2.0;
    let b_hat = PotentialGrid::build(p, &m, 4096).critical_depth().b;
    println!("estimated critical depth: {b_hat:.4}");

    for b in [0.5 * b_hat, 1.2 * b_hat] {
        let s = Schedule::annealing(a_exponent(p, 1.0), b)?;
        let report = validate(&s, p, b_hat, 1.0);
        println!("b = {b:.4}: rate ok = {:?}, dominated from t = {:?}", report.rate_ok, report.dominance_time);
        for w in &report.warnings {
            println!("  warning: {w}");
        }
    }

    let z = Schedule::new(
        Alpha::Power { c1: 1.0, r1: 1.0, c: 1.2 },
        Beta::Log { b: 1.2 * b_hat, r2: 1.0 },
        Some(PowerKappa { c2: 1.0, r3: 1.0, k: 0.25 }),
    )?;
    let report = validate(&z, p, b_hat, 1.0);
    println!("regularized schedule: c ≥ 2k + 1 is {:?}, κ₀ > 1/π is {:?}", report.kappa_ok, report.kappa0_ok);
    for w in &report.warnings {
        println!("  warning: {w}");
    }
    Ok(())
}
