//! Measures how sup |L*_{α,β} 1| scales with α and β for p = 2.

use pmeans::diagnostics::lstar_scaling_study;
use pmeans::CircleMeasure;

fn main() -> pmeans::Result<()> {
    let m = CircleMeasure::trig_poly(vec![0.0, 0.3], vec![0.2])?;
    let table = lstar_scaling_study(&m, &[1e-4, 3e-4, 1e-3, 3e-3], &[1.0, 2.0], 128, 4096)?;
    print!("{}", table.to_csv());
    for s in &table.slopes {
        println!("β = {}: log-log slope in α = {:.3}", s.beta, s.slope);
    }
    for g in &table.beta_growth {
        println!("α = {}: β {} → {} grows by {:.2} (envelope {:.2})", g.alpha, g.beta_from, g.beta_to, g.ratio, g.envelope);
    }
    Ok(())
}
