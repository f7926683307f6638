//! Builds each family of measures on the circle, draws samples and checks
//! the sample mean resultant against the density.

use std::f64::consts::{PI, TAU};

use pmeans::{CircleMeasure, CirclePoint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn resultant_from_density(m: &CircleMeasure) -> (f64, f64) {
    let n = 4096;
    let (mut c, mut s) = (0.0, 0.0);
    for i in 0..n {
        let t = -PI + TAU * i as f64 / n as f64;
        let d = m.density(CirclePoint::wrap(t)).unwrap();
        c += d * t.cos() / n as f64;
        s += d * t.sin() / n as f64;
    }
    (c, s)
}

fn main() -> pmeans::Result<()> {
    let measures = [
        ("uniform", CircleMeasure::uniform()),
        ("trig polynomial", CircleMeasure::trig_poly(vec![0.6], vec![0.2])?),
        ("von Mises mixture", CircleMeasure::von_mises_mixture(&[0.0, 2.5], &[6.0, 6.0], &[0.65, 0.35])?),
        ("piecewise linear", CircleMeasure::piecewise_linear(vec![0.2, 1.0, 3.0, 1.0])?),
        ("empirical", CircleMeasure::empirical(&[-1.0, 0.5, 2.0], &[0.2, 0.5, 0.3])?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 100_000;
    for (name, m) in &measures {
        let (mut c, mut s) = (0.0, 0.0);
        for _ in 0..n {
            let x = m.sample(&mut rng).theta();
            c += x.cos() / n as f64;
            s += x.sin() / n as f64;
        }
        let exact = match m.atoms() {
            Some((atoms, weights)) => atoms.iter().zip(weights).fold((0.0, 0.0), |(c, s), (a, w)| {
                (c + w * a.theta().cos(), s + w * a.theta().sin())
            }),
            None => resultant_from_density(m),
        };
        println!(
            "{name:<18} E[cos, sin] sampled ({c:+.4}, {s:+.4})  exact ({:+.4}, {:+.4})",
            exact.0, exact.1
        );
    }
    Ok(())
}
