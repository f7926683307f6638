//! Angles, distances and the jump map on the circle.

use pmeans::geometry::{canonical, dist, jump_target, signed_gap, CirclePoint};

fn main() -> pmeans::Result<()> {
    for a in [7.0, -3.5, std::f64::consts::PI, -std::f64::consts::PI] {
        println!("canonical({a}) = {}", canonical(a)?.theta());
    }

    let x = CirclePoint::new(3.0)?;
    let y = CirclePoint::new(-3.0)?;
    println!("d({x}, {y}) = {:.6}, signed gap = {:.6}", dist(x, y), signed_gap(x, y));

    // Antipodal pairs resolve anticlockwise.
    let o = CirclePoint::ZERO;
    println!("gap to antipode = {}", signed_gap(o, o.antipode()));

    for p in [1.0, 1.5, 2.0, 3.0] {
        let z = jump_target(x, y, p, 0.25);
        println!("p = {p}: jump from {x} towards {y} with s = 0.25 lands at {z}");
    }
    Ok(())
}
