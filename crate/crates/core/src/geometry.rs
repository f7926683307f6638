//! Circle arithmetic on `𝕋 = ℝ / 2πℤ`.
//!
//! Every point is stored through its representative in `(−π, π]`. The
//! minimal geodesic between antipodal points is taken anticlockwise, so
//! [`signed_gap`] returns `+π` there.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point of the circle, stored as its angle in `(−π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub const ZERO: CirclePoint = CirclePoint(0.0);

    /// Reduces a finite angle to its representative in `(−π, π]`.
    pub fn new(angle: f64) -> Result<Self> {
        canonical(angle)
    }

    /// Like [`CirclePoint::new`], for angles known to be finite.
    ///
    /// # Panics
    /// If `angle` is NaN or infinite.
    pub fn wrap(angle: f64) -> Self {
        assert!(angle.is_finite(), "non-finite angle {angle}");
        CirclePoint(reduce(angle))
    }

    pub fn theta(self) -> f64 {
        self.0
    }

    /// The cut-locus point `x + π`.
    pub fn antipode(self) -> Self {
        CirclePoint::wrap(self.0 + PI)
    }

    /// Rotation by `delta` radians (anticlockwise for positive values).
    pub fn rotate(self, delta: f64) -> Self {
        CirclePoint::wrap(self.0 + delta)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

// Angles within a few ulps above π are snapped to π so that e.g. 3π lands on
// the closed end of the interval instead of just past −π.
fn reduce(angle: f64) -> f64 {
    if angle > -PI && angle <= PI {
        return angle;
    }
    let r = angle.rem_euclid(TAU);
    if r <= PI {
        r
    } else if r - PI <= 4.0 * f64::EPSILON * angle.abs().max(1.0) {
        PI
    } else {
        r - TAU
    }
}

pub fn canonical(angle: f64) -> Result<CirclePoint> {
    if !angle.is_finite() {
        return Err(Error::NonFiniteAngle(angle));
    }
    Ok(CirclePoint(reduce(angle)))
}

/// Geodesic distance, in `[0, π]`.
pub fn dist(x: CirclePoint, y: CirclePoint) -> f64 {
    signed_gap(x, y).abs()
}

/// Representative of `y − x` in `(−π, π]`.
pub fn signed_gap(x: CirclePoint, y: CirclePoint) -> f64 {
    reduce(y.0 - x.0)
}

/// The point reached after travelling arclength `s` from `x` along the
/// minimal geodesic towards `y`. The path continues past `y` when `s`
/// exceeds `dist(x, y)`.
pub fn geodesic_point(x: CirclePoint, y: CirclePoint, s: f64) -> Result<CirclePoint> {
    if s == 0.0 {
        return Ok(x);
    }
    let gap = signed_gap(x, y);
    if gap == 0.0 {
        return Err(Error::DegenerateDirection(s));
    }
    Ok(CirclePoint::wrap(x.0 + s * gap.signum()))
}

/// Jump map of the annealing algorithms: `γ(x, y, s·d(x, y)^{p−1})`.
///
/// For `p = 1` the arclength is `s` regardless of the distance. When
/// `x = y` the jump is a no-op.
pub fn jump_target(x: CirclePoint, y: CirclePoint, p: f64, s: f64) -> CirclePoint {
    let gap = signed_gap(x, y);
    if gap == 0.0 || s == 0.0 {
        return x;
    }
    let d = gap.abs();
    let arclength = if p == 1.0 {
        s
    } else if p == 2.0 {
        s * d
    } else {
        s * d.powf(p - 1.0)
    };
    CirclePoint::wrap(x.0 + arclength * gap.signum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: f64) -> CirclePoint {
        CirclePoint::wrap(a)
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical(0.0).unwrap().theta(), 0.0);
        assert_eq!(canonical(3.0 * PI).unwrap().theta(), PI);
        assert_eq!(canonical(-PI).unwrap().theta(), PI);
        assert_eq!(canonical(PI).unwrap().theta(), PI);
        assert!((canonical(-3.0 * PI / 2.0).unwrap().theta() - PI / 2.0).abs() < 1e-15);
        assert!(matches!(canonical(f64::NAN), Err(Error::NonFiniteAngle(_))));
        assert!(canonical(f64::INFINITY).is_err());
    }

    #[test]
    fn canonical_is_idempotent() {
        for k in -50..50 {
            let a = k as f64 * 0.731 - 0.1;
            let once = canonical(a).unwrap();
            assert_eq!(canonical(once.theta()).unwrap(), once);
            assert!(once.theta() > -PI && once.theta() <= PI);
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(dist(pt(0.0), pt(PI)), PI);
        assert!((dist(pt(0.1), pt(TAU - 0.1)) - 0.2).abs() < 1e-12);
        assert_eq!(dist(pt(1.3), pt(1.3)), 0.0);
    }

    #[test]
    fn signed_gap_examples() {
        assert_eq!(signed_gap(pt(0.0), pt(1.0)), 1.0);
        assert!((signed_gap(pt(3.0), pt(-3.0)) - (TAU - 6.0)).abs() < 1e-12);
        assert_eq!(signed_gap(pt(0.0), pt(PI)), PI);
        assert_eq!(signed_gap(pt(PI), pt(0.0)), PI);
    }

    #[test]
    fn geodesic_point_examples() {
        assert_eq!(geodesic_point(pt(0.0), pt(1.0), 0.5).unwrap().theta(), 0.5);
        let d = dist(pt(0.0), pt(1.0));
        assert_eq!(geodesic_point(pt(0.0), pt(1.0), d).unwrap().theta(), 1.0);
        let w = geodesic_point(pt(3.0), pt(-3.0), 0.2832).unwrap();
        assert!((w.theta() - (3.2832 - TAU)).abs() < 1e-12);
        assert!((w.theta() + 3.0).abs() < 1e-4);
        let exact = geodesic_point(pt(3.0), pt(-3.0), TAU - 6.0).unwrap();
        assert!((exact.theta() + 3.0).abs() < 1e-12);
        assert!(matches!(
            geodesic_point(pt(0.4), pt(0.4), 0.1),
            Err(Error::DegenerateDirection(_))
        ));
        assert_eq!(geodesic_point(pt(0.4), pt(0.4), 0.0).unwrap(), pt(0.4));
    }

    #[test]
    fn jump_target_examples() {
        assert!((jump_target(pt(0.0), pt(1.0), 2.0, 0.1).theta() - 0.1).abs() < 1e-15);
        assert!((jump_target(pt(3.0), pt(3.2), 2.0, 0.5).theta() - 3.1).abs() < 1e-12);
        assert_eq!(jump_target(pt(0.0), pt(1.0), 2.0, 1.0).theta(), 1.0);
        // p = 1 moves a fixed arclength and overshoots a close target.
        assert!((jump_target(pt(0.0), pt(0.05), 1.0, 0.2).theta() - 0.2).abs() < 1e-15);
        assert_eq!(jump_target(pt(0.7), pt(0.7), 1.0, 0.3), pt(0.7));
        assert_eq!(jump_target(pt(0.7), pt(-2.0), 3.0, 0.0), pt(0.7));
    }

    #[test]
    fn antipodal_jump_goes_anticlockwise() {
        let y = jump_target(pt(0.0), pt(PI), 2.0, 0.1);
        assert!((y.theta() - 0.1 * PI).abs() < 1e-15);
    }
}
