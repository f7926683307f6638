//! Intrinsic p-means of probability measures on the circle.
//!
//! The crate simulates annealed jump-diffusions whose time marginals
//! concentrate on the global minimizers of
//! `U_p(x) = ∫ d(x, y)^p ν(dy)`, and provides the deterministic machinery
//! needed to check them: quadrature of `U_p` and its derivatives, Gibbs
//! measures, critical depths, brute-force and exact mean oracles, and an
//! evaluation of the generator adjoint applied to constants.
//!
//! Module map:
//!
//! - [`geometry`]: canonical angles, geodesic distance, the jump map.
//! - [`measures`]: target measures, exact samplers, the smoothing kernel.
//! - [`potential`]: `U_p`, `U_p'`, `U_p''`, minima, elevations, critical depth.
//! - [`gibbs`]: Gibbs grids, masses, TV and chi-square comparisons.
//! - [`schedules`]: `(α_t, β_t, κ_t)`, jump-clock inversion, validation.
//! - [`simulator`]: the X, Z and X̃ algorithms and the ensemble runner.
//! - [`oracle`]: grid minimization and the exact p = 2 empirical mean.
//! - [`diagnostics`]: adjoint evaluation, scaling study, wrapped-Gaussian KS.
//! - [`cli`]: the `pmeans` command surface.

pub mod cli;
pub mod diagnostics;
mod error;
pub mod geometry;
pub mod gibbs;
pub mod measures;
pub mod oracle;
pub mod potential;
mod quadrature;
pub mod schedules;
pub mod simulator;
pub mod stats;

pub use error::{Error, Result};
pub use geometry::CirclePoint;
pub use measures::CircleMeasure;
pub use schedules::Schedule;
