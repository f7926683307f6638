use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite angle {0}")]
    NonFiniteAngle(f64),

    #[error("geodesic direction undefined: x = y with non-zero arclength {0}")]
    DegenerateDirection(f64),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("measure has no density (empirical atoms)")]
    NoDensity,

    #[error("U_p is not differentiable at {theta} (atom or antipode of an atom, p = {p})")]
    SingularPoint { theta: f64, p: f64 },

    #[error("U_p'' exists only in the distribution sense for atomic measures")]
    DistributionalOnly,

    #[error("kernel concentration {0} must exceed 1/π")]
    KernelTooWide(f64),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("grid mismatch: {0} vs {1} cells")]
    GridMismatch(usize, usize),

    #[error("Gibbs density vanishes in cell {0}")]
    ZeroGibbsCell(usize),

    #[error("degenerate zero-temperature limit: ν(x') = {0} ≥ 1 at a minimizer's antipode")]
    DegenerateLimit(f64),

    #[error("drift step {step} exceeds π/2 at t = {t}; reduce euler_dt")]
    DriftStepTooLarge { step: f64, t: f64 },

    #[error("adjoint evaluation requires αβ < 1/2 and αβ² ≤ 1/2 (α = {alpha}, β = {beta})")]
    AdjointDomain { alpha: f64, beta: f64 },

    #[error("{0}")]
    Precondition(String),
}
