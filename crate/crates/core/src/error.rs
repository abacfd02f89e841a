use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spin must be a non-negative half-integer, got {0}")]
    InvalidSpin(f64),
    #[error("matrix dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("evaluation at the origin is undefined")]
    Origin,
    #[error("no solutions exist for g = 0 with k != 0")]
    NoSolution,
    #[error("constraint g*hbar*k = 1 violated, residual {residual:e}")]
    ConstraintViolation { residual: f64 },
    #[error("kappa2 is only admissible in case I")]
    Kappa2OutsideCaseI,
    #[error("kappa1 must vanish in case III")]
    Kappa1InCaseIII,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("collision: trajectory reached r = {r:e} at step {step}")]
    Collision { r: f64, step: usize },
    #[error("degenerate trajectory: {0}")]
    Degenerate(String),
    #[error("Kummer function pole: c = {0} is a non-positive integer")]
    KummerPole(f64),
    #[error("Kummer argument |x| = {0} outside the guarded range")]
    KummerOverflow(f64),
    #[error("invalid quantum numbers: {0}")]
    QuantumNumbers(String),
    #[error("supercritical coupling: {0}")]
    Supercritical(String),
    #[error("no bound state: {0}")]
    NoBoundState(String),
    #[error("grid too coarse: relative change {0:e} between resolutions")]
    GridTooCoarse(f64),
    #[error("potential unbounded below on the grid: {0}")]
    UnboundedBelow(String),
    #[error("series does not terminate: {0}")]
    NonTerminating(String),
}
