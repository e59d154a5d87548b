use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("invalid drift profile: {0}")]
    Invalid(String),
    #[error("radius {r} outside tabulated range [0, {max}]")]
    OutOfRange { r: f64, max: f64 },
    #[error("negative radius {0}")]
    NegativeRadius(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("invalid grid: {0}")]
    Invalid(String),
    #[error("field has {got} values but grid has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("field value at node {index} is not finite")]
    NonFinite { index: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("singular tridiagonal system (zero pivot at row {row})")]
    Singular { row: usize },
    #[error("non-finite value after step {step} (t = {time})")]
    Divergence { step: usize, time: f64 },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error("integration radius {radius} exceeds grid radius {r_max}")]
    RadiusOutOfDomain { radius: f64, r_max: f64 },
    #[error("weight has infinite mass; no lift-off level exists")]
    InfiniteMass,
    #[error("weight mass cannot be certified finite for this profile")]
    UncertifiedMass,
    #[error("invalid quadrature setting: {0}")]
    InvalidQuadrature(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}
