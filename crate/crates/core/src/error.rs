use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("Molien coefficient {index} is not an integer (value {value}, residual {residual:e})")]
    MolienResidual {
        index: usize,
        value: f64,
        residual: f64,
    },

    #[error("invariant-subspace rank is ill-determined: eigenvalue {0} lies in the 0/1 gap")]
    RankPrecision(f64),

    #[error("group is not closed or not orthogonal: {0}")]
    InvalidGroup(String),

    #[error("Molien series only available up to degree {available}, need {needed}")]
    InsufficientDegree { available: usize, needed: usize },

    #[error("fixed-point inversion did not converge at z = {z:?} after {iterations} iterations")]
    NoConvergence { z: Vec<f64>, iterations: usize },

    #[error("Jacobian degenerate: 1 + w + z.grad w = {0} <= 0")]
    DegenerateJacobian(f64),

    #[error("perturbation too large: {0}")]
    TooFarFromSelfSimilar(String),

    #[error("Newton iteration diverged at t = {t} (dt = {dt}); retry with a smaller time step")]
    NewtonDivergence { t: f64, dt: f64 },

    #[error("positivity lost: min v = {0:e}")]
    PositivityLost(f64),

    #[error("fewer than four usable samples ({0}) in the fit window")]
    InsufficientSamples(usize),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
