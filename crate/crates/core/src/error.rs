use thiserror::Error;

use crate::solver::SolveReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    Lattice(String),

    #[error("box has {sites} sites, above the cap of {cap}")]
    TooManySites { sites: usize, cap: usize },

    #[error("invalid potential: {0}")]
    Potential(String),

    #[error("invalid kernel parameters: {0}")]
    Kernel(String),

    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("invalid nonlinearity: {0}")]
    Nonlinearity(String),

    #[error("shape mismatch: expected {expected} values, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The Choquard term vanishes, so the Nehari ray has no finite crossing.
    #[error("Choquard term is zero; Nehari projection undefined")]
    DegenerateChoquard,

    #[error("solver did not converge after {} iterations", .0.iterations)]
    NotConverged(Box<SolveReport>),

    #[error("kernel cache: {0}")]
    Cache(String),

    #[error("config: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
