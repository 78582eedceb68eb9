use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),

    #[error("point ({x}, {y}) is outside the domain")]
    OutsideDomain { x: f64, y: f64 },

    #[error("invalid magnetic field: {0}")]
    InvalidField(String),

    #[error("parameter outside admissible regime: {0}")]
    Regime(String),

    #[error("discretization has {found} interior nodes, at least {required} required")]
    TooFewNodes { found: usize, required: usize },

    #[error("non-finite vector potential at ({x}, {y})")]
    NonFinitePotential { x: f64, y: f64 },

    #[error("shifted matrix is not positive definite (pivot {pivot} at column {column})")]
    NotPositiveDefinite { column: usize, pivot: f64 },

    #[error("eigensolver did not converge after {iterations} steps; best residuals {residuals:?}")]
    NotConverged { iterations: usize, residuals: Vec<f64> },

    #[error("quadrature did not converge: relative change {change:e} after {levels} refinements")]
    Quadrature { change: f64, levels: usize },

    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
