use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:.6e} below tolerance)")]
    NotPsd(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("unphysical observables: {0}")]
    UnphysicalObservables(String),

    #[error("unphysical covariance: symplectic eigenvalue {0:.9} below 1")]
    UnphysicalCovariance(f64),

    #[error("invalid fluctuation model: {0}")]
    InvalidModel(String),

    #[error("infeasible scenario: {0}")]
    InfeasibleScenario(String),

    #[error("threshold search failed to bracket a root: {0}")]
    Bracket(String),

    #[error("rate curve is not monotone: {0}")]
    NonMonotone(String),

    #[error("insufficient statistical power: {0}")]
    InsufficientPower(String),

    #[error("memory budget exceeded: {0}")]
    MemoryBudget(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
