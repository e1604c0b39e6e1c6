use thiserror::Error;

/// Errors produced by the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not Hermitian: max deviation {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("matrix is not positive definite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error(
        "ill-conditioned moment matrix at degree {degree}: condition number {cond:.3e} exceeds cap {cap:.3e}"
    )]
    IllConditioned { degree: usize, cond: f64, cap: f64 },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("numerical inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
