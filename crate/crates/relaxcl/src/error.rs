use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix has eigenvalue {value:.3e} below the semidefinite clamp")]
    NegativeEigenvalue { value: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eig:.3e})")]
    NotPositiveDefinite { min_eig: f64 },

    #[error("linear system is singular")]
    Singular,

    #[error("eigenvalue iteration did not converge")]
    EigenNoConvergence,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("strictness hypothesis violated: {0}")]
    NotStrict(String),

    #[error("I - λX is singular at λ = {0}")]
    ResolventSingular(Complex64),

    #[error("truncated Hankel operator is not a strict contraction (smallest eigenvalue of I - A*A is {min_eig:.3e})")]
    HankelNotStrict { min_eig: f64 },

    #[error("leading corner of the defect Gram is not positive definite")]
    CornerNotPd,

    #[error("the intertwining constraint has only the zero solution for this draw")]
    EmptySolutionSpace,

    #[error("data is not in classical shape: {0}")]
    NotClassicalShape(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
