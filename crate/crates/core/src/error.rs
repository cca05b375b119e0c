use thiserror::Error;

/// Errors raised by the numerical kernels and the quantum-information layers on top of them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        actual: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix entry at index {index} is not finite")]
    NonFinite { index: usize },

    #[error("matrix is not hermitian: ||M - M^dagger||_F = {defect:e}")]
    NotHermitian { defect: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e}")]
    NotPositive { eigenvalue: f64 },

    #[error("map is not completely positive: minimal Choi eigenvalue {lambda_min:e}")]
    NotCp { lambda_min: f64 },

    #[error("map is not trace-nonincreasing: sum V_i^dagger V_i exceeds identity by {excess:e}")]
    TraceIncreasing { excess: f64 },

    #[error("map is trivial: every output is proportional to the identity")]
    TrivialMap,

    #[error("maximal output trace alpha = {alpha} is not positive")]
    NonPositiveAlpha { alpha: f64 },

    #[error("{method} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        method: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("operator dimension {dim} exceeds budget {budget}; use the eigenvalue path instead")]
    BudgetExceeded { dim: usize, budget: usize },

    #[error("moment vector is inconsistent with any spectrum: {0}")]
    InconsistentMoments(String),

    #[error("ill-conditioned moment inversion: root with imaginary part {imag:e}")]
    IllConditioned { imag: f64 },

    #[error("all outcome probabilities vanish (max {max_probability:e})")]
    DegenerateOutcomes { max_probability: f64 },

    #[error("outcome probabilities sum to {sum}, expected 1")]
    ProbabilitySum { sum: f64 },
}

impl Error {
    pub(crate) fn dims(context: &'static str, expected: impl ToString, actual: impl ToString) -> Self {
        Error::DimensionMismatch {
            context,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    /// True for failures of the numerics (as opposed to malformed or invalid input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotCp { .. }
                | Error::NoConvergence { .. }
                | Error::IllConditioned { .. }
                | Error::DegenerateOutcomes { .. }
                | Error::ProbabilitySum { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
