use thiserror::Error;

/// Errors produced by the solvers and builders in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error(
        "weight range too large: p*(max b - min b) = {spread:.3} exceeds {limit}; \
         double-precision weights would underflow, use the asymptotic formulas (`asym`) instead"
    )]
    WeightRange { spread: f64, limit: f64 },

    #[error("inverse iteration did not converge after {iterations} iterations (last quotient {last_quotient:e}, gap estimate {gap_estimate:e})")]
    NoConvergence {
        iterations: usize,
        last_quotient: f64,
        gap_estimate: f64,
    },

    #[error("pivot breakdown at shift {shift:e} after {retries} retries")]
    PivotBreakdown { shift: f64, retries: usize },

    #[error("eigenvalue {index} lies below the smallest resolvable shift")]
    Unresolvable { index: usize },

    #[error("conjugate gradients stalled after {iterations} iterations, relative residual {residual:e}")]
    CgNoConvergence { iterations: usize, residual: f64 },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("overlapping supports: {0}")]
    Overlap(String),

    #[error("collar condition violated: {0}")]
    Collar(String),

    #[error("infeasible well parameters: {0}")]
    Infeasible(String),

    #[error("decay fit failed: {0}")]
    DecayFit(String),

    #[error("field has no velocity potential")]
    MissingPotential,

    #[error("zero state: {0}")]
    ZeroState(String),
}

impl Error {
    /// True for configuration/parameter problems, false for numerical failures.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidGrid(_)
                | Error::InvalidParameter(_)
                | Error::UnknownCatalog(_)
                | Error::SizeMismatch(_)
                | Error::Overlap(_)
                | Error::Infeasible(_)
                | Error::MissingPotential
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
