use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the quantity being evaluated.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid bracket [{lo}, {hi}]: {reason}")]
    InvalidBracket {
        lo: f64,
        hi: f64,
        reason: &'static str,
    },

    #[error("no convergence after {iterations} iterations")]
    MaxIterations { iterations: usize },

    #[error("no interior minimum found after growing the bracket to width {width}")]
    NoInteriorMinimum { width: f64 },

    #[error("quadrature subdivision limit reached on [{lo}, {hi}]")]
    SubdivisionLimit { lo: f64, hi: f64 },

    /// Two independent routes to the same quantity disagree.
    #[error("consistency check failed for {what}: |diff| = {diff:e} > {tol:e}")]
    Consistency { what: String, diff: f64, tol: f64 },

    #[error("{what} requires {required} but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        budget: u128,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
