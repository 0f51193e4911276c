use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `p_k > 0` where the reference assigns zero mass.
    #[error("support violation at index {index}: p = {p}, but reference mass is 0")]
    Support { index: usize, p: f64 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid q-ary symmetric channel (q = {q}, eps = {eps}): {reason}")]
    InvalidChannel {
        q: u32,
        eps: f64,
        reason: &'static str,
    },

    #[error(
        "enumeration needs {} codeword pairs but the budget is {budget}; \
         raise --budget or use monte-carlo mode",
        pairs_display(*.required)
    )]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn pairs_display(required: u128) -> String {
    if required == u128::MAX {
        "more than 2^128".to_string()
    } else {
        required.to_string()
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
