use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A caller broke an operation's precondition (mismatched dimensions,
    /// empty input where one is required, assignment outside its domain).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("capacity exceeded: {what} needs {requested} entries, budget is {budget}")]
    Capacity {
        what: &'static str,
        requested: String,
        budget: u64,
    },

    #[error("overflow risk: constraint {constraint} may exceed the accumulator range")]
    OverflowRisk { constraint: usize },

    #[error("invalid instance: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}
