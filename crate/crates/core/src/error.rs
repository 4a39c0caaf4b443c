use thiserror::Error;

/// Errors produced across the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("degenerate signal: actual and counterfactual posteriors coincide")]
    DegenerateSignal,
    #[error("inconsistent response: {0}")]
    InconsistentResponse(String),
    #[error("empty report list")]
    EmptyReports,
    #[error("aggregation error: all responses were inconsistent")]
    AllResponsesInconsistent,
}

pub type Result<T> = std::result::Result<T, Error>;
