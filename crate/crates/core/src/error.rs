use thiserror::Error;

/// Errors raised by space construction, certification, solving and generation.
///
/// Negative verdicts (an axiom failing, a certificate not holding, an orbit
/// that does not converge) are reported through the result types, never here.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("argument error: {0}")]
    Argument(String),

    #[error("coefficient error: {0}")]
    Coefficient(String),

    #[error("hypothesis error: {0}")]
    Hypothesis(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("generation error: {0}")]
    Generation(String),

    #[error("document error at {path}: {msg}")]
    Document { path: String, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
