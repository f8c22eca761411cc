use thiserror::Error;

/// Errors raised by the library. Statistical outcomes such as a sampler
/// failing or a collision search coming back empty are values, not errors.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("oracle index {index} out of range [1, {degree_bound}]")]
    IndexOutOfRange { index: usize, degree_bound: usize },

    #[error("graph has {n} vertices, above the exhaustive cap of {cap}; use the spectral certificate instead")]
    TooLarge { n: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("enumeration cap exceeded: {what} = {value} > {cap}")]
    Cap {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("division by zero: {0}")]
    DivisionByZero(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
