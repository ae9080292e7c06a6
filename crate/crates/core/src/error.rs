use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the domain of the function.
    #[error("{name} out of domain: {value}")]
    Domain { name: &'static str, value: f64 },

    /// The node placement is not a valid layout.
    #[error("invalid topology: {0}")]
    Topology(&'static str),

    /// The antenna counts are not valid for the requested scheme.
    #[error("invalid antenna configuration: {0}")]
    Antennas(String),

    /// A configuration value is invalid.
    #[error("invalid parameter: {0}")]
    Param(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64) -> Error {
    Error::Domain { name, value }
}
