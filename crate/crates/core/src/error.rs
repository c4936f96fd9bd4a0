use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Measurement model parameters outside their domain.
    InvalidModel(&'static str),
    /// Two robots share a position where a range enters a denominator.
    DegenerateGeometry { i: usize, j: usize },
    IndexOutOfRange { index: usize, len: usize },
    /// A caller broke a documented precondition.
    Contract(&'static str),
    NonFinite,
    /// A non-anchor has fewer range observations than the spatial dimension.
    IllPosed { robot: usize },
    /// The planning problem itself is malformed (bad start, goal in obstacle, ...).
    Scenario(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidModel(msg) => write!(f, "invalid measurement model: {msg}"),
            Error::DegenerateGeometry { i, j } => {
                write!(f, "degenerate geometry: robots {i} and {j} coincide")
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for {len} robots")
            }
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::NonFinite => f.write_str("non-finite value encountered"),
            Error::IllPosed { robot } => {
                write!(f, "ill-posed localization: robot {robot} has too few range observations")
            }
            Error::Scenario(msg) => write!(f, "invalid scenario: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
