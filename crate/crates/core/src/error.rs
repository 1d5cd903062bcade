use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A special-function argument lies outside the supported box, or the
    /// result would overflow `f64`.
    #[error("erf argument {re} + {im}i is outside the supported domain: {reason}")]
    Domain { re: f64, im: f64, reason: &'static str },

    #[error("flux parameter {0} is not in [0, 1)")]
    InvalidFlux(f64),

    /// The two labels of an inner product carry different flux parameters.
    #[error("labels belong to different quantizations (theta {0} vs {1})")]
    InvalidPair(f64, f64),

    /// No symmetry maps the label pair into the closed-form overlap range.
    #[error("label pair (alpha {alpha}, beta {beta}) has no closed-form reduction")]
    UnsupportedRange { alpha: f64, beta: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
