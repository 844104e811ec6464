use thiserror::Error;

use crate::product::RankedEigenvalue;

/// Errors produced by the spectral, complexity and classification routines.
///
/// Divergent series are not errors: they are reported in-band through
/// [`crate::spectra::PowerSum::Divergent`] and
/// [`crate::product::TracePower::Divergent`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("series diverges at coordinate {coordinate}")]
    Divergent { coordinate: usize },

    #[error("tail error bound {achieved:e} exceeds the requested tolerance {requested:e}")]
    Precision { achieved: f64, requested: f64 },

    #[error("enumeration budget of {budget} heap nodes exhausted after {} ranked values", partial.len())]
    Cap {
        budget: usize,
        partial: Vec<RankedEigenvalue>,
    },

    #[error("target tail {target:e} lies below the cancellation floor {floor:e}")]
    Resolution { target: f64, floor: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag used in CLI error payloads.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ParameterDomain(_) => "parameter_domain",
            Error::DegenerateSpectrum(_) => "degenerate_spectrum",
            Error::Divergent { .. } => "divergent",
            Error::Precision { .. } => "precision",
            Error::Cap { .. } => "cap",
            Error::Resolution { .. } => "resolution",
            Error::Precondition(_) => "precondition",
            Error::NumericalFailure(_) => "numerical_failure",
            Error::Unsupported(_) => "unsupported",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::ParameterDomain(msg.into()))
}
