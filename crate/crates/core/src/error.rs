use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::cavity::CavityError;
use crate::coupling::CouplingError;
use crate::design::DesignError;
use crate::io::FormatError;
use crate::optics::OpticsError;
use crate::spectrum::SpectrumError;

/// Any error produced by this crate, tagged with the module it came from.
#[derive(Debug, Error)]
pub enum Error {
    #[error("optics: {0}")]
    Optics(#[from] OpticsError),
    #[error("cavity: {0}")]
    Cavity(#[from] CavityError),
    #[error("coupling: {0}")]
    Coupling(#[from] CouplingError),
    #[error("analysis: {0}")]
    Analysis(#[from] AnalysisError),
    #[error("design: {0}")]
    Design(#[from] DesignError),
    #[error("spectrum: {0}")]
    Spectrum(#[from] SpectrumError),
    #[error("format: {0}")]
    Format(#[from] FormatError),
}

impl Error {
    /// Short name of the originating module.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Optics(_) => "optics",
            Error::Cavity(_) => "cavity",
            Error::Coupling(_) => "coupling",
            Error::Analysis(_) => "analysis",
            Error::Design(_) => "design",
            Error::Spectrum(_) => "spectrum",
            Error::Format(_) => "format",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
