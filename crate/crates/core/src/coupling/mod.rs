//! Emitter-cavity coupling in the weak-coupling regime.
//!
//! Purcell factor and the open-cavity reductions (solid angle, spectral
//! overlap), the 0-0 branching ratio, spectral filtering of a broad emitter
//! by the cavity Airy comb, and a scalar back-focal-plane angular profile.

mod bfp;
mod emitter;
mod filter;
mod purcell;

use thiserror::Error;

pub use bfp::{bfp_radial_profile, BfpCavity, RadialProfile};
pub use emitter::{Band, EmitterModel, LineShape};
pub use filter::{filtered_spectrum, spectral_overlap, Background, CavityFilter, ModeComb, Overlap};
pub use purcell::{
    branching_ratio, effective_enhancement, purcell_max, purcell_report, required_enhancement,
    rate_enhancement, solid_angle_fraction, PurcellReport,
};

#[derive(Debug, Error, PartialEq)]
pub enum CouplingError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} must be non-negative and finite, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("fraction {name} = {value} must lie strictly between 0 and 1")]
    InvalidFraction { name: &'static str, value: f64 },
    #[error("target branching ratio {target} must exceed the bare ratio {alpha0}")]
    TargetNotAbove { alpha0: f64, target: f64 },
    #[error("emitter weights sum to {0}, expected 1")]
    WeightsNotNormalized(f64),
    #[error("angle grid must be non-empty, ascending and inside [0, pi/2)")]
    InvalidAngles,
    #[error(transparent)]
    Spectrum(#[from] crate::spectrum::SpectrumError),
    #[error(transparent)]
    Cavity(#[from] crate::cavity::CavityError),
    #[error(transparent)]
    Optics(#[from] crate::optics::OpticsError),
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64, CouplingError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(CouplingError::NonPositive { name, value })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64, CouplingError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(CouplingError::Negative { name, value })
    }
}

pub(crate) fn open_fraction(name: &'static str, value: f64) -> Result<f64, CouplingError> {
    if value.is_finite() && value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(CouplingError::InvalidFraction { name, value })
    }
}
