//! Transfer-matrix optics of planar dielectric multilayers.
//!
//! Stacks are lossless and dispersion-free. Angles are measured in the
//! ambient medium; inside each layer the propagation angle follows Snell's
//! law with complex cosines, so evanescent layers and total internal
//! reflection are handled without special cases.

mod group_delay;
mod layer;
mod stopband;
mod tmm;

use thiserror::Error;

pub use group_delay::{group_delay_length, group_delay_length_with_step, GroupDelay, GROUP_DELAY_REL_STEP};
pub use layer::{materials, quarter_wave_stack, Layer, LayerStack};
pub use stopband::{stopband, stopband_at, Stopband, StopbandSearch, Threshold, DEFAULT_STOPBAND_THRESHOLD};
pub use tmm::{reflectivity_spectrum, stack_response, Polarization, Reflector, StackResponse};

#[derive(Debug, Error, PartialEq)]
pub enum OpticsError {
    #[error("refractive index {0} is below 1 or not finite")]
    InvalidIndex(f64),
    #[error("layer thickness {0} nm must be positive and finite")]
    InvalidThickness(f64),
    #[error("high index {high} must exceed low index {low}")]
    IndexOrder { high: f64, low: f64 },
    #[error("wavelength {0} nm must be positive and finite")]
    InvalidWavelength(f64),
    #[error("angle {0} rad must lie in [0, pi/2)")]
    InvalidAngle(f64),
    #[error("threshold {0} must lie strictly between 0 and 1")]
    InvalidThreshold(f64),
    #[error("search range [{0}, {1}] nm is empty or invalid")]
    InvalidRange(f64, f64),
    #[error("no stopband: peak reflectance {peak:.6} stays below threshold {threshold:.6}")]
    NoStopband { peak: f64, threshold: f64 },
    #[error("finite-difference step {0} must lie in (0, 0.1)")]
    InvalidStep(f64),
    #[error(transparent)]
    Spectrum(#[from] crate::spectrum::SpectrumError),
}
