//! Fitting and calibration of cavity measurements: multi-Lorentzian length
//! scans, finesse, integer-order length calibration from several laser
//! wavelengths, 2D Gaussian mode maps, and seeded synthetic versions of each.

mod calibration;
pub mod lm;
mod map;
mod peaks;
mod synth;

use thiserror::Error;

pub use calibration::{calibrate_length, LengthCalibration, OrderResidual, AMBIGUITY_RATIO};
pub use map::{fit_gaussian_2d, GaussianFit2d, ModeMap, POOR_FIT_THRESHOLD};
pub use peaks::{
    finesse_from_scan, fit_peaks_from_seeds, fit_peaks_lorentzian, lorentzian, residual_rms, seed_peaks,
    PeakFit, PeakSeed, ScanTrace,
};
pub use synth::{
    synthesize_mode_map, synthesize_resonance_positions, synthesize_scan_trace, ScanSpec,
};

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("grid is not strictly ascending at index {0}")]
    NotAscending(usize),
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("at least one peak must be requested")]
    NoPeaksRequested,
    #[error("requested {requested} peaks but only {found} were detected")]
    TooFewPeaks { requested: usize, found: usize },
    #[error("fitted peak centre {0} lies outside the scan")]
    PeakOutsideScan(f64),
    #[error("least squares did not converge in {iterations} iterations")]
    NotConverged { iterations: usize },
    #[error("model evaluates to a non-finite value at the starting point")]
    NonFiniteModel,
    #[error("a piezo calibration scale (nm per unit) is required")]
    MissingScale,
    #[error("piezo scale must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("order search interval [{0}, {1}] must lie within [1, 200]")]
    InvalidOrderRange(u32, u32),
    #[error("wavelength must be positive and finite, got {0}")]
    InvalidWavelength(f64),
    #[error("at least two distinct wavelengths are required")]
    TooFewWavelengths,
    #[error("every wavelength needs at least one finite resonance position")]
    EmptyPositions,
    #[error("all resonance positions are equal")]
    DegeneratePositions,
    #[error("map must be at least 8x8, got {0}x{1}")]
    MapTooSmall(usize, usize),
    #[error("map is flat")]
    FlatMap,
    #[error("map is saturated: {0} samples share the maximum")]
    SaturatedMap(usize),
    #[error("scan range [{0}, {1}] nm is empty")]
    InvalidScan(f64, f64),
    #[error("noise level must be non-negative and finite, got {0}")]
    InvalidNoise(f64),
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error(transparent)]
    Cavity(#[from] crate::cavity::CavityError),
}
