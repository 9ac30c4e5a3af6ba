//! Modelling and analysis for open fiber Fabry-Perot microcavities coupled to
//! single organic molecules.
//!
//! * [`optics`]: transfer-matrix reflectivity of dielectric mirrors, stopbands
//!   and group delay.
//! * [`cavity`]: finesse, free spectral range, Airy lineshape, transverse
//!   modes, Gaussian waist and mode volume.
//! * [`coupling`]: Purcell factor, solid-angle and spectral-overlap
//!   reductions, branching ratio, spectral filtering and the back-focal-plane
//!   profile.
//! * [`analysis`]: Lorentzian scan fits, finesse, length calibration, mode
//!   map fits and seeded synthetic data.
//! * [`design`]: grid and golden-section search over cavity designs.
//! * [`io`]: CSV and JSON formats.

pub mod analysis;
pub mod cavity;
pub mod coupling;
pub mod design;
mod error;
pub mod fmt;
pub mod io;
pub mod optics;
pub mod presets;
pub mod spectrum;

pub use analysis::{
    calibrate_length, finesse_from_scan, fit_gaussian_2d, fit_peaks_lorentzian, synthesize_mode_map,
    synthesize_resonance_positions, synthesize_scan_trace, GaussianFit2d, LengthCalibration, ModeMap,
    PeakFit, ScanSpec, ScanTrace,
};
pub use cavity::{
    airy_fwhm, airy_transmission, cavity_report, finesse_from_linewidth, finesse_from_reflectivities,
    free_spectral_range, gaussian_waist, hermite_gauss_intensity, mode_volume, quality_factor,
    radius_from_splitting, resonance_length, transverse_mode_spacing, CavityGeometry, CavityReport,
    MirrorSpec, TransverseMode,
};
pub use coupling::{
    bfp_radial_profile, branching_ratio, effective_enhancement, filtered_spectrum, purcell_max,
    purcell_report, rate_enhancement, required_enhancement, solid_angle_fraction, spectral_overlap,
    Background, CavityFilter, EmitterModel, ModeComb, PurcellReport,
};
pub use design::{evaluate_design, optimize_design, DesignResult, DesignSpace, Objective};
pub use error::{Error, Result};
pub use optics::{
    group_delay_length, quarter_wave_stack, reflectivity_spectrum, stack_response, stopband, Layer,
    LayerStack, Polarization, Stopband, StopbandSearch, Threshold,
};
pub use spectrum::Spectrum;
