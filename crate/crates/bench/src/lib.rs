//! Inputs shared by the benchmarks.

use microcav_core::spectrum::linspace;
use microcav_core::{
    synthesize_mode_map, synthesize_scan_trace, CavityGeometry, DesignSpace, EmitterModel, MirrorSpec, ModeMap,
    ScanSpec, ScanTrace, TransverseMode,
};

pub use microcav_core::presets::cavity_dbr;

/// Wavelength grid across the cavity mirror's stopband.
pub fn stopband_grid(points: usize) -> Vec<f64> {
    linspace(600.0, 1000.0, points)
}

/// Noisy piezo scan around the fundamental of the 2.75 um cavity.
pub fn fundamental_scan(seed: u64) -> ScanTrace {
    let geometry = CavityGeometry::on_resonance(7, 785.0, 1400.0).expect("stable geometry");
    let m1 = MirrorSpec::gold();
    let m2 = MirrorSpec::fixed(0.999, None, std::f64::consts::PI).expect("valid mirror");
    synthesize_scan_trace(&geometry, (&m1, &m2), &[], ScanSpec::new(2737.7, 2757.3, 801), 0.01, seed)
        .expect("valid scan")
}

/// Bead-convolved TEM00 map on a 0.25 um raster.
pub fn fundamental_map(seed: u64) -> ModeMap {
    synthesize_mode_map(TransverseMode::FUNDAMENTAL, 3.1, 16.0, 0.25, 0.2, 0.01, seed).expect("valid map")
}

pub fn design_space() -> DesignSpace {
    DesignSpace::new((100.0, 1e4), (50.0, 2000.0), (5, 9), 780.0, EmitterModel::dbt()).expect("valid space")
}
