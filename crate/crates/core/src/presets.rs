//! Reconstructed mirrors and emitter of the fiber microcavity experiment.
//!
//! All stacks are quarter-wave with the low-index layer facing the ambient,
//! on a fused-silica substrate.

use crate::coupling::EmitterModel;
use crate::optics::{materials, quarter_wave_stack, LayerStack, StopbandSearch, Threshold};

/// One stack together with the band-edge definition used for it.
#[derive(Debug, Clone, PartialEq)]
pub struct DbrPreset {
    pub name: &'static str,
    pub stack: LayerStack,
    pub threshold: Threshold,
    pub search: StopbandSearch,
    /// Quoted band-gap interval, nm.
    pub quoted_band_nm: Option<(f64, f64)>,
}

/// Harmonic mean of two band edges: the quarter-wave centre whose band is
/// symmetric in frequency.
fn centre(lo: f64, hi: f64) -> f64 {
    2.0 * lo * hi / (lo + hi)
}

/// 13 Ta2O5/SiO2 pairs at 780 nm, the planar cavity mirror.
pub fn cavity_dbr() -> DbrPreset {
    DbrPreset {
        name: "cavity-ta2o5-13",
        stack: quarter_wave_stack(materials::TA2O5, materials::SIO2, 13, 780.0, true)
            .expect("valid constants"),
        threshold: Threshold::default(),
        search: StopbandSearch::new(600.0, 1000.0),
        quoted_band_nm: None,
    }
}

/// 12 TiO2/SiO2 pairs used for the bead scan. Centred between the quoted
/// edges 524 and 684 nm.
pub fn bead_scan_dbr() -> DbrPreset {
    DbrPreset {
        name: "bead-tio2-12",
        stack: quarter_wave_stack(materials::TIO2, materials::SIO2, 12, centre(524.0, 684.0), true)
            .expect("valid constants"),
        threshold: Threshold::default(),
        search: StopbandSearch::new(450.0, 800.0),
        quoted_band_nm: Some((524.0, 684.0)),
    }
}

/// 4 Ta2O5/SiO2 pairs under the anthracene film. The stack is too short to
/// reach R = 0.99, so the band edge is taken at 80 % of the peak reflectance.
pub fn film_dbr() -> DbrPreset {
    DbrPreset {
        name: "film-ta2o5-4",
        stack: quarter_wave_stack(materials::TA2O5, materials::SIO2, 4, centre(685.0, 880.0), true)
            .expect("valid constants")
            .with_ambient(materials::ANTHRACENE)
            .expect("valid constants"),
        threshold: Threshold::RelativeToPeak(0.8),
        search: StopbandSearch::new(550.0, 1100.0),
        quoted_band_nm: Some((685.0, 880.0)),
    }
}

pub fn all_dbrs() -> Vec<DbrPreset> {
    vec![cavity_dbr(), bead_scan_dbr(), film_dbr()]
}

/// Room-temperature dibenzoterrylene model, see [`EmitterModel::dbt`].
pub fn dbt_emitter() -> EmitterModel {
    EmitterModel::dbt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::stopband;

    #[test]
    fn quoted_bands_are_reproduced() {
        for p in all_dbrs() {
            let band = stopband(&p.stack, p.threshold, p.search).unwrap();
            assert!(!band.clipped, "{}", p.name);
            if let Some((lo, hi)) = p.quoted_band_nm {
                assert!(band.lower_nm <= lo && band.upper_nm >= hi, "{}: {band:?}", p.name);
                assert!((band.lower_nm - lo).abs() <= 20.0 && (band.upper_nm - hi).abs() <= 20.0);
            }
        }
    }
}
