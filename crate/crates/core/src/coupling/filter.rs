use serde::{Deserialize, Serialize};

use super::{non_negative, positive, CouplingError};
use crate::cavity::{airy_transmission, resonance_length, transverse_mode_spacing, TransverseMode};
use crate::spectrum::Spectrum;

/// A planar-concave cavity seen as a spectral filter at fixed length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityFilter {
    pub finesse: f64,
    /// Optical length, snapped so that `resonance_nm` is exactly resonant.
    pub length_um: f64,
    pub order: u32,
    pub resonance_nm: f64,
    pub t_peak: f64,
}

impl CavityFilter {
    /// Cavity of roughly `length_um` tuned to `resonance_nm`: the order is
    /// the nearest integer to 2L/lambda and the length is set to m lambda / 2.
    pub fn resonant(finesse: f64, length_um: f64, resonance_nm: f64) -> Result<Self, CouplingError> {
        positive("finesse", finesse)?;
        positive("cavity length", length_um)?;
        positive("resonance wavelength", resonance_nm)?;
        let order = (2e3 * length_um / resonance_nm).round().max(1.0) as u32;
        Ok(Self {
            finesse,
            length_um: resonance_length(order, resonance_nm)?,
            order,
            resonance_nm,
            t_peak: 1.0,
        })
    }

    /// Cavity with a given wavelength linewidth and free spectral range.
    pub fn from_linewidth(fwhm_nm: f64, resonance_nm: f64, fsr_nm: f64) -> Result<Self, CouplingError> {
        positive("cavity linewidth", fwhm_nm)?;
        positive("free spectral range", fsr_nm)?;
        positive("resonance wavelength", resonance_nm)?;
        let length_um = resonance_nm * resonance_nm / (2.0 * fsr_nm) * 1e-3;
        Self::resonant(fsr_nm / fwhm_nm, length_um, resonance_nm)
    }

    pub fn with_peak_transmission(mut self, t_peak: f64) -> Result<Self, CouplingError> {
        if !(t_peak.is_finite() && t_peak > 0.0 && t_peak <= 1.0) {
            return Err(CouplingError::InvalidFraction {
                name: "peak transmission",
                value: t_peak,
            });
        }
        self.t_peak = t_peak;
        Ok(self)
    }

    /// Airy transmission of the fundamental mode at `wavelength_nm`.
    pub fn transmission(&self, wavelength_nm: f64) -> f64 {
        self.transmission_at_length(self.length_um, wavelength_nm)
    }

    fn transmission_at_length(&self, length_um: f64, wavelength_nm: f64) -> f64 {
        // Round-trip phase in units of 2 pi is 2L / lambda.
        airy_transmission(2e3 * length_um / wavelength_nm, self.finesse, 1.0, self.t_peak)
    }

    pub fn fsr_nm(&self) -> f64 {
        self.resonance_nm / self.order as f64
    }

    pub fn fwhm_nm(&self) -> f64 {
        self.fsr_nm() / self.finesse
    }
}

/// Light reaching the detector without passing the cavity resonance,
/// as a fraction of the emitted spectrum.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Background {
    #[default]
    None,
    Scalar(f64),
    Spectrum(Spectrum),
}

impl Background {
    fn at(&self, wavelength_nm: f64) -> f64 {
        match self {
            Background::None => 0.0,
            Background::Scalar(b) => *b,
            Background::Spectrum(s) => s.interpolate(wavelength_nm),
        }
    }

    fn validate(&self) -> Result<(), CouplingError> {
        match self {
            Background::None => Ok(()),
            Background::Scalar(b) => non_negative("background", *b).map(|_| ()),
            Background::Spectrum(s) => s
                .values()
                .iter()
                .try_for_each(|&v| non_negative("background", v).map(|_| ())),
        }
    }
}

/// One transverse mode taking part in the filtering, with its relative
/// coupling weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeComb {
    pub mode: TransverseMode,
    pub weight: f64,
}

impl ModeComb {
    pub fn new(mode: TransverseMode, weight: f64) -> Self {
        Self { mode, weight }
    }
}

/// Weighted sum of Airy combs, one per transverse mode. A mode of total
/// order k behaves like the fundamental in a cavity shorter by k dL.
fn comb_transmission(
    filter: &CavityFilter,
    modes: &[ModeComb],
    radius_um: Option<f64>,
) -> Result<Vec<(f64, f64)>, CouplingError> {
    if modes.is_empty() {
        return Ok(vec![(filter.length_um, 1.0)]);
    }
    modes
        .iter()
        .map(|c| {
            non_negative("mode weight", c.weight)?;
            let k = c.mode.order();
            let shift_nm = if k == 0 {
                0.0
            } else {
                let radius = radius_um.ok_or(CouplingError::NonPositive {
                    name: "radius of curvature",
                    value: f64::NAN,
                })?;
                transverse_mode_spacing(filter.length_um, radius, filter.resonance_nm, k)?
            };
            Ok((filter.length_um - shift_nm * 1e-3, c.weight))
        })
        .collect()
}

/// S_out = S (sum_k w_k T_k + B), on the grid of `spectrum`.
///
/// An empty `modes` list means the fundamental alone with weight 1. Higher
/// modes need the mirror radius to place their combs.
pub fn filtered_spectrum(
    spectrum: &Spectrum,
    filter: &CavityFilter,
    background: &Background,
    modes: &[ModeComb],
    radius_um: Option<f64>,
) -> Result<Spectrum, CouplingError> {
    background.validate()?;
    let combs = comb_transmission(filter, modes, radius_um)?;
    Ok(spectrum.map(|l, s| {
        let t: f64 = combs
            .iter()
            .map(|&(length, w)| w * filter.transmission_at_length(length, l))
            .sum();
        s * (t + background.at(l))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub value: f64,
    /// False when the resonance lies outside the spectrum's support; the
    /// value is then reported as 0.
    pub resonance_inside: bool,
}

/// Fraction of the emission passed by the cavity relative to a flat filter at
/// its peak: int S T / (T_peak int S).
pub fn spectral_overlap(spectrum: &Spectrum, filter: &CavityFilter) -> Result<Overlap, CouplingError> {
    let (lo, hi) = spectrum.range();
    let inside = (lo..=hi).contains(&filter.resonance_nm) && spectrum.max_value() > 0.0;
    if !inside {
        return Ok(Overlap {
            value: 0.0,
            resonance_inside: false,
        });
    }
    let total = spectrum.integrate();
    let passed = spectrum
        .map(|l, s| s * filter.transmission(l))
        .integrate();
    Ok(Overlap {
        value: passed / (filter.t_peak * total),
        resonance_inside: true,
    })
}
