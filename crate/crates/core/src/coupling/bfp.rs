use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{spectral_overlap, CavityFilter, CouplingError, EmitterModel};
use crate::cavity::CavityGeometry;
use crate::optics::{stack_response, LayerStack, Polarization};

/// Sampling of the emitter spectrum for the angular integrals.
const SPECTRUM_STEP_NM: f64 = 1.0;
const SPECTRUM_SPAN_FWHM: f64 = 3.0;

/// Resonant cavity that adds the on-axis lobe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BfpCavity {
    pub geometry: CavityGeometry,
    pub finesse: f64,
    pub t_peak: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub angles_rad: Vec<f64>,
    pub values: Vec<f64>,
}

/// Scalar back-focal-plane intensity versus emission angle in the ambient
/// medium of `stack`.
///
/// Without a cavity each angle carries the unpolarised stack transmittance
/// averaged over the emitter spectrum. With a cavity a Gaussian lobe of
/// 1/e^2 half-angle lambda / (pi w0) and peak 2 o T_peak is added, where o is
/// the spectral overlap of the emitter with the resonance.
pub fn bfp_radial_profile(
    emitter: &EmitterModel,
    stack: &LayerStack,
    cavity: Option<&BfpCavity>,
    angles_rad: &[f64],
) -> Result<RadialProfile, CouplingError> {
    let ascending = angles_rad.windows(2).all(|w| w[0] < w[1]);
    if angles_rad.is_empty()
        || !ascending
        || angles_rad
            .iter()
            .any(|a| !(a.is_finite() && (0.0..FRAC_PI_2).contains(a)))
    {
        return Err(CouplingError::InvalidAngles);
    }
    let spectrum = emitter.spectrum(&emitter.grid(SPECTRUM_STEP_NM, SPECTRUM_SPAN_FWHM)?)?;
    let total = spectrum.integrate();

    let mut values = angles_rad
        .par_iter()
        .map(|&theta| -> Result<f64, CouplingError> {
            let mut weighted = Vec::with_capacity(spectrum.len());
            for (l, s) in spectrum.iter() {
                let ts = stack_response(stack, l, theta, Polarization::S)?.transmittance;
                let tp = stack_response(stack, l, theta, Polarization::P)?.transmittance;
                weighted.push(s * 0.5 * (ts + tp));
            }
            Ok(crate::spectrum::trapezoid(spectrum.wavelengths(), &weighted) / total)
        })
        .collect::<Result<Vec<_>, _>>()?;

    if let Some(c) = cavity {
        let g = &c.geometry;
        let filter = CavityFilter::resonant(c.finesse, g.optical_length_um, g.wavelength_nm)?
            .with_peak_transmission(c.t_peak)?;
        let overlap = spectral_overlap(&spectrum, &filter)?.value;
        let waist = g.mode_shape()?.waist_um;
        let half_angle = g.wavelength_nm * 1e-3 / (PI * waist);
        let peak = 2.0 * overlap * c.t_peak;
        for (v, &theta) in values.iter_mut().zip(angles_rad) {
            *v += peak * (-2.0 * (theta / half_angle).powi(2)).exp();
        }
    }
    Ok(RadialProfile {
        angles_rad: angles_rad.to_vec(),
        values,
    })
}
