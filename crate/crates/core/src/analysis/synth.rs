//! Seeded forward models for scan traces, mode maps and calibration data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use super::{AnalysisError, ModeMap, ScanTrace};
use crate::cavity::{
    airy_transmission, finesse_from_reflectivities, hermite_gauss_unchecked,
    plane_wave_peak_transmission, CavityGeometry, MirrorSpec, TransverseMode,
};
use crate::coupling::ModeComb;
use crate::spectrum::linspace;

pub const MIN_SYNTH_SAMPLES: usize = 64;
/// Radial and angular quadrature nodes for the bead average.
const BEAD_RINGS: usize = 8;
const BEAD_SPOKES: usize = 16;

/// Cavity-length sweep of a synthetic scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    /// Optical length at the first sample, nm.
    pub start_nm: f64,
    pub stop_nm: f64,
    pub samples: usize,
    /// Length change per raw displacement unit, nm.
    pub nm_per_unit: f64,
}

impl ScanSpec {
    pub fn new(start_nm: f64, stop_nm: f64, samples: usize) -> Self {
        Self {
            start_nm,
            stop_nm,
            samples,
            nm_per_unit: 1.0,
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(sigma: f64) -> Result<Normal<f64>, AnalysisError> {
    Normal::new(0.0, sigma).map_err(|_| AnalysisError::InvalidNoise(sigma))
}

fn check_noise(sigma: f64) -> Result<(), AnalysisError> {
    if sigma.is_finite() && sigma >= 0.0 {
        Ok(())
    } else {
        Err(AnalysisError::InvalidNoise(sigma))
    }
}

/// Transmission versus cavity length: one Airy comb per transverse mode,
/// shifted by that mode's length offset, plus Gaussian noise with standard
/// deviation `noise_sigma` times the noiseless maximum.
///
/// The finesse comes from the mirror reflectances. The peak transmission is
/// the plane-wave value when both mirrors state a transmittance, else 1.
/// An empty mode list means the fundamental alone.
pub fn synthesize_scan_trace(
    geometry: &CavityGeometry,
    mirrors: (&MirrorSpec, &MirrorSpec),
    modes: &[ModeComb],
    scan: ScanSpec,
    noise_sigma: f64,
    seed: u64,
) -> Result<ScanTrace, AnalysisError> {
    if scan.samples < MIN_SYNTH_SAMPLES {
        return Err(AnalysisError::TooFewSamples {
            needed: MIN_SYNTH_SAMPLES,
            got: scan.samples,
        });
    }
    if !(scan.start_nm.is_finite() && scan.stop_nm > scan.start_nm && scan.stop_nm.is_finite()) {
        return Err(AnalysisError::InvalidScan(scan.start_nm, scan.stop_nm));
    }
    if !(scan.nm_per_unit.is_finite() && scan.nm_per_unit > 0.0) {
        return Err(AnalysisError::InvalidScale(scan.nm_per_unit));
    }
    check_noise(noise_sigma)?;
    let (m1, m2) = mirrors;
    let finesse = finesse_from_reflectivities(m1.reflectance(), m2.reflectance())?;
    let t_peak = match (m1.transmittance(), m2.transmittance()) {
        (Some(t1), Some(t2)) => plane_wave_peak_transmission(t1, t2, m1.reflectance(), m2.reflectance())?,
        _ => 1.0,
    };
    let fundamental = [ModeComb::new(TransverseMode::FUNDAMENTAL, 1.0)];
    let modes = if modes.is_empty() { &fundamental[..] } else { modes };
    let base_nm = geometry.optical_length_um * 1e3;
    let fsr_nm = geometry.wavelength_nm / 2.0;
    let combs = modes
        .iter()
        .map(|c| {
            let shift = match c.mode.order() {
                0 => 0.0,
                k => geometry.transverse_offset_nm(k)?,
            };
            Ok((base_nm + shift, c.weight))
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;

    let lengths = linspace(scan.start_nm, scan.stop_nm, scan.samples);
    let mut signal: Vec<f64> = lengths
        .iter()
        .map(|&x| {
            combs
                .iter()
                .map(|&(res, w)| w * airy_transmission(x - res, finesse, fsr_nm, t_peak))
                .sum()
        })
        .collect();
    if noise_sigma > 0.0 {
        let peak = signal.iter().copied().fold(0.0, f64::max);
        let dist = normal(noise_sigma * peak)?;
        let mut r = rng(seed);
        for s in &mut signal {
            *s += r.sample(dist);
        }
    }
    let displacement = lengths.iter().map(|x| x / scan.nm_per_unit).collect();
    Ok(ScanTrace::new(displacement, signal)?.with_noise_sigma(noise_sigma))
}

/// Raster map of a Hermite-Gauss mode seen through a fluorescent bead.
///
/// The grid spans `extent_um` centred on the mode axis with spacing
/// `step_um`. The intensity is averaged over a uniform disc of
/// `bead_diameter_um` (equal-area rings, evenly spaced spokes), then Gaussian
/// noise of `noise` times the noiseless maximum is added.
pub fn synthesize_mode_map(
    mode: TransverseMode,
    waist_um: f64,
    extent_um: f64,
    step_um: f64,
    bead_diameter_um: f64,
    noise: f64,
    seed: u64,
) -> Result<ModeMap, AnalysisError> {
    for (name, v) in [("waist", waist_um), ("extent", extent_um), ("step", step_um)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(AnalysisError::NonPositive { name, value: v });
        }
    }
    if !(bead_diameter_um.is_finite() && bead_diameter_um >= 0.0) {
        return Err(AnalysisError::NonPositive {
            name: "bead diameter",
            value: bead_diameter_um,
        });
    }
    check_noise(noise)?;
    let n = (extent_um / step_um).round() as usize + 1;
    let half = step_um * (n - 1) as f64 / 2.0;
    let axis = linspace(-half, half, n);

    let radius = bead_diameter_um / 2.0;
    let mut nodes = Vec::new();
    if radius > 0.0 {
        for i in 0..BEAD_RINGS {
            let r = radius * ((i as f64 + 0.5) / BEAD_RINGS as f64).sqrt();
            for j in 0..BEAD_SPOKES {
                let phi = 2.0 * std::f64::consts::PI * (j as f64 + 0.5 * (i % 2) as f64) / BEAD_SPOKES as f64;
                nodes.push((r * phi.cos(), r * phi.sin()));
            }
        }
    } else {
        nodes.push((0.0, 0.0));
    }
    let weight = 1.0 / nodes.len() as f64;

    let mut signal = Vec::with_capacity(n * n);
    for &y in &axis {
        for &x in &axis {
            let v: f64 = nodes
                .iter()
                .map(|&(dx, dy)| hermite_gauss_unchecked(mode, waist_um, x + dx, y + dy))
                .sum();
            signal.push(v * weight);
        }
    }
    if noise > 0.0 {
        let peak = signal.iter().copied().fold(0.0, f64::max);
        let dist = normal(noise * peak)?;
        let mut r = rng(seed);
        for s in &mut signal {
            *s += r.sample(dist);
        }
    }
    ModeMap::new(axis.clone(), axis, signal)
}

/// Raw piezo positions of `orders` consecutive resonances per wavelength,
/// starting at order `m`: position = (L - offset) / scale plus Gaussian
/// noise of `noise_fraction` times the resonance spacing lambda / 2.
pub fn synthesize_resonance_positions(
    m: u32,
    wavelengths_nm: &[f64],
    orders: usize,
    nm_per_unit: f64,
    offset_nm: f64,
    noise_fraction: f64,
    seed: u64,
) -> Result<Vec<Vec<f64>>, AnalysisError> {
    if m == 0 || orders == 0 {
        return Err(AnalysisError::InvalidOrderRange(m, m + orders as u32));
    }
    if !(nm_per_unit.is_finite() && nm_per_unit > 0.0) {
        return Err(AnalysisError::InvalidScale(nm_per_unit));
    }
    check_noise(noise_fraction)?;
    let mut r = rng(seed);
    wavelengths_nm
        .iter()
        .map(|&l| {
            if !(l.is_finite() && l > 0.0) {
                return Err(AnalysisError::InvalidWavelength(l));
            }
            let spacing = l / 2.0 / nm_per_unit;
            let dist = normal(noise_fraction * spacing)?;
            Ok((0..orders)
                .map(|j| {
                    let exact = ((m as usize + j) as f64 * l / 2.0 - offset_nm) / nm_per_unit;
                    if noise_fraction > 0.0 {
                        exact + r.sample(dist)
                    } else {
                        exact
                    }
                })
                .collect())
        })
        .collect()
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;
    use crate::analysis::{calibrate_length, fit_gaussian_2d, fit_peaks_lorentzian};
    use crate::cavity::{fwhm_per_waist, transverse_mode_spacing};
    use approx::assert_relative_eq;

    fn fig2_geometry() -> CavityGeometry {
        CavityGeometry::on_resonance(7, 785.0, 1400.0).unwrap()
    }

    fn mirrors() -> (MirrorSpec, MirrorSpec) {
        (
            MirrorSpec::fixed(0.97, None, 0.0).unwrap(),
            MirrorSpec::fixed(0.999, None, 0.0).unwrap(),
        )
    }

    #[test]
    fn two_mode_trace_shows_transverse_splitting() {
        let g = fig2_geometry();
        let (a, b) = mirrors();
        let modes = [
            ModeComb::new(TransverseMode::FUNDAMENTAL, 1.0),
            ModeComb::new(TransverseMode::new(0, 1), 0.35),
        ];
        let scan = ScanSpec::new(2735.0, 2765.0, 3001);
        let t = synthesize_scan_trace(&g, (&a, &b), &modes, scan, 0.0, 0).unwrap();
        let fit = fit_peaks_lorentzian(&t, 2).unwrap();
        let split = transverse_mode_spacing(2.7475, 1400.0, 785.0, 1).unwrap();
        assert_relative_eq!(fit.centers[1] - fit.centers[0], split, max_relative = 1e-3);
        assert!((split - 5.5).abs() < 0.1);
    }

    #[test]
    fn noiseless_trace_is_the_model() {
        let g = fig2_geometry();
        let (a, b) = mirrors();
        let scan = ScanSpec::new(2700.0, 2800.0, 101);
        let t = synthesize_scan_trace(&g, (&a, &b), &[], scan, 0.0, 42).unwrap();
        let f = finesse_from_reflectivities(0.97, 0.999).unwrap();
        for (&x, &s) in t.displacement().iter().zip(t.signal()) {
            assert_eq!(s, airy_transmission(x - 2747.5, f, 392.5, 1.0));
        }
    }

    #[test]
    fn wide_scan_shows_two_orders() {
        let g = fig2_geometry();
        let (a, b) = mirrors();
        let scan = ScanSpec::new(2700.0, 2700.0 + 1.2 * 392.5, 4001);
        let t = synthesize_scan_trace(&g, (&a, &b), &[], scan, 0.0, 0).unwrap();
        let peaks = t
            .signal()
            .windows(3)
            .filter(|w| w[1] > 0.5 && w[1] >= w[0] && w[1] > w[2])
            .count();
        assert_eq!(peaks, 2);
    }

    #[test]
    fn seeds_are_reproducible() {
        let g = fig2_geometry();
        let (a, b) = mirrors();
        let scan = ScanSpec::new(2735.0, 2765.0, 300);
        let x = synthesize_scan_trace(&g, (&a, &b), &[], scan, 0.02, 9).unwrap();
        let y = synthesize_scan_trace(&g, (&a, &b), &[], scan, 0.02, 9).unwrap();
        let z = synthesize_scan_trace(&g, (&a, &b), &[], scan, 0.02, 10).unwrap();
        assert_eq!(x, y);
        assert_ne!(x, z);
        assert!(synthesize_scan_trace(&g, (&a, &b), &[], ScanSpec::new(0.0, 1.0, 63), 0.0, 0).is_err());
    }

    #[test]
    fn mode_map_round_trip() {
        let m = synthesize_mode_map(TransverseMode::FUNDAMENTAL, 3.14, 10.0, 0.25, 0.0, 0.0, 0).unwrap();
        assert_eq!(m.x_um().len(), 41);
        let f = fit_gaussian_2d(&m).unwrap();
        assert_relative_eq!(f.fwhm_x_um, 3.14 * fwhm_per_waist(), max_relative = 1e-6);
        assert_relative_eq!(f.fwhm_y_um, f.fwhm_x_um, max_relative = 1e-9);
        assert!((f.fwhm_x_um - 3.7).abs() / 3.7 < 0.01);
    }

    #[test]
    fn small_bead_barely_broadens() {
        let point = synthesize_mode_map(TransverseMode::FUNDAMENTAL, 3.14, 10.0, 0.25, 0.0, 0.0, 0).unwrap();
        let bead = synthesize_mode_map(TransverseMode::FUNDAMENTAL, 3.14, 10.0, 0.25, 0.1, 0.0, 0).unwrap();
        let a = fit_gaussian_2d(&point).unwrap().fwhm_x_um;
        let b = fit_gaussian_2d(&bead).unwrap().fwhm_x_um;
        assert!(b > a);
        assert!((b - a) / a < 0.005);
        // A Gaussian blurred by a disc of radius a gains variance a^2 / 4 per axis.
        let sigma2 = (3.14f64 / 2.0).powi(2);
        let expected = a * ((sigma2 + 0.05f64.powi(2) / 4.0) / sigma2).sqrt();
        assert_relative_eq!(b, expected, max_relative = 1e-5);
    }

    #[test]
    fn tem01_map_is_a_poor_gaussian() {
        let m = synthesize_mode_map(TransverseMode::new(0, 1), 3.14, 10.0, 0.25, 0.0, 0.0, 0).unwrap();
        assert!(fit_gaussian_2d(&m).unwrap().poor_fit);
    }

    #[test]
    fn calibration_positions_round_trip() {
        let p = synthesize_resonance_positions(7, &[763.0, 775.0, 785.0], 3, 1.25, 100.0, 0.0, 0).unwrap();
        let cal = calibrate_length(&p, &[763.0, 775.0, 785.0], (3, 50)).unwrap();
        assert_eq!(cal.m, 7);
        assert_relative_eq!(cal.piezo_scale, 1.25, max_relative = 1e-9);
    }
}
