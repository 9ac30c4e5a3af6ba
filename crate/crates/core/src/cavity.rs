//! Plano-concave Fabry-Perot resonator: finesse, free spectral range,
//! resonance lengths, Airy lineshape, transverse-mode structure, Gaussian
//! waist, mode volume and quality factor.
//!
//! Units: optical lengths and radii in um, wavelengths and length linewidths
//! in nm, frequencies in THz.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::optics::{stack_response, LayerStack, OpticsError, Polarization, Reflector};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Intensity FWHM over the 1/e field half-width: sqrt(2 ln 2).
pub fn fwhm_per_waist() -> f64 {
    (2.0 * std::f64::consts::LN_2).sqrt()
}

#[derive(Debug, Error, PartialEq)]
pub enum CavityError {
    #[error("reflectance {0} must lie strictly between 0 and 1")]
    InvalidReflectance(f64),
    #[error("transmittance {transmittance} must lie in [0, 1 - R] with R = {reflectance}")]
    InvalidTransmittance { reflectance: f64, transmittance: f64 },
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("longitudinal order must be at least 1")]
    InvalidOrder,
    #[error("unstable resonator: optical length {length_um} um must be below the mirror radius {radius_um} um")]
    Unstable { length_um: f64, radius_um: f64 },
    #[error("finesse {0} is too low for the Airy function to drop to half maximum")]
    NoHalfMaximum(f64),
    #[error(transparent)]
    Optics(#[from] OpticsError),
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64, CavityError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(CavityError::NonPositive { name, value })
    }
}

fn open_unit(r: f64) -> Result<f64, CavityError> {
    if r.is_finite() && r > 0.0 && r < 1.0 {
        Ok(r)
    } else {
        Err(CavityError::InvalidReflectance(r))
    }
}

fn check_stable(length_um: f64, radius_um: f64) -> Result<(), CavityError> {
    positive("optical length", length_um)?;
    positive("radius of curvature", radius_um)?;
    if length_um >= radius_um {
        return Err(CavityError::Unstable {
            length_um,
            radius_um,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MirrorKind {
    Fixed,
    Stack,
}

/// Reflectance, transmittance and reflection phase of one cavity mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorSpec {
    reflectance: f64,
    transmittance: Option<f64>,
    reflection_phase: f64,
    source: Option<LayerStack>,
}

impl MirrorSpec {
    /// A mirror with wavelength-independent response. `transmittance` may be
    /// unknown; the remainder `1 - R - T` is loss.
    pub fn fixed(
        reflectance: f64,
        transmittance: Option<f64>,
        reflection_phase: f64,
    ) -> Result<Self, CavityError> {
        if !(reflectance.is_finite() && reflectance > 0.0 && reflectance <= 1.0) {
            return Err(CavityError::InvalidReflectance(reflectance));
        }
        if let Some(t) = transmittance {
            if !(t.is_finite() && t >= 0.0 && t <= 1.0 - reflectance + 1e-12) {
                return Err(CavityError::InvalidTransmittance {
                    reflectance,
                    transmittance: t,
                });
            }
        }
        Ok(Self {
            reflectance,
            transmittance,
            reflection_phase,
            source: None,
        })
    }

    /// The fiber-tip gold micromirror: R = 0.97, phase pi, transmission unknown.
    pub fn gold() -> Self {
        Self::fixed(0.97, None, PI).expect("valid constants")
    }

    /// Normal-incidence response of `stack` at `wavelength_nm`.
    pub fn from_stack(stack: &LayerStack, wavelength_nm: f64) -> Result<Self, CavityError> {
        let r = stack_response(stack, wavelength_nm, 0.0, Polarization::S)?;
        Ok(Self {
            reflectance: r.reflectance,
            transmittance: Some(r.transmittance),
            reflection_phase: r.r.arg(),
            source: Some(stack.clone()),
        })
    }

    pub fn kind(&self) -> MirrorKind {
        if self.source.is_some() {
            MirrorKind::Stack
        } else {
            MirrorKind::Fixed
        }
    }

    pub fn reflectance(&self) -> f64 {
        self.reflectance
    }

    pub fn transmittance(&self) -> Option<f64> {
        self.transmittance
    }

    pub fn reflection_phase(&self) -> f64 {
        self.reflection_phase
    }

    pub fn stack(&self) -> Option<&LayerStack> {
        self.source.as_ref()
    }
}

impl Reflector for MirrorSpec {
    fn reflection(&self, wavelength_nm: f64) -> Complex64 {
        match &self.source {
            Some(stack) => stack.reflection(wavelength_nm),
            None => Complex64::from_polar(self.reflectance.sqrt(), self.reflection_phase),
        }
    }

    fn in_stopband(&self, wavelength_nm: f64) -> bool {
        match &self.source {
            Some(stack) => stack.in_stopband(wavelength_nm),
            None => true,
        }
    }
}

/// A plano-concave resonator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityGeometry {
    pub optical_length_um: f64,
    pub order: u32,
    pub radius_um: f64,
    pub wavelength_nm: f64,
}

impl CavityGeometry {
    pub fn new(
        optical_length_um: f64,
        order: u32,
        radius_um: f64,
        wavelength_nm: f64,
    ) -> Result<Self, CavityError> {
        if order == 0 {
            return Err(CavityError::InvalidOrder);
        }
        positive("wavelength", wavelength_nm)?;
        check_stable(optical_length_um, radius_um)?;
        Ok(Self {
            optical_length_um,
            order,
            radius_um,
            wavelength_nm,
        })
    }

    /// The geometry resonant at `wavelength_nm` in order `order`: L = m lambda / 2.
    pub fn on_resonance(order: u32, wavelength_nm: f64, radius_um: f64) -> Result<Self, CavityError> {
        let length = resonance_length(order, wavelength_nm)?;
        Self::new(length, order, radius_um, wavelength_nm)
    }

    pub fn fsr(&self) -> Result<Fsr, CavityError> {
        free_spectral_range(self.optical_length_um, self.wavelength_nm)
    }

    pub fn mode_shape(&self) -> Result<ModeShape, CavityError> {
        gaussian_waist(self.optical_length_um, self.radius_um, self.wavelength_nm)
    }

    /// Length offset of a transverse mode of the given total order.
    pub fn transverse_offset_nm(&self, order: u32) -> Result<f64, CavityError> {
        transverse_mode_spacing(
            self.optical_length_um,
            self.radius_um,
            self.wavelength_nm,
            order,
        )
    }
}

/// Hermite-Gauss transverse mode TEM_pn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TransverseMode {
    pub p: u32,
    pub n: u32,
}

impl TransverseMode {
    pub const FUNDAMENTAL: TransverseMode = TransverseMode { p: 0, n: 0 };

    pub fn new(p: u32, n: u32) -> Self {
        Self { p, n }
    }

    pub fn order(&self) -> u32 {
        self.p + self.n
    }
}

impl std::fmt::Display for TransverseMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TEM{}{}", self.p, self.n)
    }
}

/// Gaussian mode at the planar mirror.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeShape {
    /// 1/e half-width of the field amplitude.
    pub waist_um: f64,
    /// Intensity full width at half maximum.
    pub fwhm_um: f64,
    pub volume_um3: f64,
    pub volume_lambda3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeVolume {
    pub um3: f64,
    pub lambda3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fsr {
    pub thz: f64,
    pub nm: f64,
}

/// F = pi (R1 R2)^(1/4) / (1 - sqrt(R1 R2)).
pub fn finesse_from_reflectivities(r1: f64, r2: f64) -> Result<f64, CavityError> {
    let product = open_unit(r1)? * open_unit(r2)?;
    Ok(PI * product.powf(0.25) / (1.0 - product.sqrt()))
}

/// Inverts [`finesse_from_reflectivities`] for R1 given the finesse and R2.
pub fn reflectivity_from_finesse(finesse: f64, r2: f64) -> Result<f64, CavityError> {
    positive("finesse", finesse)?;
    open_unit(r2)?;
    // u = (R1 R2)^(1/4) solves F u^2 + pi u - F = 0.
    let u = (-PI + (PI * PI + 4.0 * finesse * finesse).sqrt()) / (2.0 * finesse);
    open_unit(u.powi(4) / r2)
}

/// F = lambda / (2 dL), with `dL` the FWHM of the resonance in cavity length.
pub fn finesse_from_linewidth(linewidth_nm: f64, wavelength_nm: f64) -> Result<f64, CavityError> {
    positive("length linewidth", linewidth_nm)?;
    positive("wavelength", wavelength_nm)?;
    Ok(wavelength_nm / (2.0 * linewidth_nm))
}

/// Length-scan FWHM implied by a finesse; the inverse of [`finesse_from_linewidth`].
pub fn linewidth_from_finesse(finesse: f64, wavelength_nm: f64) -> Result<f64, CavityError> {
    positive("finesse", finesse)?;
    positive("wavelength", wavelength_nm)?;
    Ok(wavelength_nm / (2.0 * finesse))
}

pub fn free_spectral_range(length_um: f64, wavelength_nm: f64) -> Result<Fsr, CavityError> {
    positive("optical length", length_um)?;
    positive("wavelength", wavelength_nm)?;
    Ok(Fsr {
        thz: SPEED_OF_LIGHT / (2.0 * length_um * 1e-6) * 1e-12,
        nm: wavelength_nm * wavelength_nm / (2.0 * length_um * 1e3),
    })
}

/// L = m lambda / 2, in um.
pub fn resonance_length(order: u32, wavelength_nm: f64) -> Result<f64, CavityError> {
    if order == 0 {
        return Err(CavityError::InvalidOrder);
    }
    positive("wavelength", wavelength_nm)?;
    Ok(order as f64 * wavelength_nm / 2.0 * 1e-3)
}

/// Mirror separation once the penetration into the mirrors is removed.
pub fn physical_separation(optical_length_um: f64, penetration_um: f64) -> f64 {
    optical_length_um - penetration_um
}

/// T(x) = T_peak / (1 + (2F/pi)^2 sin^2(pi x / FSR)), resonant at x = 0.
///
/// `x` and `fsr` share units (length detuning, frequency, ...).
pub fn airy_transmission(x: f64, finesse: f64, fsr: f64, t_peak: f64) -> f64 {
    let coefficient = (2.0 * finesse / PI).powi(2);
    t_peak / (1.0 + coefficient * (PI * x / fsr).sin().powi(2))
}

/// Closed-form FWHM of the Airy function, in units of `fsr`.
pub fn airy_fwhm(finesse: f64, fsr: f64) -> Result<f64, CavityError> {
    positive("finesse", finesse)?;
    positive("free spectral range", fsr)?;
    let s = PI / (2.0 * finesse);
    if s >= 1.0 {
        return Err(CavityError::NoHalfMaximum(finesse));
    }
    Ok(2.0 * fsr / PI * s.asin())
}

/// Plane-wave peak transmission T1 T2 / (1 - sqrt(R1 R2))^2. Never applied
/// implicitly: synthetic data use T_peak = 1 unless this is passed in.
pub fn plane_wave_peak_transmission(
    t1: f64,
    t2: f64,
    r1: f64,
    r2: f64,
) -> Result<f64, CavityError> {
    let product = open_unit(r1)? * open_unit(r2)?;
    for (t, r) in [(t1, r1), (t2, r2)] {
        if !(t.is_finite() && t >= 0.0 && t <= 1.0 - r + 1e-12) {
            return Err(CavityError::InvalidTransmittance {
                reflectance: r,
                transmittance: t,
            });
        }
    }
    Ok(t1 * t2 / (1.0 - product.sqrt()).powi(2))
}

/// Length difference between transverse modes whose total orders differ by
/// `order_difference`: dL = (lambda / 2 pi) d(n+p) sqrt(L / r1), in nm.
pub fn transverse_mode_spacing(
    length_um: f64,
    radius_um: f64,
    wavelength_nm: f64,
    order_difference: u32,
) -> Result<f64, CavityError> {
    check_stable(length_um, radius_um)?;
    positive("wavelength", wavelength_nm)?;
    Ok(wavelength_nm / (2.0 * PI) * order_difference as f64 * (length_um / radius_um).sqrt())
}

/// Mirror radius from the first-order transverse splitting:
/// r1 = L (lambda / (2 pi dL))^2, in um.
pub fn radius_from_splitting(
    splitting_nm: f64,
    length_um: f64,
    wavelength_nm: f64,
) -> Result<f64, CavityError> {
    positive("transverse splitting", splitting_nm)?;
    positive("optical length", length_um)?;
    positive("wavelength", wavelength_nm)?;
    Ok(length_um * (wavelength_nm / (2.0 * PI * splitting_nm)).powi(2))
}

/// Waist at the planar mirror: w0^2 = (lambda / pi) sqrt(L (r1 - L)).
pub fn gaussian_waist(
    length_um: f64,
    radius_um: f64,
    wavelength_nm: f64,
) -> Result<ModeShape, CavityError> {
    check_stable(length_um, radius_um)?;
    positive("wavelength", wavelength_nm)?;
    let lambda_um = wavelength_nm * 1e-3;
    let waist = (lambda_um / PI * (length_um * (radius_um - length_um)).sqrt()).sqrt();
    let volume = mode_volume(waist, length_um, wavelength_nm)?;
    Ok(ModeShape {
        waist_um: waist,
        fwhm_um: waist * fwhm_per_waist(),
        volume_um3: volume.um3,
        volume_lambda3: volume.lambda3,
    })
}

/// Standing-wave Gaussian mode volume V = pi w0^2 L / 4.
pub fn mode_volume(waist_um: f64, length_um: f64, wavelength_nm: f64) -> Result<ModeVolume, CavityError> {
    positive("waist", waist_um)?;
    positive("optical length", length_um)?;
    positive("wavelength", wavelength_nm)?;
    let um3 = PI * waist_um * waist_um * length_um / 4.0;
    Ok(ModeVolume {
        um3,
        lambda3: um3 / (wavelength_nm * 1e-3).powi(3),
    })
}

/// [`mode_volume`] with the mirror penetration length added to L.
pub fn mode_volume_with_penetration(
    waist_um: f64,
    length_um: f64,
    penetration_um: f64,
    wavelength_nm: f64,
) -> Result<ModeVolume, CavityError> {
    if !(penetration_um.is_finite() && penetration_um >= 0.0) {
        return Err(CavityError::NonPositive {
            name: "penetration length",
            value: penetration_um,
        });
    }
    mode_volume(waist_um, length_um + penetration_um, wavelength_nm)
}

/// The two readings of a measured intensity FWHM as a mode volume: with
/// w0 = FWHM / sqrt(2 ln 2) and with w0 taken equal to the FWHM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeConventions {
    pub from_waist: ModeVolume,
    pub waist_equals_fwhm: ModeVolume,
}

pub fn mode_volume_conventions(
    fwhm_um: f64,
    length_um: f64,
    wavelength_nm: f64,
) -> Result<VolumeConventions, CavityError> {
    positive("FWHM", fwhm_um)?;
    Ok(VolumeConventions {
        from_waist: mode_volume(fwhm_um / fwhm_per_waist(), length_um, wavelength_nm)?,
        waist_equals_fwhm: mode_volume(fwhm_um, length_um, wavelength_nm)?,
    })
}

/// Q = F m.
pub fn quality_factor(finesse: f64, order: u32) -> Result<f64, CavityError> {
    positive("finesse", finesse)?;
    if order == 0 {
        return Err(CavityError::InvalidOrder);
    }
    Ok(finesse * order as f64)
}

/// Physicists' Hermite polynomial H_k(x).
pub fn hermite(k: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if k == 0 {
        return prev;
    }
    for j in 1..k {
        let next = 2.0 * x * cur - 2.0 * j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Unnormalised TEM_pn intensity with TEM00 peak 1:
/// |H_p(sqrt2 x / w) H_n(sqrt2 y / w)|^2 exp(-2 (x^2 + y^2) / w^2).
pub fn hermite_gauss_intensity(
    mode: TransverseMode,
    waist_um: f64,
    x_um: f64,
    y_um: f64,
) -> Result<f64, CavityError> {
    positive("waist", waist_um)?;
    Ok(hermite_gauss_unchecked(mode, waist_um, x_um, y_um))
}

pub(crate) fn hermite_gauss_unchecked(mode: TransverseMode, w: f64, x: f64, y: f64) -> f64 {
    let s = std::f64::consts::SQRT_2 / w;
    let h = hermite(mode.p, s * x) * hermite(mode.n, s * y);
    h * h * (-2.0 * (x * x + y * y) / (w * w)).exp()
}

/// Summary of a cavity built from two mirror reflectances and a geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityReport {
    pub finesse: f64,
    pub fsr_nm: f64,
    pub fsr_thz: f64,
    pub length_um: f64,
    pub order_m: u32,
    pub radius_um: f64,
    pub waist_um: f64,
    pub fwhm_um: f64,
    pub mode_volume_um3: f64,
    pub mode_volume_lambda3: f64,
    pub q_factor: f64,
}

pub fn cavity_report(
    r1: f64,
    r2: f64,
    order: u32,
    wavelength_nm: f64,
    radius_um: f64,
) -> Result<CavityReport, CavityError> {
    let finesse = finesse_from_reflectivities(r1, r2)?;
    let geometry = CavityGeometry::on_resonance(order, wavelength_nm, radius_um)?;
    let fsr = geometry.fsr()?;
    let shape = geometry.mode_shape()?;
    Ok(CavityReport {
        finesse,
        fsr_nm: fsr.nm,
        fsr_thz: fsr.thz,
        length_um: geometry.optical_length_um,
        order_m: order,
        radius_um,
        waist_um: shape.waist_um,
        fwhm_um: shape.fwhm_um,
        mode_volume_um3: shape.volume_um3,
        mode_volume_lambda3: shape.volume_lambda3,
        q_factor: quality_factor(finesse, order)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn finesse_of_gold_and_dbr() {
        let f = finesse_from_reflectivities(0.97, 0.999).unwrap();
        assert_relative_eq!(f, 199.7196, max_relative = 1e-6);
        // pi * 0.2 / 0.96
        let low = finesse_from_reflectivities(0.04, 0.04).unwrap();
        assert_relative_eq!(low, PI * 0.2 / 0.96, max_relative = 1e-14);
        assert!(finesse_from_reflectivities(1.0, 0.9).is_err());
        assert!(finesse_from_reflectivities(0.0, 0.9).is_err());
    }

    #[test]
    fn finesse_inversion_round_trips() {
        for (r1, r2) in [(0.97, 0.999), (0.5, 0.9), (0.999_9, 0.999)] {
            let f = finesse_from_reflectivities(r1, r2).unwrap();
            assert_relative_eq!(reflectivity_from_finesse(f, r2).unwrap(), r1, max_relative = 1e-10);
        }
    }

    #[test]
    fn linewidth_identity() {
        assert_relative_eq!(finesse_from_linewidth(1.95, 780.0).unwrap(), 200.0, max_relative = 1e-12);
        assert_eq!(finesse_from_linewidth(390.0, 780.0).unwrap(), 1.0);
        assert!(finesse_from_linewidth(0.0, 780.0).is_err());
        let dl = linewidth_from_finesse(200.0, 780.0).unwrap();
        assert_eq!(finesse_from_linewidth(dl, 780.0).unwrap(), 200.0);
    }

    #[test]
    fn fsr_values() {
        let fsr = free_spectral_range(2.75, 780.0).unwrap();
        // 780^2 / 5500 and c / 5.5 um.
        assert_relative_eq!(fsr.nm, 110.618_181_8, max_relative = 1e-9);
        assert_relative_eq!(fsr.thz, 54.507_719_6, max_relative = 1e-9);
        let double = free_spectral_range(5.5, 780.0).unwrap();
        assert_eq!(double.nm * 2.0, fsr.nm);
        assert_eq!(double.thz * 2.0, fsr.thz);
    }

    #[test]
    fn resonance_lengths() {
        assert_relative_eq!(resonance_length(7, 785.0).unwrap(), 2.7475, max_relative = 1e-14);
        assert_eq!(resonance_length(2, 780.0).unwrap(), 0.78);
        assert!(resonance_length(0, 780.0).is_err());
        assert_relative_eq!(physical_separation(2.75, 0.5), 2.25);
    }

    #[test]
    fn airy_is_periodic_and_peaks_at_resonance() {
        assert_eq!(airy_transmission(0.0, 200.0, 390.0, 0.8), 0.8);
        let x = 12.3;
        for k in [-3.0, 1.0, 5.0] {
            assert_relative_eq!(
                airy_transmission(x + k * 390.0, 200.0, 390.0, 1.0),
                airy_transmission(x, 200.0, 390.0, 1.0),
                max_relative = 1e-9
            );
        }
        assert!(airy_fwhm(1.0, 1.0).is_err());
    }

    #[test]
    fn transverse_spacing_and_radius() {
        let dl = transverse_mode_spacing(2.7475, 1400.0, 785.0, 1).unwrap();
        assert_abs_diff_eq!(dl, 5.535, epsilon = 5e-3);
        assert_eq!(transverse_mode_spacing(2.7475, 1400.0, 785.0, 0).unwrap(), 0.0);
        let back = radius_from_splitting(dl, 2.7475, 785.0).unwrap();
        assert_relative_eq!(back, 1400.0, max_relative = 1e-12);
        // dL = lambda / 2 pi gives r1 = L.
        let r = radius_from_splitting(785.0 / (2.0 * PI), 2.7475, 785.0).unwrap();
        assert_relative_eq!(r, 2.7475, max_relative = 1e-14);
    }

    #[test]
    fn stability_guard_is_shared() {
        let want = CavityError::Unstable {
            length_um: 5.0,
            radius_um: 5.0,
        };
        assert_eq!(gaussian_waist(5.0, 5.0, 780.0).unwrap_err(), want);
        assert_eq!(transverse_mode_spacing(5.0, 5.0, 780.0, 1).unwrap_err(), want);
        assert_eq!(CavityGeometry::new(5.0, 1, 5.0, 780.0).unwrap_err(), want);
    }

    #[test]
    fn waist_values() {
        let m = gaussian_waist(2.7475, 1400.0, 785.0).unwrap();
        assert_abs_diff_eq!(m.waist_um, 3.935, epsilon = 2e-3);
        assert_abs_diff_eq!(m.fwhm_um, 4.633, epsilon = 2e-3);
        let small = gaussian_waist(2.73, 100.0, 780.0).unwrap();
        assert_abs_diff_eq!(small.waist_um, 2.011, epsilon = 1e-3);
        // Collapses towards the stability edge.
        let edge = gaussian_waist(99.999_999, 100.0, 780.0).unwrap();
        assert!(edge.waist_um < 0.1);
    }

    #[test]
    fn volumes() {
        let v = mode_volume(2.0 / PI.sqrt(), 1.0, 780.0).unwrap();
        assert_relative_eq!(v.um3, 1.0, max_relative = 1e-14);
        let c = mode_volume_conventions(3.7, 2.75, 780.0).unwrap();
        assert_abs_diff_eq!(c.from_waist.um3, 21.33, epsilon = 0.01);
        assert_abs_diff_eq!(c.from_waist.lambda3, 44.94, epsilon = 0.02);
        assert_abs_diff_eq!(c.waist_equals_fwhm.lambda3, 62.3, epsilon = 0.1);
        let v18 = mode_volume(2.0, 2.73, 780.0).unwrap();
        assert_abs_diff_eq!(v18.lambda3, 18.07, epsilon = 0.01);
        let pen = mode_volume_with_penetration(2.0, 2.73, 0.5, 780.0).unwrap();
        assert!(pen.um3 > v18.um3);
    }

    #[test]
    fn quality_factors() {
        assert_eq!(quality_factor(200.0, 7).unwrap(), 1400.0);
        assert_eq!(quality_factor(123.0, 1).unwrap(), 123.0);
        assert_relative_eq!(quality_factor(3.7e4, 7).unwrap(), 2.59e5);
    }

    #[test]
    fn hermite_gauss_nodes() {
        let w = 3.0;
        assert_eq!(hermite_gauss_intensity(TransverseMode::FUNDAMENTAL, w, 0.0, 0.0).unwrap(), 1.0);
        assert_eq!(hermite_gauss_intensity(TransverseMode::new(0, 1), w, 0.0, 0.0).unwrap(), 0.0);
        let half = w * (std::f64::consts::LN_2 / 2.0).sqrt();
        assert_relative_eq!(
            hermite_gauss_intensity(TransverseMode::FUNDAMENTAL, w, half, 0.0).unwrap(),
            0.5,
            max_relative = 1e-14
        );
        assert_eq!(hermite(3, 1.5), 8.0 * 1.5f64.powi(3) - 12.0 * 1.5);
    }

    #[test]
    fn fixed_mirror_reflection() {
        let g = MirrorSpec::gold();
        assert_eq!(g.kind(), MirrorKind::Fixed);
        assert_relative_eq!(g.reflection(700.0).norm_sqr(), 0.97, max_relative = 1e-14);
        assert!(MirrorSpec::fixed(0.97, Some(0.05), 0.0).is_err());
    }

    #[test]
    fn plane_wave_transmission() {
        let t = plane_wave_peak_transmission(0.5, 0.5, 0.5, 0.5).unwrap();
        assert_relative_eq!(t, 1.0, max_relative = 1e-14);
    }
}
