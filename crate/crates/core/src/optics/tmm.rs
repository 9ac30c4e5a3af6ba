use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{LayerStack, OpticsError};
use crate::spectrum::{check_grid, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    /// TE: electric field perpendicular to the plane of incidence.
    S,
    /// TM: magnetic field perpendicular to the plane of incidence.
    P,
}

/// Complex amplitude and power response of a stack at one wavelength/angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackResponse {
    pub wavelength_nm: f64,
    pub angle_rad: f64,
    pub polarization: Polarization,
    /// Amplitude reflection coefficient seen from the ambient side.
    pub r: Complex64,
    /// Amplitude transmission coefficient of the tangential field.
    pub t: Complex64,
    pub reflectance: f64,
    pub transmittance: f64,
}

impl StackResponse {
    /// Reflection phase in radians, in (-pi, pi].
    pub fn reflection_phase(&self) -> f64 {
        self.r.arg()
    }
}

/// Anything with a normal-incidence complex reflection coefficient.
pub trait Reflector {
    fn reflection(&self, wavelength_nm: f64) -> Complex64;

    /// Whether `wavelength_nm` lies in a high-reflectance region where the
    /// reflection phase slope reads as a penetration depth.
    fn in_stopband(&self, wavelength_nm: f64) -> bool {
        self.reflection(wavelength_nm).norm_sqr() >= super::DEFAULT_STOPBAND_THRESHOLD
    }
}

impl Reflector for LayerStack {
    fn reflection(&self, wavelength_nm: f64) -> Complex64 {
        characteristic(self, wavelength_nm, 0.0, Polarization::S).reflection()
    }
}

fn check_inputs(wavelength_nm: f64, angle_rad: f64) -> Result<(), OpticsError> {
    if !(wavelength_nm.is_finite() && wavelength_nm > 0.0) {
        return Err(OpticsError::InvalidWavelength(wavelength_nm));
    }
    if !(angle_rad.is_finite() && (0.0..FRAC_PI_2).contains(&angle_rad)) {
        return Err(OpticsError::InvalidAngle(angle_rad));
    }
    Ok(())
}

/// Evaluates the stack with the 2x2 characteristic-matrix method.
pub fn stack_response(
    stack: &LayerStack,
    wavelength_nm: f64,
    angle_rad: f64,
    polarization: Polarization,
) -> Result<StackResponse, OpticsError> {
    check_inputs(wavelength_nm, angle_rad)?;
    Ok(characteristic(stack, wavelength_nm, angle_rad, polarization).response(
        wavelength_nm,
        angle_rad,
        polarization,
    ))
}

/// Power reflectance on a wavelength grid. Samples are evaluated in parallel;
/// each one is independent so the result matches a sequential sweep exactly.
pub fn reflectivity_spectrum(
    stack: &LayerStack,
    wavelengths_nm: &[f64],
    angle_rad: f64,
    polarization: Polarization,
) -> Result<Spectrum, OpticsError> {
    check_grid(wavelengths_nm)?;
    for &l in wavelengths_nm {
        check_inputs(l, angle_rad)?;
    }
    let values = wavelengths_nm
        .par_iter()
        .map(|&l| characteristic(stack, l, angle_rad, polarization).reflectance())
        .collect();
    Ok(Spectrum::new(wavelengths_nm.to_vec(), values)?)
}

/// Result of multiplying out the layer matrices: `[B, C]^T = M [1, eta_sub]^T`.
struct Assembled {
    eta_ambient: Complex64,
    eta_substrate: Complex64,
    b: Complex64,
    c: Complex64,
}

impl Assembled {
    fn denominator(&self) -> Complex64 {
        self.eta_ambient * self.b + self.c
    }

    fn reflection(&self) -> Complex64 {
        (self.eta_ambient * self.b - self.c) / self.denominator()
    }

    fn reflectance(&self) -> f64 {
        self.reflection().norm_sqr()
    }

    fn response(&self, wavelength_nm: f64, angle_rad: f64, polarization: Polarization) -> StackResponse {
        let r = self.reflection();
        let t = 2.0 * self.eta_ambient / self.denominator();
        let transmittance = self.eta_substrate.re / self.eta_ambient.re * t.norm_sqr();
        StackResponse {
            wavelength_nm,
            angle_rad,
            polarization,
            r,
            t,
            reflectance: r.norm_sqr(),
            transmittance,
        }
    }
}

/// Cosine of the propagation angle in a medium of index `n`, given the
/// conserved transverse component `n0 sin(theta0)`. Evanescent solutions take
/// the branch with negative imaginary part (decaying for exp[i(wt - kz)]).
fn cos_in(n: f64, transverse: f64) -> Complex64 {
    let s = transverse / n;
    let c = Complex64::new(1.0 - s * s, 0.0).sqrt();
    if c.im > 0.0 {
        -c
    } else {
        c
    }
}

/// Tilted optical admittance in units of the free-space admittance.
fn admittance(n: f64, cos: Complex64, polarization: Polarization) -> Complex64 {
    match polarization {
        Polarization::S => n * cos,
        Polarization::P => n / cos,
    }
}

fn characteristic(
    stack: &LayerStack,
    wavelength_nm: f64,
    angle_rad: f64,
    polarization: Polarization,
) -> Assembled {
    let n0 = stack.ambient_index();
    let transverse = n0 * angle_rad.sin();
    let eta_ambient = admittance(n0, Complex64::new(angle_rad.cos(), 0.0), polarization);
    let ns = stack.substrate_index();
    let eta_substrate = admittance(ns, cos_in(ns, transverse), polarization);

    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::i();
    // Running product M = M_1 M_2 ... M_k, stored row-major.
    let (mut m11, mut m12, mut m21, mut m22) = (one, zero, zero, one);
    for layer in stack.layers() {
        let n = layer.refractive_index();
        let cos = cos_in(n, transverse);
        let eta = admittance(n, cos, polarization);
        let delta = 2.0 * PI * n * layer.thickness_nm() * cos / wavelength_nm;
        let (cd, sd) = (delta.cos(), delta.sin());
        let (a11, a12, a21, a22) = (cd, i * sd / eta, i * eta * sd, cd);
        (m11, m12, m21, m22) = (
            m11 * a11 + m12 * a21,
            m11 * a12 + m12 * a22,
            m21 * a11 + m22 * a21,
            m21 * a12 + m22 * a22,
        );
    }
    Assembled {
        eta_ambient,
        eta_substrate,
        b: m11 + m12 * eta_substrate,
        c: m21 + m22 * eta_substrate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::{quarter_wave_stack, Layer};
    use approx::assert_abs_diff_eq;

    #[test]
    fn bare_interface_is_fresnel() {
        let s = LayerStack::bare(1.0, 1.5).unwrap();
        let r = stack_response(&s, 633.0, 0.0, Polarization::S).unwrap();
        assert_abs_diff_eq!(r.reflectance, 0.04, epsilon = 1e-15);
        assert_abs_diff_eq!(r.transmittance, 0.96, epsilon = 1e-15);
    }

    #[test]
    fn oblique_fresnel_matches_textbook() {
        // Brewster angle for 1 -> 1.5: p reflectance vanishes.
        let s = LayerStack::bare(1.0, 1.5).unwrap();
        let brewster = 1.5f64.atan();
        let p = stack_response(&s, 500.0, brewster, Polarization::P).unwrap();
        assert!(p.reflectance < 1e-28);
        // s-polarised Fresnel coefficient at 45 degrees.
        let th = std::f64::consts::FRAC_PI_4;
        let ct = (1.0 - (th.sin() / 1.5).powi(2)).sqrt();
        let rs = (th.cos() - 1.5 * ct) / (th.cos() + 1.5 * ct);
        let got = stack_response(&s, 500.0, th, Polarization::S).unwrap();
        assert_abs_diff_eq!(got.reflectance, rs * rs, epsilon = 1e-14);
    }

    #[test]
    fn total_internal_reflection_keeps_energy() {
        let s = LayerStack::new(1.5, 1.0, vec![Layer::new(2.0, 80.0).unwrap()]).unwrap();
        let r = stack_response(&s, 600.0, 1.2, Polarization::P).unwrap();
        assert_abs_diff_eq!(r.reflectance, 1.0, epsilon = 1e-12);
        assert_eq!(r.transmittance, 0.0);
    }

    #[test]
    fn polarizations_agree_at_normal_incidence() {
        let s = quarter_wave_stack(2.10, 1.46, 5, 700.0, true).unwrap();
        for l in [550.0, 700.0, 812.5] {
            let a = stack_response(&s, l, 0.0, Polarization::S).unwrap();
            let b = stack_response(&s, l, 0.0, Polarization::P).unwrap();
            assert_abs_diff_eq!(a.reflectance, b.reflectance, epsilon = 1e-14);
        }
    }

    #[test]
    fn rejects_bad_angles_and_wavelengths() {
        let s = LayerStack::bare(1.0, 1.5).unwrap();
        assert!(stack_response(&s, 0.0, 0.0, Polarization::S).is_err());
        assert!(stack_response(&s, 500.0, FRAC_PI_2, Polarization::S).is_err());
        assert!(stack_response(&s, 500.0, -0.1, Polarization::S).is_err());
        assert!(reflectivity_spectrum(&s, &[], 0.0, Polarization::S).is_err());
        assert!(reflectivity_spectrum(&s, &[2.0, 1.0], 0.0, Polarization::S).is_err());
    }
}
