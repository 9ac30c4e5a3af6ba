use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::tmm::Reflector;
use super::OpticsError;

/// Relative step in angular frequency for the central difference.
pub const GROUP_DELAY_REL_STEP: f64 = 1e-4;

/// Effective penetration length of a mirror, from its reflection-phase slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupDelay {
    pub wavelength_nm: f64,
    /// `-(c/2) dphi/domega`, in micrometres.
    pub length_um: f64,
    /// False outside the high-reflectance band, where the phase slope does
    /// not describe a penetration depth.
    pub reliable: bool,
}

pub fn group_delay_length<M: Reflector + ?Sized>(
    mirror: &M,
    wavelength_nm: f64,
) -> Result<GroupDelay, OpticsError> {
    group_delay_length_with_step(mirror, wavelength_nm, GROUP_DELAY_REL_STEP)
}

/// Central difference in omega with relative step `rel_step`.
pub fn group_delay_length_with_step<M: Reflector + ?Sized>(
    mirror: &M,
    wavelength_nm: f64,
    rel_step: f64,
) -> Result<GroupDelay, OpticsError> {
    if !(wavelength_nm.is_finite() && wavelength_nm > 0.0) {
        return Err(OpticsError::InvalidWavelength(wavelength_nm));
    }
    if !(rel_step > 0.0 && rel_step < 0.1) {
        return Err(OpticsError::InvalidStep(rel_step));
    }
    // omega is proportional to 1/lambda.
    let r_plus = mirror.reflection(wavelength_nm / (1.0 + rel_step));
    let r_minus = mirror.reflection(wavelength_nm / (1.0 - rel_step));
    // Phase difference taken as one argument so no unwrapping is needed.
    let dphi = (r_plus / r_minus).arg();
    // L = -(c/2) dphi/domega with domega = 2 h omega and omega = 2 pi c / lambda.
    let length_nm = -dphi * wavelength_nm / (8.0 * PI * rel_step);
    Ok(GroupDelay {
        wavelength_nm,
        length_um: length_nm * 1e-3,
        reliable: mirror.in_stopband(wavelength_nm),
    })
}
