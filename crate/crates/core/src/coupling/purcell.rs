use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{non_negative, open_fraction, positive, CouplingError};

/// Closed-cavity Purcell factor 3 Q / (4 pi^2 V), with V in cubic wavelengths.
pub fn purcell_max(q_factor: f64, volume_lambda3: f64) -> Result<f64, CouplingError> {
    positive("quality factor", q_factor)?;
    positive("mode volume", volume_lambda3)?;
    Ok(3.0 * q_factor / (4.0 * PI * PI * volume_lambda3))
}

/// Fraction of the emission subtended by the cavity mode's far-field cone,
/// theta^2 / 4 with theta = lambda / (pi w0).
pub fn solid_angle_fraction(waist_um: f64, wavelength_nm: f64) -> Result<f64, CouplingError> {
    positive("waist", waist_um)?;
    positive("wavelength", wavelength_nm)?;
    let theta = wavelength_nm * 1e-3 / (PI * waist_um);
    Ok(theta * theta / 4.0)
}

pub fn effective_enhancement(
    purcell: f64,
    solid_fraction: f64,
    overlap: f64,
) -> Result<f64, CouplingError> {
    Ok(non_negative("Purcell factor", purcell)?
        * non_negative("solid-angle fraction", solid_fraction)?
        * non_negative("spectral overlap", overlap)?)
}

/// Total 0-0 rate factor when the fraction `solid_fraction * overlap` of the
/// free-space 0-0 emission is replaced by cavity-enhanced emission:
/// 1 + f (F_p - 1). Equals 1 when F_p = 1.
pub fn rate_enhancement(
    purcell: f64,
    solid_fraction: f64,
    overlap: f64,
) -> Result<f64, CouplingError> {
    non_negative("Purcell factor", purcell)?;
    let coupled = non_negative("solid-angle fraction", solid_fraction)?
        * non_negative("spectral overlap", overlap)?;
    if coupled > 1.0 {
        return Err(CouplingError::InvalidFraction {
            name: "solid-angle fraction x overlap",
            value: coupled,
        });
    }
    Ok(1.0 + coupled * (purcell - 1.0))
}

/// 0-0 branching ratio after the 0-0 rate is multiplied by `enhancement`.
pub fn branching_ratio(alpha0: f64, enhancement: f64) -> Result<f64, CouplingError> {
    open_fraction("alpha0", alpha0)?;
    non_negative("enhancement", enhancement)?;
    let boosted = enhancement * alpha0;
    Ok(boosted / (boosted + (1.0 - alpha0)))
}

/// Enhancement needed to lift the branching ratio from `alpha0` to `target`.
pub fn required_enhancement(alpha0: f64, target: f64) -> Result<f64, CouplingError> {
    open_fraction("alpha0", alpha0)?;
    open_fraction("target", target)?;
    if target <= alpha0 {
        return Err(CouplingError::TargetNotAbove { alpha0, target });
    }
    Ok(target * (1.0 - alpha0) / (alpha0 * (1.0 - target)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PurcellReport {
    pub purcell_max: f64,
    pub solid_angle_fraction: f64,
    pub spectral_overlap: f64,
    pub effective_enhancement: f64,
    pub branching_ratio_after: f64,
}

impl PurcellReport {
    /// Total 0-0 rate factor behind `branching_ratio_after`.
    pub fn rate_enhancement(&self) -> f64 {
        1.0 + self.solid_angle_fraction * self.spectral_overlap * (self.purcell_max - 1.0)
    }
}

/// Chains the three factors. The branching ratio uses [`rate_enhancement`].
pub fn purcell_report(
    purcell: f64,
    solid_fraction: f64,
    overlap: f64,
    alpha0: f64,
) -> Result<PurcellReport, CouplingError> {
    let effective = effective_enhancement(purcell, solid_fraction, overlap)?;
    Ok(PurcellReport {
        purcell_max: purcell,
        solid_angle_fraction: solid_fraction,
        spectral_overlap: overlap,
        effective_enhancement: effective,
        branching_ratio_after: branching_ratio(alpha0, rate_enhancement(purcell, solid_fraction, overlap)?)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn purcell_values() {
        assert_abs_diff_eq!(purcell_max(1400.0, 70.0).unwrap(), 1.5198, epsilon = 1e-4);
        assert_relative_eq!(purcell_max(4.0 * PI * PI / 3.0, 1.0).unwrap(), 1.0, max_relative = 1e-15);
        assert!(purcell_max(0.0, 1.0).is_err());
    }

    #[test]
    fn solid_angle_values() {
        // theta = 0.78 / (pi 2.28) = 0.1088951, theta^2 / 4 = 2.96456e-3
        assert_abs_diff_eq!(solid_angle_fraction(2.28, 780.0).unwrap(), 2.964557e-3, epsilon = 1e-9);
        assert!(solid_angle_fraction(1e12, 780.0).unwrap() < 1e-20);
        let a = solid_angle_fraction(2.0, 600.0).unwrap();
        let b = solid_angle_fraction(4.0, 1200.0).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-15);
    }

    #[test]
    fn enhancement_chain() {
        assert_relative_eq!(effective_enhancement(1.5, 0.3e-2, 1e-2).unwrap(), 4.5e-5, max_relative = 1e-12);
        assert_eq!(effective_enhancement(1.5, 0.0, 1e-2).unwrap(), 0.0);
        assert_eq!(effective_enhancement(1000.0, 1.0, 1.0).unwrap(), 1000.0);
        assert!(effective_enhancement(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn branching_values() {
        assert_relative_eq!(branching_ratio(0.3, 1.0).unwrap(), 0.3, max_relative = 1e-15);
        assert_relative_eq!(branching_ratio(0.3, 20.0).unwrap(), 6.0 / 6.7, max_relative = 1e-15);
        assert_abs_diff_eq!(required_enhancement(0.3, 0.85).unwrap(), 13.2222, epsilon = 1e-4);
        assert_abs_diff_eq!(required_enhancement(0.3, 0.98).unwrap(), 114.3333, epsilon = 1e-4);
        assert_abs_diff_eq!(branching_ratio(0.3, 114.3333).unwrap(), 0.98, epsilon = 1e-6);
        assert!(required_enhancement(0.3, 0.3).is_err());
        assert!(required_enhancement(0.3, 0.2).is_err());
        let near = required_enhancement(0.3, 0.3 + 1e-9).unwrap();
        assert_abs_diff_eq!(near, 1.0, epsilon = 1e-7);
    }

    #[test]
    fn report_respects_bound() {
        let r = purcell_report(1.5, 0.3e-2, 1e-2, 0.3).unwrap();
        assert!(r.effective_enhancement <= r.purcell_max);
        // A 1.5x Purcell factor on a 3e-5 coupled fraction leaves alpha0 essentially unchanged.
        assert_abs_diff_eq!(r.branching_ratio_after, 0.3, epsilon = 1e-5);
        assert!(r.branching_ratio_after > 0.3);
    }

    #[test]
    fn rate_enhancement_limits() {
        assert_eq!(rate_enhancement(1.0, 0.3, 0.5).unwrap(), 1.0);
        assert_eq!(rate_enhancement(50.0, 1.0, 1.0).unwrap(), 50.0);
        assert_eq!(rate_enhancement(50.0, 0.0, 1.0).unwrap(), 1.0);
        assert!(rate_enhancement(5.0, 2.0, 1.0).is_err());
    }
}
