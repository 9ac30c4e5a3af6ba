use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use super::{branching_ratio, open_fraction, positive, CouplingError};
use crate::spectrum::{linspace, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineShape {
    #[default]
    Lorentzian,
    Gaussian,
}

impl LineShape {
    /// Area-normalised profile of the given FWHM centred at zero.
    pub fn density(self, offset_nm: f64, fwhm_nm: f64) -> f64 {
        match self {
            LineShape::Lorentzian => {
                let hw = fwhm_nm / 2.0;
                hw / (PI * (offset_nm * offset_nm + hw * hw))
            }
            LineShape::Gaussian => {
                let a = 4.0 * LN_2 / (fwhm_nm * fwhm_nm);
                (a / PI).sqrt() * (-a * offset_nm * offset_nm).exp()
            }
        }
    }
}

/// One emission band: centre, width and share of the total emission.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub center_nm: f64,
    pub fwhm_nm: f64,
    pub weight: f64,
    #[serde(default)]
    pub shape: LineShape,
}

impl Band {
    pub fn new(center_nm: f64, fwhm_nm: f64, weight: f64, shape: LineShape) -> Self {
        Self {
            center_nm,
            fwhm_nm,
            weight,
            shape,
        }
    }

    pub fn density(&self, wavelength_nm: f64) -> f64 {
        self.weight * self.shape.density(wavelength_nm - self.center_nm, self.fwhm_nm)
    }
}

/// Zero-phonon line plus Stokes-shifted vibronic bands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEmitter")]
pub struct EmitterModel {
    zpl: Band,
    vibronic: Vec<Band>,
}

#[derive(Deserialize)]
struct RawEmitter {
    zpl: Band,
    vibronic: Vec<Band>,
}

impl TryFrom<RawEmitter> for EmitterModel {
    type Error = CouplingError;
    fn try_from(raw: RawEmitter) -> Result<Self, Self::Error> {
        EmitterModel::new(raw.zpl, raw.vibronic)
    }
}

impl EmitterModel {
    /// Weights must sum to 1 within 1e-9 and every width must be positive.
    pub fn new(zpl: Band, vibronic: Vec<Band>) -> Result<Self, CouplingError> {
        open_fraction("zpl weight", zpl.weight)?;
        for band in std::iter::once(&zpl).chain(&vibronic) {
            positive("band centre", band.center_nm)?;
            positive("band FWHM", band.fwhm_nm)?;
            if !(band.weight.is_finite() && band.weight >= 0.0) {
                return Err(CouplingError::Negative {
                    name: "band weight",
                    value: band.weight,
                });
            }
        }
        let total = zpl.weight + vibronic.iter().map(|b| b.weight).sum::<f64>();
        if (total - 1.0).abs() > 1e-9 {
            return Err(CouplingError::WeightsNotNormalized(total));
        }
        Ok(Self { zpl, vibronic })
    }

    /// Synthetic room-temperature dibenzoterrylene model: Lorentzian 0-0 line
    /// at 785 nm carrying 30 % of the emission, three Gaussian vibronic bands
    /// out to about 860 nm.
    pub fn dbt() -> Self {
        Self::new(
            Band::new(785.0, 8.0, 0.30, LineShape::Lorentzian),
            vec![
                Band::new(800.0, 12.0, 0.30, LineShape::Gaussian),
                Band::new(820.0, 15.0, 0.25, LineShape::Gaussian),
                Band::new(845.0, 20.0, 0.15, LineShape::Gaussian),
            ],
        )
        .expect("valid constants")
    }

    pub fn zpl(&self) -> &Band {
        &self.zpl
    }

    pub fn vibronic(&self) -> &[Band] {
        &self.vibronic
    }

    /// 0-0 branching ratio.
    pub fn alpha0(&self) -> f64 {
        self.zpl.weight
    }

    pub fn bands(&self) -> impl Iterator<Item = &Band> {
        std::iter::once(&self.zpl).chain(&self.vibronic)
    }

    /// Emission per nm; integrates to 1 over all wavelengths.
    pub fn density(&self, wavelength_nm: f64) -> f64 {
        self.bands().map(|b| b.density(wavelength_nm)).sum()
    }

    pub fn spectrum(&self, grid_nm: &[f64]) -> Result<Spectrum, CouplingError> {
        Ok(Spectrum::from_fn(grid_nm, |l| self.density(l))?)
    }

    /// Uniform grid covering every band out to `span_fwhm` widths either side.
    pub fn grid(&self, step_nm: f64, span_fwhm: f64) -> Result<Vec<f64>, CouplingError> {
        positive("grid step", step_nm)?;
        positive("grid span", span_fwhm)?;
        let lo = self
            .bands()
            .map(|b| b.center_nm - span_fwhm * b.fwhm_nm)
            .fold(f64::INFINITY, f64::min)
            .max(step_nm);
        let hi = self
            .bands()
            .map(|b| b.center_nm + span_fwhm * b.fwhm_nm)
            .fold(f64::NEG_INFINITY, f64::max);
        let n = ((hi - lo) / step_nm).ceil() as usize + 1;
        Ok(linspace(lo, lo + step_nm * (n - 1) as f64, n))
    }

    /// The same emitter after its 0-0 rate is multiplied by `enhancement`:
    /// the 0-0 weight becomes the new branching ratio and the vibronic bands
    /// share the remainder in their original proportions.
    pub fn with_zpl_enhancement(&self, enhancement: f64) -> Result<Self, CouplingError> {
        let alpha = branching_ratio(self.alpha0(), enhancement)?;
        let scale = (1.0 - alpha) / (1.0 - self.alpha0());
        let mut zpl = self.zpl;
        zpl.weight = alpha;
        let vibronic = self
            .vibronic
            .iter()
            .map(|b| Band {
                weight: b.weight * scale,
                ..*b
            })
            .collect();
        Self::new(zpl, vibronic)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn dbt_model_is_normalised() {
        let e = EmitterModel::dbt();
        let grid = linspace(0.0, 3000.0, 600_001);
        let s = e.spectrum(&grid).unwrap();
        // Lorentzian wings beyond the grid hold ~ fwhm / (pi * 2200) of the ZPL weight.
        assert_abs_diff_eq!(s.integrate(), 1.0, epsilon = 1e-3);
        assert_eq!(e.alpha0(), 0.30);
    }

    #[test]
    fn lineshapes_have_the_stated_fwhm() {
        for shape in [LineShape::Lorentzian, LineShape::Gaussian] {
            let peak = shape.density(0.0, 4.0);
            assert_abs_diff_eq!(shape.density(2.0, 4.0), peak / 2.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn rejects_bad_weights() {
        let zpl = Band::new(785.0, 1.0, 0.3, LineShape::Lorentzian);
        let vib = vec![Band::new(800.0, 10.0, 0.6, LineShape::Gaussian)];
        assert!(matches!(
            EmitterModel::new(zpl, vib),
            Err(CouplingError::WeightsNotNormalized(_))
        ));
        let zero_width = vec![Band::new(800.0, 0.0, 0.7, LineShape::Gaussian)];
        assert!(EmitterModel::new(zpl, zero_width).is_err());
    }

    #[test]
    fn enhancement_redistributes_weights() {
        let e = EmitterModel::dbt().with_zpl_enhancement(20.0).unwrap();
        assert_abs_diff_eq!(e.alpha0(), 6.0 / 6.7, epsilon = 1e-12);
        let v = e.vibronic();
        assert_abs_diff_eq!(v[0].weight / v[1].weight, 0.30 / 0.25, epsilon = 1e-12);
    }

    #[test]
    fn json_schema() {
        let text = r#"{"zpl":{"center_nm":785,"fwhm_nm":8,"weight":0.3},
            "vibronic":[{"center_nm":800,"fwhm_nm":12,"weight":0.7,"shape":"gaussian"}]}"#;
        let e: EmitterModel = serde_json::from_str(text).unwrap();
        assert_eq!(e.zpl().shape, LineShape::Lorentzian);
        assert_eq!(e.vibronic()[0].shape, LineShape::Gaussian);
        let bad = text.replace("0.7", "0.5");
        assert!(serde_json::from_str::<EmitterModel>(&bad).is_err());
    }
}
