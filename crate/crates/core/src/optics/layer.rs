use serde::{Deserialize, Serialize};

use super::OpticsError;

/// Refractive indices used when none are supplied. Dispersion-free.
pub mod materials {
    pub const AIR: f64 = 1.0;
    pub const SIO2: f64 = 1.46;
    pub const TA2O5: f64 = 2.10;
    pub const TIO2: f64 = 2.35;
    pub const ANTHRACENE: f64 = 1.60;
}

fn check_index(n: f64) -> Result<f64, OpticsError> {
    if n.is_finite() && n >= 1.0 {
        Ok(n)
    } else {
        Err(OpticsError::InvalidIndex(n))
    }
}

/// One homogeneous dielectric layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLayer")]
pub struct Layer {
    #[serde(rename = "index")]
    refractive_index: f64,
    thickness_nm: f64,
}

#[derive(Deserialize)]
struct RawLayer {
    index: f64,
    thickness_nm: f64,
}

impl TryFrom<RawLayer> for Layer {
    type Error = OpticsError;
    fn try_from(raw: RawLayer) -> Result<Self, Self::Error> {
        Layer::new(raw.index, raw.thickness_nm)
    }
}

impl Layer {
    pub fn new(refractive_index: f64, thickness_nm: f64) -> Result<Self, OpticsError> {
        check_index(refractive_index)?;
        if !(thickness_nm.is_finite() && thickness_nm > 0.0) {
            return Err(OpticsError::InvalidThickness(thickness_nm));
        }
        Ok(Self {
            refractive_index,
            thickness_nm,
        })
    }

    /// A layer of quarter-wave optical thickness at `wavelength_nm`.
    pub fn quarter_wave(refractive_index: f64, wavelength_nm: f64) -> Result<Self, OpticsError> {
        check_index(refractive_index)?;
        if !(wavelength_nm.is_finite() && wavelength_nm > 0.0) {
            return Err(OpticsError::InvalidWavelength(wavelength_nm));
        }
        Self::new(refractive_index, wavelength_nm / (4.0 * refractive_index))
    }

    pub fn refractive_index(&self) -> f64 {
        self.refractive_index
    }

    pub fn thickness_nm(&self) -> f64 {
        self.thickness_nm
    }
}

/// Ordered layers between an ambient half-space and a substrate half-space.
///
/// The first layer is the one touching the ambient medium. Light is incident
/// from the ambient side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStack")]
pub struct LayerStack {
    ambient_index: f64,
    substrate_index: f64,
    layers: Vec<Layer>,
}

#[derive(Deserialize)]
struct RawStack {
    ambient_index: f64,
    substrate_index: f64,
    layers: Vec<Layer>,
}

impl TryFrom<RawStack> for LayerStack {
    type Error = OpticsError;
    fn try_from(raw: RawStack) -> Result<Self, Self::Error> {
        LayerStack::new(raw.ambient_index, raw.substrate_index, raw.layers)
    }
}

impl LayerStack {
    pub fn new(
        ambient_index: f64,
        substrate_index: f64,
        layers: Vec<Layer>,
    ) -> Result<Self, OpticsError> {
        check_index(ambient_index)?;
        check_index(substrate_index)?;
        Ok(Self {
            ambient_index,
            substrate_index,
            layers,
        })
    }

    /// A bare ambient/substrate interface.
    pub fn bare(ambient_index: f64, substrate_index: f64) -> Result<Self, OpticsError> {
        Self::new(ambient_index, substrate_index, Vec::new())
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn ambient_index(&self) -> f64 {
        self.ambient_index
    }

    pub fn substrate_index(&self) -> f64 {
        self.substrate_index
    }

    pub fn with_ambient(mut self, index: f64) -> Result<Self, OpticsError> {
        self.ambient_index = check_index(index)?;
        Ok(self)
    }

    pub fn with_substrate(mut self, index: f64) -> Result<Self, OpticsError> {
        self.substrate_index = check_index(index)?;
        Ok(self)
    }

    /// Adds a layer on the ambient side.
    pub fn with_top_layer(mut self, layer: Layer) -> Self {
        self.layers.insert(0, layer);
        self
    }

    /// The same structure seen from the substrate side.
    pub fn reversed(&self) -> Self {
        let mut layers = self.layers.clone();
        layers.reverse();
        Self {
            ambient_index: self.substrate_index,
            substrate_index: self.ambient_index,
            layers,
        }
    }

    pub fn total_thickness_nm(&self) -> f64 {
        self.layers.iter().map(Layer::thickness_nm).sum()
    }
}

/// Builds a quarter-wave Bragg stack of `n_bilayers` high/low pairs centred at
/// `center_wavelength_nm`, between air and a fused-silica substrate.
///
/// With `low_index_on_top` the low-index layer of each pair faces the
/// ambient, which puts a field antinode at the top surface.
pub fn quarter_wave_stack(
    n_high: f64,
    n_low: f64,
    n_bilayers: usize,
    center_wavelength_nm: f64,
    low_index_on_top: bool,
) -> Result<LayerStack, OpticsError> {
    check_index(n_high)?;
    check_index(n_low)?;
    if n_high <= n_low {
        return Err(OpticsError::IndexOrder {
            high: n_high,
            low: n_low,
        });
    }
    let high = Layer::quarter_wave(n_high, center_wavelength_nm)?;
    let low = Layer::quarter_wave(n_low, center_wavelength_nm)?;
    let pair = if low_index_on_top {
        [low, high]
    } else {
        [high, low]
    };
    let layers = std::iter::repeat(pair).take(n_bilayers).flatten().collect();
    LayerStack::new(materials::AIR, materials::SIO2, layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ta2o5_sio2_thicknesses() {
        let s = quarter_wave_stack(2.10, 1.46, 13, 780.0, true).unwrap();
        assert_eq!(s.layers().len(), 26);
        // 780 / (4 * 1.46) and 780 / (4 * 2.10), by hand.
        assert_abs_diff_eq!(s.layers()[0].thickness_nm(), 133.561_643_8, epsilon = 1e-6);
        assert_abs_diff_eq!(s.layers()[1].thickness_nm(), 92.857_142_86, epsilon = 1e-6);
        assert_eq!(s.layers()[0].refractive_index(), 1.46);
        assert_eq!(s.layers()[25].refractive_index(), 2.10);
    }

    #[test]
    fn zero_bilayers_is_bare_interface() {
        let s = quarter_wave_stack(2.10, 1.46, 0, 780.0, true).unwrap();
        assert!(s.layers().is_empty());
    }

    #[test]
    fn rejects_unphysical_input() {
        assert_eq!(
            quarter_wave_stack(2.1, 0.9, 3, 780.0, true),
            Err(OpticsError::InvalidIndex(0.9))
        );
        assert!(matches!(
            quarter_wave_stack(1.4, 1.46, 3, 780.0, true),
            Err(OpticsError::IndexOrder { .. })
        ));
        assert!(Layer::new(1.5, 0.0).is_err());
        assert!(LayerStack::bare(0.5, 1.5).is_err());
    }

    #[test]
    fn json_layers_are_validated() {
        let bad = r#"{"ambient_index":1,"substrate_index":1.5,"layers":[{"index":1.5,"thickness_nm":0}]}"#;
        assert!(serde_json::from_str::<LayerStack>(bad).is_err());
        let good = r#"{"ambient_index":1,"substrate_index":1.5,"layers":[{"index":1.5,"thickness_nm":10}]}"#;
        let s: LayerStack = serde_json::from_str(good).unwrap();
        assert_eq!(s.layers()[0].thickness_nm(), 10.0);
    }
}
