//! Sampled wavelength series.
//!
//! Emitter emission, mirror reflectivity and filtered cavity output all share
//! this representation: a strictly ascending wavelength grid in nm paired
//! with one value per sample.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpectrumError {
    #[error("spectrum is empty")]
    Empty,
    #[error("wavelength grid and values differ in length ({grid} vs {values})")]
    LengthMismatch { grid: usize, values: usize },
    #[error("wavelength grid is not strictly ascending at index {0}")]
    NotAscending(usize),
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("wavelength grids do not overlap")]
    NoOverlap,
}

/// A strictly ascending wavelength grid (nm) with one value per sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    wavelengths_nm: Vec<f64>,
    values: Vec<f64>,
}

impl Spectrum {
    pub fn new(wavelengths_nm: Vec<f64>, values: Vec<f64>) -> Result<Self, SpectrumError> {
        check_grid(&wavelengths_nm)?;
        if values.len() != wavelengths_nm.len() {
            return Err(SpectrumError::LengthMismatch {
                grid: wavelengths_nm.len(),
                values: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(SpectrumError::NonFinite(i));
        }
        Ok(Self {
            wavelengths_nm,
            values,
        })
    }

    /// Samples `f` on `grid`.
    pub fn from_fn(grid: &[f64], f: impl Fn(f64) -> f64) -> Result<Self, SpectrumError> {
        let values = grid.iter().map(|&l| f(l)).collect();
        Self::new(grid.to_vec(), values)
    }

    pub fn wavelengths(&self) -> &[f64] {
        &self.wavelengths_nm
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.wavelengths_nm
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }

    pub fn range(&self) -> (f64, f64) {
        (self.wavelengths_nm[0], self.wavelengths_nm[self.len() - 1])
    }

    /// Trapezoidal integral over the whole grid.
    pub fn integrate(&self) -> f64 {
        trapezoid(&self.wavelengths_nm, &self.values)
    }

    /// Linear interpolation; zero outside the sampled range.
    pub fn interpolate(&self, wavelength_nm: f64) -> f64 {
        let x = &self.wavelengths_nm;
        let n = x.len();
        if wavelength_nm < x[0] || wavelength_nm > x[n - 1] {
            return 0.0;
        }
        if n == 1 {
            return self.values[0];
        }
        let hi = x.partition_point(|&v| v < wavelength_nm).clamp(1, n - 1);
        let lo = hi - 1;
        let t = (wavelength_nm - x[lo]) / (x[hi] - x[lo]);
        self.values[lo] + t * (self.values[hi] - self.values[lo])
    }

    /// Resamples onto `grid` by linear interpolation. The grids must overlap.
    pub fn resample(&self, grid: &[f64]) -> Result<Self, SpectrumError> {
        check_grid(grid)?;
        let (lo, hi) = self.range();
        if grid[grid.len() - 1] < lo || grid[0] > hi {
            return Err(SpectrumError::NoOverlap);
        }
        Self::from_fn(grid, |l| self.interpolate(l))
    }

    /// Pointwise transform keeping the grid.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = self.iter().map(|(l, v)| f(l, v)).collect();
        Self {
            wavelengths_nm: self.wavelengths_nm.clone(),
            values,
        }
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<(), SpectrumError> {
    if grid.is_empty() {
        return Err(SpectrumError::Empty);
    }
    if let Some(i) = grid.iter().position(|v| !v.is_finite()) {
        return Err(SpectrumError::NonFinite(i));
    }
    if let Some(i) = grid.windows(2).position(|w| w[1] <= w[0]) {
        return Err(SpectrumError::NotAscending(i + 1));
    }
    Ok(())
}

pub(crate) fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert_eq!(Spectrum::new(vec![], vec![]), Err(SpectrumError::Empty));
        assert_eq!(
            Spectrum::new(vec![1.0, 1.0], vec![0.0, 0.0]),
            Err(SpectrumError::NotAscending(1))
        );
        assert_eq!(
            Spectrum::new(vec![1.0, 2.0], vec![0.0]),
            Err(SpectrumError::LengthMismatch { grid: 2, values: 1 })
        );
    }

    #[test]
    fn interpolation_and_integral() {
        let s = Spectrum::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 2.0]).unwrap();
        assert_eq!(s.interpolate(0.5), 1.0);
        assert_eq!(s.interpolate(2.0), 2.0);
        assert_eq!(s.interpolate(-1.0), 0.0);
        assert_eq!(s.integrate(), 1.0 + 4.0);
        assert!(s.resample(&[10.0, 11.0]).is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(600.0, 950.0, 8);
        assert_eq!(g[0], 600.0);
        assert_eq!(g[7], 950.0);
        assert_eq!(g.len(), 8);
    }
}
