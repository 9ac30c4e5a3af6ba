use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::lm::{self, LeastSquares};
use super::AnalysisError;

pub const MIN_MAP_SIDE: usize = 8;
/// Residual RMS, relative to the fitted amplitude, above which a single
/// Gaussian is reported as a poor description of the map.
pub const POOR_FIT_THRESHOLD: f64 = 0.05;

/// Raster scan of a point-like probe through the mode. `signal` is
/// row-major: index `iy * nx + ix`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeMap {
    x_um: Vec<f64>,
    y_um: Vec<f64>,
    signal: Vec<f64>,
}

fn ascending(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite()) && v.windows(2).all(|w| w[1] > w[0])
}

impl ModeMap {
    pub fn new(x_um: Vec<f64>, y_um: Vec<f64>, signal: Vec<f64>) -> Result<Self, AnalysisError> {
        if x_um.len() < MIN_MAP_SIDE || y_um.len() < MIN_MAP_SIDE {
            return Err(AnalysisError::MapTooSmall(x_um.len(), y_um.len()));
        }
        if signal.len() != x_um.len() * y_um.len() {
            return Err(AnalysisError::LengthMismatch(signal.len(), x_um.len() * y_um.len()));
        }
        if !ascending(&x_um) || !ascending(&y_um) {
            return Err(AnalysisError::NotAscending(0));
        }
        if let Some(i) = signal.iter().position(|v| !v.is_finite()) {
            return Err(AnalysisError::NonFinite(i));
        }
        Ok(Self { x_um, y_um, signal })
    }

    pub fn x_um(&self) -> &[f64] {
        &self.x_um
    }

    pub fn y_um(&self) -> &[f64] {
        &self.y_um
    }

    pub fn signal(&self) -> &[f64] {
        &self.signal
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.signal[iy * self.x_um.len() + ix]
    }

    /// (x, y, signal) in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let nx = self.x_um.len();
        self.signal
            .iter()
            .enumerate()
            .map(move |(i, &s)| (self.x_um[i % nx], self.y_um[i / nx], s))
    }

    /// Mean grid step along x and y.
    pub fn step_um(&self) -> (f64, f64) {
        let step = |v: &[f64]| (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64;
        (step(&self.x_um), step(&self.y_um))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianFit2d {
    pub center_um: (f64, f64),
    pub fwhm_x_um: f64,
    pub fwhm_y_um: f64,
    pub amplitude: f64,
    pub baseline: f64,
    pub residual_rms: f64,
    /// Residual RMS over the amplitude exceeds [`POOR_FIT_THRESHOLD`].
    pub poor_fit: bool,
    pub iterations: usize,
}

impl GaussianFit2d {
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        gaussian(
            x,
            y,
            self.amplitude,
            self.center_um.0,
            self.center_um.1,
            self.fwhm_x_um,
            self.fwhm_y_um,
        ) + self.baseline
    }
}

fn gaussian(x: f64, y: f64, a: f64, x0: f64, y0: f64, fx: f64, fy: f64) -> f64 {
    let k = 4.0 * LN_2;
    let u = (x - x0) / fx;
    let v = (y - y0) / fy;
    a * (-k * (u * u + v * v)).exp()
}

struct Gauss2d<'a> {
    map: &'a ModeMap,
}

impl LeastSquares for Gauss2d<'_> {
    fn n_params(&self) -> usize {
        6
    }

    fn n_residuals(&self) -> usize {
        self.map.signal.len()
    }

    // params: [baseline, amplitude, x0, y0, fwhm_x, fwhm_y]
    fn evaluate(&self, p: &[f64], r: &mut [f64], mut jac: Option<&mut [f64]>) {
        let k = 4.0 * LN_2;
        for (i, (x, y, s)) in self.map.iter().enumerate() {
            let u = (x - p[2]) / p[4];
            let v = (y - p[3]) / p[5];
            let e = (-k * (u * u + v * v)).exp();
            let g = p[1] * e;
            r[i] = p[0] + g - s;
            if let Some(j) = jac.as_deref_mut() {
                let row = &mut j[i * 6..(i + 1) * 6];
                row[0] = 1.0;
                row[1] = e;
                row[2] = g * 2.0 * k * u / p[4];
                row[3] = g * 2.0 * k * v / p[5];
                row[4] = g * 2.0 * k * u * u / p[4];
                row[5] = g * 2.0 * k * v * v / p[5];
            }
        }
    }

    fn admissible(&self, p: &[f64]) -> bool {
        p[4] > 0.0 && p[5] > 0.0
    }
}

/// Least-squares elliptical Gaussian with constant baseline, seeded from the
/// map's moments.
pub fn fit_gaussian_2d(map: &ModeMap) -> Result<GaussianFit2d, AnalysisError> {
    let min = map.signal.iter().copied().fold(f64::INFINITY, f64::min);
    let max = map.signal.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max - min <= 1e-12 * max.abs().max(1.0) {
        return Err(AnalysisError::FlatMap);
    }
    let at_max = map.signal.iter().filter(|&&v| v == max).count();
    if at_max > (map.signal.len() / 20).max(3) {
        return Err(AnalysisError::SaturatedMap(at_max));
    }

    // Moments of the signal above the minimum.
    let (mut w, mut sx, mut sy) = (0.0, 0.0, 0.0);
    for (x, y, s) in map.iter() {
        let v = s - min;
        w += v;
        sx += v * x;
        sy += v * y;
    }
    let (cx, cy) = (sx / w, sy / w);
    let (mut vx, mut vy) = (0.0, 0.0);
    for (x, y, s) in map.iter() {
        let v = s - min;
        vx += v * (x - cx).powi(2);
        vy += v * (y - cy).powi(2);
    }
    let to_fwhm = (8.0 * LN_2).sqrt();
    let (step_x, step_y) = map.step_um();
    let fx = (to_fwhm * (vx / w).sqrt()).max(step_x);
    let fy = (to_fwhm * (vy / w).sqrt()).max(step_y);

    let sol = lm::solve(&Gauss2d { map }, &[min, max - min, cx, cy, fx, fy])?;
    let p = &sol.params;
    let mut fit = GaussianFit2d {
        center_um: (p[2], p[3]),
        fwhm_x_um: p[4],
        fwhm_y_um: p[5],
        amplitude: p[1],
        baseline: p[0],
        residual_rms: 0.0,
        poor_fit: false,
        iterations: sol.iterations,
    };
    let ss: f64 = map
        .iter()
        .map(|(x, y, s)| (s - fit.evaluate(x, y)).powi(2))
        .sum();
    fit.residual_rms = (ss / map.signal.len() as f64).sqrt();
    fit.poor_fit = !(fit.amplitude > 0.0) || fit.residual_rms > POOR_FIT_THRESHOLD * fit.amplitude;
    Ok(fit)
}
