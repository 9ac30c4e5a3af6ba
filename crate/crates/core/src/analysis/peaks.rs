use serde::{Deserialize, Serialize};

use super::lm::{self, LeastSquares};
use super::AnalysisError;
use crate::cavity::finesse_from_linewidth;

pub const MIN_TRACE_SAMPLES: usize = 16;

/// Detected power versus mirror displacement, in raw piezo units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTrace {
    displacement: Vec<f64>,
    signal: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    noise_sigma: Option<f64>,
}

impl ScanTrace {
    /// Needs at least 16 samples on a strictly ascending grid. The signal may
    /// dip below zero where additive detector noise sits on a zero baseline.
    pub fn new(displacement: Vec<f64>, signal: Vec<f64>) -> Result<Self, AnalysisError> {
        if displacement.len() != signal.len() {
            return Err(AnalysisError::LengthMismatch(displacement.len(), signal.len()));
        }
        if displacement.len() < MIN_TRACE_SAMPLES {
            return Err(AnalysisError::TooFewSamples {
                needed: MIN_TRACE_SAMPLES,
                got: displacement.len(),
            });
        }
        if let Some(i) = displacement
            .iter()
            .chain(&signal)
            .position(|v| !v.is_finite())
        {
            return Err(AnalysisError::NonFinite(i % displacement.len()));
        }
        if let Some(i) = displacement.windows(2).position(|w| w[1] <= w[0]) {
            return Err(AnalysisError::NotAscending(i + 1));
        }
        Ok(Self {
            displacement,
            signal,
            noise_sigma: None,
        })
    }

    pub fn with_noise_sigma(mut self, sigma: f64) -> Self {
        self.noise_sigma = Some(sigma);
        self
    }

    pub fn displacement(&self) -> &[f64] {
        &self.displacement
    }

    pub fn signal(&self) -> &[f64] {
        &self.signal
    }

    pub fn noise_sigma(&self) -> Option<f64> {
        self.noise_sigma
    }

    pub fn len(&self) -> usize {
        self.signal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signal.is_empty()
    }
}

/// Result of a multi-Lorentzian fit. Peaks are sorted by centre.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakFit {
    pub centers: Vec<f64>,
    pub fwhms: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub baseline: f64,
    pub residual_rms: f64,
    pub iterations: usize,
    /// One-sigma parameter errors from the covariance matrix, in the order
    /// of the fields above (empty if the covariance is singular).
    pub center_errors: Vec<f64>,
    pub fwhm_errors: Vec<f64>,
    pub amplitude_errors: Vec<f64>,
    pub baseline_error: Option<f64>,
}

impl PeakFit {
    /// Index of the strongest peak.
    pub fn dominant(&self) -> Option<usize> {
        (0..self.amplitudes.len()).max_by(|&a, &b| self.amplitudes[a].total_cmp(&self.amplitudes[b]))
    }

    /// Model value at `x`.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.baseline
            + self
                .centers
                .iter()
                .zip(&self.fwhms)
                .zip(&self.amplitudes)
                .map(|((&c, &w), &a)| lorentzian(x, a, c, w))
                .sum::<f64>()
    }
}

/// Peak-normalised Lorentzian with amplitude `a`, centre `c`, FWHM `w`.
pub fn lorentzian(x: f64, a: f64, c: f64, w: f64) -> f64 {
    let u = 2.0 * (x - c) / w;
    a / (1.0 + u * u)
}

struct MultiLorentzian<'a> {
    x: &'a [f64],
    y: &'a [f64],
    peaks: usize,
}

impl LeastSquares for MultiLorentzian<'_> {
    fn n_params(&self) -> usize {
        1 + 3 * self.peaks
    }

    fn n_residuals(&self) -> usize {
        self.x.len()
    }

    // params: [baseline, (amplitude, centre, fwhm) per peak]
    fn evaluate(&self, p: &[f64], r: &mut [f64], mut jac: Option<&mut [f64]>) {
        let np = self.n_params();
        for (i, (&x, &y)) in self.x.iter().zip(self.y).enumerate() {
            let mut model = p[0];
            if let Some(j) = jac.as_deref_mut() {
                j[i * np] = 1.0;
            }
            for k in 0..self.peaks {
                let (a, c, w) = (p[1 + 3 * k], p[2 + 3 * k], p[3 + 3 * k]);
                let u = 2.0 * (x - c) / w;
                let d = 1.0 / (1.0 + u * u);
                model += a * d;
                if let Some(j) = jac.as_deref_mut() {
                    let row = &mut j[i * np..(i + 1) * np];
                    // d/du of a d is -2 a u d^2.
                    let dd = -2.0 * a * u * d * d;
                    row[1 + 3 * k] = d;
                    row[2 + 3 * k] = dd * (-2.0 / w);
                    row[3 + 3 * k] = dd * (-u / w);
                }
            }
            r[i] = model - y;
        }
    }

    fn admissible(&self, p: &[f64]) -> bool {
        (0..self.peaks).all(|k| p[3 + 3 * k] > 0.0)
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Initial guess for one peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakSeed {
    pub center: f64,
    pub fwhm: f64,
    pub amplitude: f64,
}

/// Local maxima above median + 3 MAD, strongest first, with FWHM taken from
/// the half-maximum crossings. A maximum inside the half-maximum interval of
/// a stronger one is treated as part of it.
pub fn seed_peaks(x: &[f64], y: &[f64]) -> (f64, Vec<PeakSeed>) {
    let mut sorted = y.to_vec();
    let baseline = median(&mut sorted);
    let mut deviations: Vec<f64> = y.iter().map(|v| (v - baseline).abs()).collect();
    let mad = median(&mut deviations);
    let level = baseline + 3.0 * mad;

    let n = y.len();
    let mut candidates: Vec<usize> = (0..n)
        .filter(|&i| {
            y[i] > level
                && (i == 0 || y[i] >= y[i - 1])
                && (i + 1 == n || y[i] >= y[i + 1])
        })
        .collect();
    candidates.sort_by(|&a, &b| y[b].total_cmp(&y[a]).then(a.cmp(&b)));

    let mut seeds: Vec<(PeakSeed, f64, f64)> = Vec::new();
    for i in candidates {
        if seeds.iter().any(|(_, lo, hi)| (*lo..=*hi).contains(&x[i])) {
            continue;
        }
        let half = baseline + 0.5 * (y[i] - baseline);
        let mut l = i;
        while l > 0 && y[l] > half {
            l -= 1;
        }
        let mut r = i;
        while r + 1 < n && y[r] > half {
            r += 1;
        }
        let crossing = |a: usize, b: usize| {
            // Linear interpolation of the half-maximum crossing between a and b.
            if y[a] == y[b] {
                x[a]
            } else {
                x[a] + (half - y[a]) * (x[b] - x[a]) / (y[b] - y[a])
            }
        };
        let left = if l < i { crossing(l, l + 1) } else { x[i] };
        let right = if r > i { crossing(r, r - 1) } else { x[i] };
        let spacing = if i + 1 < n { x[i + 1] - x[i] } else { x[i] - x[i - 1] };
        let fwhm = (right - left).max(spacing);
        seeds.push((
            PeakSeed {
                center: x[i],
                fwhm,
                amplitude: y[i] - baseline,
            },
            left,
            right,
        ));
    }
    (baseline, seeds.into_iter().map(|(s, _, _)| s).collect())
}

/// Least-squares fit of a constant baseline plus `n_peaks` Lorentzians,
/// seeded automatically.
pub fn fit_peaks_lorentzian(trace: &ScanTrace, n_peaks: usize) -> Result<PeakFit, AnalysisError> {
    if n_peaks == 0 {
        return Err(AnalysisError::NoPeaksRequested);
    }
    if trace.len() < 8 * n_peaks {
        return Err(AnalysisError::TooFewSamples {
            needed: 8 * n_peaks,
            got: trace.len(),
        });
    }
    let (baseline, seeds) = seed_peaks(&trace.displacement, &trace.signal);
    if seeds.len() < n_peaks {
        return Err(AnalysisError::TooFewPeaks {
            requested: n_peaks,
            found: seeds.len(),
        });
    }
    fit_peaks_from_seeds(trace, baseline, &seeds[..n_peaks])
}

/// [`fit_peaks_lorentzian`] from explicit starting values.
pub fn fit_peaks_from_seeds(
    trace: &ScanTrace,
    baseline: f64,
    seeds: &[PeakSeed],
) -> Result<PeakFit, AnalysisError> {
    if seeds.is_empty() {
        return Err(AnalysisError::NoPeaksRequested);
    }
    let problem = MultiLorentzian {
        x: &trace.displacement,
        y: &trace.signal,
        peaks: seeds.len(),
    };
    let mut initial = vec![baseline];
    for s in seeds {
        initial.extend([s.amplitude, s.center, s.fwhm]);
    }
    let sol = lm::solve(&problem, &initial)?;
    let p = &sol.params;
    let (lo, hi) = (trace.displacement[0], trace.displacement[trace.len() - 1]);

    let mut order: Vec<usize> = (0..seeds.len()).collect();
    order.sort_by(|&a, &b| p[2 + 3 * a].total_cmp(&p[2 + 3 * b]));
    let error = |idx: usize| -> Option<f64> {
        sol.covariance.as_ref().map(|c| c[idx][idx].max(0.0).sqrt())
    };
    let mut fit = PeakFit {
        centers: Vec::new(),
        fwhms: Vec::new(),
        amplitudes: Vec::new(),
        baseline: p[0],
        residual_rms: 0.0,
        iterations: sol.iterations,
        center_errors: Vec::new(),
        fwhm_errors: Vec::new(),
        amplitude_errors: Vec::new(),
        baseline_error: error(0),
    };
    for k in order {
        let c = p[2 + 3 * k];
        if !(lo..=hi).contains(&c) {
            return Err(AnalysisError::PeakOutsideScan(c));
        }
        fit.amplitudes.push(p[1 + 3 * k]);
        fit.centers.push(c);
        fit.fwhms.push(p[3 + 3 * k]);
        if sol.covariance.is_some() {
            fit.amplitude_errors.extend(error(1 + 3 * k));
            fit.center_errors.extend(error(2 + 3 * k));
            fit.fwhm_errors.extend(error(3 + 3 * k));
        }
    }
    fit.residual_rms = residual_rms(&fit, trace);
    Ok(fit)
}

/// RMS of data minus model over the trace.
pub fn residual_rms(fit: &PeakFit, trace: &ScanTrace) -> f64 {
    let ss: f64 = trace
        .displacement
        .iter()
        .zip(&trace.signal)
        .map(|(&x, &y)| (y - fit.evaluate(x)).powi(2))
        .sum();
    (ss / trace.len() as f64).sqrt()
}

/// F = lambda / (2 FWHM) for the strongest fitted peak, with the FWHM
/// converted to nm by `piezo_scale` (nm per raw unit).
pub fn finesse_from_scan(
    fit: &PeakFit,
    wavelength_nm: f64,
    piezo_scale: Option<f64>,
) -> Result<f64, AnalysisError> {
    let scale = piezo_scale.ok_or(AnalysisError::MissingScale)?;
    if !(scale.is_finite() && scale > 0.0) {
        return Err(AnalysisError::InvalidScale(scale));
    }
    let k = fit.dominant().ok_or(AnalysisError::NoPeaksRequested)?;
    Ok(finesse_from_linewidth(fit.fwhms[k] * scale, wavelength_nm)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn double_trace(noise: impl Fn(usize) -> f64) -> ScanTrace {
        let x: Vec<f64> = (0..601).map(|i| 90.0 + i as f64 * 0.04).collect();
        let y = x
            .iter()
            .enumerate()
            .map(|(i, &x)| lorentzian(x, 1.0, 100.0, 2.0) + lorentzian(x, 0.35, 105.5, 2.2) + noise(i))
            .collect();
        ScanTrace::new(x, y).unwrap()
    }

    #[test]
    fn noiseless_double_lorentzian() {
        let fit = fit_peaks_lorentzian(&double_trace(|_| 0.0), 2).unwrap();
        for (got, want) in fit.centers.iter().zip([100.0, 105.5]) {
            assert_relative_eq!(*got, want, max_relative = 1e-6);
        }
        for (got, want) in fit.fwhms.iter().zip([2.0, 2.2]) {
            assert_relative_eq!(*got, want, max_relative = 1e-6);
        }
        for (got, want) in fit.amplitudes.iter().zip([1.0, 0.35]) {
            assert_relative_eq!(*got, want, max_relative = 1e-6);
        }
        assert!(fit.baseline.abs() < 1e-8);
        assert!(fit.residual_rms < 1e-9);
    }

    #[test]
    fn seed_order_does_not_matter() {
        let trace = double_trace(|_| 0.0);
        let a = [
            PeakSeed { center: 99.0, fwhm: 1.5, amplitude: 0.8 },
            PeakSeed { center: 106.0, fwhm: 3.0, amplitude: 0.3 },
        ];
        let b = [a[1], a[0]];
        let fa = fit_peaks_from_seeds(&trace, 0.0, &a).unwrap();
        let fb = fit_peaks_from_seeds(&trace, 0.0, &b).unwrap();
        for k in 0..2 {
            assert_relative_eq!(fa.centers[k], fb.centers[k], max_relative = 1e-9);
            assert_relative_eq!(fa.amplitudes[k], fb.amplitudes[k], max_relative = 1e-9);
        }
        assert!(fa.centers[0] < fa.centers[1]);
        assert_relative_eq!(fa.amplitudes[0], 1.0, max_relative = 1e-6);
    }

    #[test]
    fn reported_rms_matches_recomputation() {
        let fit = fit_peaks_lorentzian(&double_trace(|i| 0.01 * ((i * 7919) % 13) as f64 / 13.0 - 0.005), 2).unwrap();
        let trace = double_trace(|i| 0.01 * ((i * 7919) % 13) as f64 / 13.0 - 0.005);
        let mut ss = 0.0;
        for (&x, &y) in trace.displacement().iter().zip(trace.signal()) {
            let model = fit.baseline
                + lorentzian(x, fit.amplitudes[0], fit.centers[0], fit.fwhms[0])
                + lorentzian(x, fit.amplitudes[1], fit.centers[1], fit.fwhms[1]);
            ss += (y - model) * (y - model);
        }
        assert_relative_eq!(fit.residual_rms, (ss / trace.len() as f64).sqrt(), max_relative = 1e-12);
        assert_eq!(fit.center_errors.len(), 2);
    }

    #[test]
    fn finesse_arithmetic() {
        let fit = PeakFit {
            centers: vec![0.0],
            fwhms: vec![1.95],
            amplitudes: vec![1.0],
            baseline: 0.0,
            residual_rms: 0.0,
            iterations: 0,
            center_errors: vec![],
            fwhm_errors: vec![],
            amplitude_errors: vec![],
            baseline_error: None,
        };
        assert_relative_eq!(finesse_from_scan(&fit, 780.0, Some(1.0)).unwrap(), 200.0, max_relative = 1e-12);
        assert_relative_eq!(finesse_from_scan(&fit, 3.9, Some(1.0)).unwrap(), 1.0, max_relative = 1e-12);
        assert_eq!(finesse_from_scan(&fit, 780.0, None), Err(AnalysisError::MissingScale));
    }

    #[test]
    fn too_many_peaks_requested() {
        let trace = double_trace(|_| 0.0);
        assert!(matches!(
            fit_peaks_lorentzian(&trace, 3),
            Err(AnalysisError::TooFewPeaks { requested: 3, found: 2 })
        ));
        assert!(fit_peaks_lorentzian(&trace, 0).is_err());
    }

    #[test]
    fn trace_validation() {
        assert!(ScanTrace::new(vec![0.0; 4], vec![0.0; 4]).is_err());
        let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let mut bad = x.clone();
        bad[5] = 4.0;
        assert_eq!(
            ScanTrace::new(bad, vec![0.0; 20]),
            Err(AnalysisError::NotAscending(5))
        );
        assert!(ScanTrace::new(x, vec![0.0; 19]).is_err());
    }
}
