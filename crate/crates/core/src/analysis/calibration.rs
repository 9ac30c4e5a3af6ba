use serde::{Deserialize, Serialize};

use super::AnalysisError;

/// Residual ratio (runner-up / best) below which the order is ambiguous.
pub const AMBIGUITY_RATIO: f64 = 2.0;
/// RMS residual (nm) treated as an exact fit.
pub const EXACT_FIT_NM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderResidual {
    pub m: u32,
    pub residual_nm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthCalibration {
    /// Longitudinal order at the reference (longest) wavelength.
    pub m: u32,
    /// m lambda_ref / 2.
    pub length_um: f64,
    pub reference_nm: f64,
    /// nm of cavity length per raw unit.
    pub piezo_scale: f64,
    /// Cavity length (nm) at raw position zero.
    pub offset_nm: f64,
    /// RMS misfit of the linear map, nm.
    pub residual_nm: f64,
    pub ambiguous: bool,
    pub runner_up: Option<OrderResidual>,
    pub candidates: Vec<OrderResidual>,
}

/// Finds the longitudinal order from resonance positions recorded at
/// several wavelengths.
///
/// `positions[i]` holds the raw piezo positions of consecutive resonances at
/// `wavelengths[i]`, the lowest belonging to order m. For each candidate m the
/// lengths (m + j) lambda_i / 2 are regressed on the positions; the smallest
/// RMS residual wins, ties going to the smaller m.
pub fn calibrate_length(
    positions: &[Vec<f64>],
    wavelengths_nm: &[f64],
    m_search: (u32, u32),
) -> Result<LengthCalibration, AnalysisError> {
    if positions.len() != wavelengths_nm.len() {
        return Err(AnalysisError::LengthMismatch(positions.len(), wavelengths_nm.len()));
    }
    let (m_lo, m_hi) = m_search;
    if m_lo < 1 || m_hi > 200 || m_lo > m_hi {
        return Err(AnalysisError::InvalidOrderRange(m_lo, m_hi));
    }
    for &l in wavelengths_nm {
        if !(l.is_finite() && l > 0.0) {
            return Err(AnalysisError::InvalidWavelength(l));
        }
    }
    let mut distinct = wavelengths_nm.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(AnalysisError::TooFewWavelengths);
    }
    let mut sorted: Vec<Vec<f64>> = Vec::with_capacity(positions.len());
    for p in positions {
        if p.is_empty() || p.iter().any(|v| !v.is_finite()) {
            return Err(AnalysisError::EmptyPositions);
        }
        let mut p = p.clone();
        p.sort_by(f64::total_cmp);
        sorted.push(p);
    }
    let all: Vec<f64> = sorted.iter().flatten().copied().collect();
    if all.iter().all(|&v| v == all[0]) {
        return Err(AnalysisError::DegeneratePositions);
    }

    let mut candidates = Vec::new();
    let mut fits = Vec::new();
    for m in m_lo..=m_hi {
        let (scale, offset, rms) = regress(&sorted, wavelengths_nm, m);
        candidates.push(OrderResidual { m, residual_nm: rms });
        fits.push((scale, offset));
    }
    // Strict comparison keeps the smallest m on ties.
    let mut best = 0;
    for (i, c) in candidates.iter().enumerate() {
        if c.residual_nm < candidates[best].residual_nm {
            best = i;
        }
    }
    let runner_up = candidates
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != best)
        .min_by(|a, b| a.1.residual_nm.total_cmp(&b.1.residual_nm))
        .map(|(_, c)| *c);
    let best_rms = candidates[best].residual_nm;
    let ambiguous = runner_up.is_some_and(|r| {
        r.residual_nm < AMBIGUITY_RATIO * best_rms || r.residual_nm <= EXACT_FIT_NM
    });
    let m = candidates[best].m;
    let reference_nm = distinct[distinct.len() - 1];
    Ok(LengthCalibration {
        m,
        length_um: m as f64 * reference_nm / 2.0 * 1e-3,
        reference_nm,
        piezo_scale: fits[best].0,
        offset_nm: fits[best].1,
        residual_nm: best_rms,
        ambiguous,
        runner_up,
        candidates,
    })
}

/// Ordinary least squares of length on position for order `m`.
fn regress(positions: &[Vec<f64>], wavelengths_nm: &[f64], m: u32) -> (f64, f64, f64) {
    let mut points = Vec::new();
    for (p, &l) in positions.iter().zip(wavelengths_nm) {
        for (j, &x) in p.iter().enumerate() {
            points.push((x, (m as usize + j) as f64 * l / 2.0));
        }
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let scale = sxy / sxx;
    let offset = my - scale * mx;
    let ss: f64 = points
        .iter()
        .map(|p| (p.1 - (scale * p.0 + offset)).powi(2))
        .sum();
    (scale, offset, (ss / n).sqrt())
}
