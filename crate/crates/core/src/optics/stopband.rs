use serde::{Deserialize, Serialize};

use super::tmm::{stack_response, Polarization};
use super::{LayerStack, OpticsError};

/// Default reflectance that defines the edge of a high-reflection band.
pub const DEFAULT_STOPBAND_THRESHOLD: f64 = 0.99;

/// How the band edge is defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Threshold {
    /// Fixed power reflectance.
    Absolute(f64),
    /// Fraction of the peak reflectance found in the search range. Useful for
    /// shallow stacks that never reach the default threshold.
    RelativeToPeak(f64),
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold::Absolute(DEFAULT_STOPBAND_THRESHOLD)
    }
}

/// Wavelength window scanned for the band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopbandSearch {
    pub lower_nm: f64,
    pub upper_nm: f64,
    /// Coarse sampling step before the edges are refined by bisection.
    pub step_nm: f64,
}

impl StopbandSearch {
    pub fn new(lower_nm: f64, upper_nm: f64) -> Self {
        Self {
            lower_nm,
            upper_nm,
            step_nm: 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stopband {
    pub lower_nm: f64,
    pub upper_nm: f64,
    /// Absolute reflectance used for the edges.
    pub threshold: f64,
    pub peak_reflectance: f64,
    /// True when the band runs into an end of the search window.
    pub clipped: bool,
}

impl Stopband {
    pub fn width_nm(&self) -> f64 {
        self.upper_nm - self.lower_nm
    }

    pub fn center_nm(&self) -> f64 {
        0.5 * (self.lower_nm + self.upper_nm)
    }

    pub fn contains(&self, wavelength_nm: f64) -> bool {
        (self.lower_nm..=self.upper_nm).contains(&wavelength_nm)
    }
}

/// Widest contiguous normal-incidence interval with reflectance at or above
/// the threshold.
pub fn stopband(
    stack: &LayerStack,
    threshold: Threshold,
    search: StopbandSearch,
) -> Result<Stopband, OpticsError> {
    stopband_at(stack, threshold, search, 0.0, Polarization::S)
}

/// [`stopband`] at oblique incidence.
pub fn stopband_at(
    stack: &LayerStack,
    threshold: Threshold,
    search: StopbandSearch,
    angle_rad: f64,
    polarization: Polarization,
) -> Result<Stopband, OpticsError> {
    let StopbandSearch {
        lower_nm,
        upper_nm,
        step_nm,
    } = search;
    if !(lower_nm.is_finite() && upper_nm.is_finite() && lower_nm > 0.0 && upper_nm > lower_nm)
        || !(step_nm.is_finite() && step_nm > 0.0)
    {
        return Err(OpticsError::InvalidRange(lower_nm, upper_nm));
    }
    let fraction = match threshold {
        Threshold::Absolute(t) | Threshold::RelativeToPeak(t) => t,
    };
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(OpticsError::InvalidThreshold(fraction));
    }

    let reflectance = |l: f64| -> Result<f64, OpticsError> {
        Ok(stack_response(stack, l, angle_rad, polarization)?.reflectance)
    };
    let n = ((upper_nm - lower_nm) / step_nm).ceil() as usize + 1;
    let grid: Vec<f64> = (0..n)
        .map(|i| (lower_nm + step_nm * i as f64).min(upper_nm))
        .collect();
    let values = grid
        .iter()
        .map(|&l| reflectance(l))
        .collect::<Result<Vec<_>, _>>()?;
    let peak = values.iter().copied().fold(0.0, f64::max);
    let level = match threshold {
        Threshold::Absolute(t) => t,
        Threshold::RelativeToPeak(f) => f * peak,
    };

    // Widest run of samples at or above the level; earliest wins ties.
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for (i, &v) in values.iter().enumerate() {
        match (v >= level, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                consider(&mut best, &grid, s, i - 1);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        consider(&mut best, &grid, s, n - 1);
    }
    let Some((first, last)) = best else {
        return Err(OpticsError::NoStopband {
            peak,
            threshold: level,
        });
    };

    let above = |l: f64| reflectance(l).map(|r| r >= level);
    let lower = if first == 0 {
        grid[0]
    } else {
        bisect_edge(grid[first - 1], grid[first], &above)?
    };
    let upper = if last == n - 1 {
        grid[n - 1]
    } else {
        bisect_edge(grid[last + 1], grid[last], &above)?
    };
    Ok(Stopband {
        lower_nm: lower,
        upper_nm: upper,
        threshold: level,
        peak_reflectance: peak,
        clipped: first == 0 || last == n - 1,
    })
}

fn consider(best: &mut Option<(usize, usize)>, grid: &[f64], s: usize, e: usize) {
    let wider = match *best {
        None => true,
        Some((bs, be)) => grid[e] - grid[s] > grid[be] - grid[bs],
    };
    if wider {
        *best = Some((s, e));
    }
}

/// Bisects between a sample outside the band and one inside it.
fn bisect_edge(
    mut outside: f64,
    mut inside: f64,
    above: &impl Fn(f64) -> Result<bool, OpticsError>,
) -> Result<f64, OpticsError> {
    for _ in 0..60 {
        if (inside - outside).abs() < 1e-9 {
            break;
        }
        let mid = 0.5 * (outside + inside);
        if above(mid)? {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(0.5 * (inside + outside))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::quarter_wave_stack;

    #[test]
    fn threshold_above_peak_reports_no_stopband() {
        let s = quarter_wave_stack(2.10, 1.46, 2, 780.0, true).unwrap();
        let err = stopband(&s, Threshold::Absolute(0.99), StopbandSearch::new(600.0, 1000.0));
        assert!(matches!(err, Err(OpticsError::NoStopband { .. })));
    }

    #[test]
    fn band_contains_design_wavelength() {
        let s = quarter_wave_stack(2.10, 1.46, 13, 780.0, true).unwrap();
        let b = stopband(&s, Threshold::default(), StopbandSearch::new(600.0, 1000.0)).unwrap();
        assert!(b.contains(780.0));
        assert!(!b.clipped);
        assert!(b.peak_reflectance > 0.999);
    }

    #[test]
    fn rejects_bad_thresholds() {
        let s = quarter_wave_stack(2.10, 1.46, 3, 780.0, true).unwrap();
        for t in [0.0, 1.0, -0.2, f64::NAN] {
            assert!(stopband(&s, Threshold::Absolute(t), StopbandSearch::new(600.0, 900.0)).is_err());
        }
        assert!(stopband(&s, Threshold::default(), StopbandSearch::new(900.0, 600.0)).is_err());
    }
}
