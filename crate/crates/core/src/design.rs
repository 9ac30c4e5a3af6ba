//! Search over cavity designs (finesse, mirror radius, longitudinal order)
//! for the 0-0 branching ratio of a narrow-line emitter.
//!
//! The 0-0 line is taken as fully overlapped with the cavity resonance and
//! the Stokes-shifted emission as unaffected.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cavity::{gaussian_waist, quality_factor, resonance_length, CavityError};
use crate::coupling::{
    branching_ratio, purcell_max, purcell_report, rate_enhancement, solid_angle_fraction,
    CouplingError, EmitterModel, PurcellReport,
};

pub const DEFAULT_FINESSE_CAP: f64 = 1e5;
pub const DEFAULT_GRID_POINTS: usize = 32;
/// Enhancement the solid-angle factor is compared against in the diagnostics.
pub const REFERENCE_ENHANCEMENT: f64 = 20.0;

#[derive(Debug, Error, PartialEq)]
pub enum DesignError {
    #[error("invalid design space: {0}")]
    InvalidSpace(String),
    #[error("objective min_finesse_for_target needs a target branching ratio")]
    MissingTarget,
    #[error("target branching ratio {0} must lie strictly between 0 and 1")]
    InvalidTarget(f64),
    #[error(transparent)]
    Cavity(#[from] CavityError),
    #[error(transparent)]
    Coupling(#[from] CouplingError),
}

fn default_cap() -> f64 {
    DEFAULT_FINESSE_CAP
}

fn default_points() -> usize {
    DEFAULT_GRID_POINTS
}

fn default_emitter() -> EmitterModel {
    EmitterModel::dbt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSpace {
    pub finesse: (f64, f64),
    pub radius_um: (f64, f64),
    pub order: (u32, u32),
    pub wavelength_nm: f64,
    #[serde(default = "default_emitter")]
    pub emitter: EmitterModel,
    #[serde(default = "default_cap")]
    pub finesse_cap: f64,
    /// Samples per continuous axis in the coarse scan.
    #[serde(default = "default_points")]
    pub grid_points: usize,
}

impl DesignSpace {
    pub fn new(
        finesse: (f64, f64),
        radius_um: (f64, f64),
        order: (u32, u32),
        wavelength_nm: f64,
        emitter: EmitterModel,
    ) -> Result<Self, DesignError> {
        let space = Self {
            finesse,
            radius_um,
            order,
            wavelength_nm,
            emitter,
            finesse_cap: DEFAULT_FINESSE_CAP,
            grid_points: DEFAULT_GRID_POINTS,
        };
        space.validate()?;
        Ok(space)
    }

    pub fn validate(&self) -> Result<(), DesignError> {
        let bad = |msg: String| Err(DesignError::InvalidSpace(msg));
        let (f_lo, f_hi) = self.finesse;
        let (r_lo, r_hi) = self.radius_um;
        let (m_lo, m_hi) = self.order;
        if !(f_lo.is_finite() && f_lo > 0.0 && f_hi >= f_lo) {
            return bad(format!("finesse range [{f_lo}, {f_hi}]"));
        }
        if !(f_hi <= self.finesse_cap) {
            return bad(format!("finesse {f_hi} above the cap {}", self.finesse_cap));
        }
        if !(r_lo.is_finite() && r_lo > 0.0 && r_hi >= r_lo && r_hi.is_finite()) {
            return bad(format!("radius range [{r_lo}, {r_hi}] um"));
        }
        if m_lo < 1 || m_hi < m_lo {
            return bad(format!("order range [{m_lo}, {m_hi}]"));
        }
        if !(self.wavelength_nm.is_finite() && self.wavelength_nm > 0.0) {
            return bad(format!("wavelength {}", self.wavelength_nm));
        }
        if self.grid_points < 2 {
            return bad(format!("{} grid points", self.grid_points));
        }
        let longest = resonance_length(m_hi, self.wavelength_nm)?;
        if longest >= r_lo {
            return bad(format!(
                "order {m_hi} gives L = {longest} um, not below the smallest radius {r_lo} um"
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignDiagnostics {
    pub length_um: f64,
    pub quality_factor: f64,
    pub waist_um: f64,
    pub mode_volume_lambda3: f64,
    /// r1 - L, um.
    pub stability_margin_um: f64,
    /// Solid-angle factor that would be needed for a twentyfold 0-0 rate
    /// enhancement at this Purcell factor; compare with the factor used.
    pub solid_angle_for_reference: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignResult {
    pub finesse: f64,
    pub radius_um: f64,
    pub order: u32,
    pub wavelength_nm: f64,
    pub alpha0: f64,
    pub report: PurcellReport,
    /// Total 0-0 rate factor 1 + f (F_p - 1).
    pub rate_enhancement: f64,
    pub branching_ratio: f64,
    pub diagnostics: DesignDiagnostics,
    /// Branching ratio minus the target, when there is one.
    pub slack: Option<f64>,
}

/// Predicted 0-0 branching ratio for one cavity design.
pub fn evaluate_design(
    finesse: f64,
    radius_um: f64,
    order: u32,
    wavelength_nm: f64,
    emitter: &EmitterModel,
) -> Result<DesignResult, DesignError> {
    let length = resonance_length(order, wavelength_nm)?;
    let shape = gaussian_waist(length, radius_um, wavelength_nm)?;
    let q = quality_factor(finesse, order)?;
    let fp = purcell_max(q, shape.volume_lambda3)?;
    let solid = solid_angle_fraction(shape.waist_um, wavelength_nm)?;
    let alpha0 = emitter.alpha0();
    let report = purcell_report(fp, solid, 1.0, alpha0)?;
    let enhancement = rate_enhancement(fp, solid, 1.0)?;
    Ok(DesignResult {
        finesse,
        radius_um,
        order,
        wavelength_nm,
        alpha0,
        report,
        rate_enhancement: enhancement,
        branching_ratio: branching_ratio(alpha0, enhancement)?,
        diagnostics: DesignDiagnostics {
            length_um: length,
            quality_factor: q,
            waist_um: shape.waist_um,
            mode_volume_lambda3: shape.volume_lambda3,
            stability_margin_um: radius_um - length,
            solid_angle_for_reference: (REFERENCE_ENHANCEMENT - 1.0) / (fp - 1.0),
        },
        slack: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    MaxBranching,
    MinFinesseForTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub finesse: f64,
    pub radius_um: f64,
    pub order: u32,
    pub branching_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimization {
    pub objective: Objective,
    pub target: Option<f64>,
    /// False when no design in the space reaches the target; `best` then
    /// holds the highest branching ratio found.
    pub feasible: bool,
    pub best: DesignResult,
    /// Every coarse-grid evaluation, in (order, radius, finesse) scan order.
    pub trace: Vec<TracePoint>,
}

/// Log-spaced axis; a single point when the range is degenerate.
fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if hi == lo {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut v: Vec<f64> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect();
    v[0] = lo;
    v[n - 1] = hi;
    v
}

/// Lexicographic (F, r1, m) tie-break.
fn key(r: &DesignResult) -> (f64, f64, u32) {
    (r.finesse, r.radius_um, r.order)
}

fn better_branching(a: &DesignResult, b: &DesignResult) -> bool {
    match a.branching_ratio.total_cmp(&b.branching_ratio) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => {
            let (ka, kb) = (key(a), key(b));
            ka.0.total_cmp(&kb.0)
                .then(ka.1.total_cmp(&kb.1))
                .then(ka.2.cmp(&kb.2))
                .is_lt()
        }
    }
}

/// Golden-section search for the maximum of `f` on [lo, hi]; the bracket
/// ends are included as candidates so monotone objectives reach the edge.
fn golden_max(
    lo: f64,
    hi: f64,
    f: impl Fn(f64) -> Result<DesignResult, DesignError>,
) -> Result<DesignResult, DesignError> {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut best = f(a)?;
    let end = f(b)?;
    if better_branching(&end, &best) {
        best = end;
    }
    if hi > lo {
        let mut c = b - ratio * (b - a);
        let mut d = a + ratio * (b - a);
        let (mut fc, mut fd) = (f(c)?, f(d)?);
        for _ in 0..200 {
            if (b - a) <= 1e-12 * b.abs() {
                break;
            }
            if fc.branching_ratio >= fd.branching_ratio {
                b = d;
                d = c;
                fd = fc;
                c = b - ratio * (b - a);
                fc = f(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + ratio * (b - a);
                fd = f(d)?;
            }
        }
        for cand in [fc, fd] {
            if better_branching(&cand, &best) {
                best = cand;
            }
        }
    }
    Ok(best)
}

/// Neighbouring grid values around index `i`.
fn bracket(grid: &[f64], i: usize) -> (f64, f64) {
    (grid[i.saturating_sub(1)], grid[(i + 1).min(grid.len() - 1)])
}

/// Coarse grid scan followed by refinement on each continuous axis.
///
/// `MaxBranching` refines the best grid point by golden-section search on
/// the finesse and then the radius. `MinFinesseForTarget` bisects, for each
/// (radius, order) column, the smallest finesse reaching the target, and
/// keeps the smallest overall.
pub fn optimize_design(
    space: &DesignSpace,
    objective: Objective,
    target: Option<f64>,
) -> Result<Optimization, DesignError> {
    space.validate()?;
    if let Some(t) = target {
        if !(t.is_finite() && t > 0.0 && t < 1.0) {
            return Err(DesignError::InvalidTarget(t));
        }
    }
    if objective == Objective::MinFinesseForTarget && target.is_none() {
        return Err(DesignError::MissingTarget);
    }
    let n = space.grid_points;
    let fs = axis(space.finesse.0, space.finesse.1, n);
    let rs = axis(space.radius_um.0, space.radius_um.1, n);
    let orders: Vec<u32> = (space.order.0..=space.order.1).collect();
    let lambda = space.wavelength_nm;
    let emitter = &space.emitter;
    let eval = |f: f64, r: f64, m: u32| evaluate_design(f, r, m, lambda, emitter);

    let mut points = Vec::with_capacity(orders.len() * rs.len() * fs.len());
    for &m in &orders {
        for &r in &rs {
            points.extend(fs.iter().map(|&f| (m, r, f)));
        }
    }
    let results = points
        .par_iter()
        .map(|&(m, r, f)| eval(f, r, m))
        .collect::<Result<Vec<_>, _>>()?;
    let trace: Vec<TracePoint> = results
        .iter()
        .map(|d| TracePoint {
            finesse: d.finesse,
            radius_um: d.radius_um,
            order: d.order,
            branching_ratio: d.branching_ratio,
        })
        .collect();
    let mut grid_best = results[0];
    for d in &results[1..] {
        if better_branching(d, &grid_best) {
            grid_best = *d;
        }
    }

    let with_slack = |mut d: DesignResult| {
        d.slack = target.map(|t| d.branching_ratio - t);
        d
    };

    match objective {
        Objective::MaxBranching => {
            let fi = fs.iter().position(|&f| f == grid_best.finesse).unwrap_or(0);
            let (f_lo, f_hi) = bracket(&fs, fi);
            let (r0, m0) = (grid_best.radius_um, grid_best.order);
            let refined_f = golden_max(f_lo, f_hi, |f| eval(f, r0, m0))?;
            let ri = rs.iter().position(|&r| r == r0).unwrap_or(0);
            let (r_lo, r_hi) = bracket(&rs, ri);
            let refined = golden_max(r_lo, r_hi, |r| eval(refined_f.finesse, r, m0))?;
            let mut best = grid_best;
            for cand in [refined_f, refined] {
                if better_branching(&cand, &best) {
                    best = cand;
                }
            }
            let best = with_slack(best);
            Ok(Optimization {
                objective,
                target,
                feasible: target.map_or(true, |t| best.branching_ratio >= t),
                best,
                trace,
            })
        }
        Objective::MinFinesseForTarget => {
            let t = target.expect("checked above");
            let mut best: Option<DesignResult> = None;
            for &m in &orders {
                for &r in &rs {
                    let Some(d) = min_finesse(space.finesse, r, m, t, &eval)? else {
                        continue;
                    };
                    let replace = match &best {
                        None => true,
                        Some(b) => {
                            let (kd, kb) = (key(&d), key(b));
                            kd.0.total_cmp(&kb.0)
                                .then(kd.1.total_cmp(&kb.1))
                                .then(kd.2.cmp(&kb.2))
                                .is_lt()
                        }
                    };
                    if replace {
                        best = Some(d);
                    }
                }
            }
            let (feasible, best) = match best {
                Some(d) => (true, d),
                None => (false, grid_best),
            };
            Ok(Optimization {
                objective,
                target,
                feasible,
                best: with_slack(best),
                trace,
            })
        }
    }
}

/// Smallest finesse in `range` with branching >= target at (r, m), by
/// bisection (branching is increasing in finesse).
fn min_finesse(
    range: (f64, f64),
    r: f64,
    m: u32,
    target: f64,
    eval: &impl Fn(f64, f64, u32) -> Result<DesignResult, DesignError>,
) -> Result<Option<DesignResult>, DesignError> {
    let (lo, hi) = range;
    let top = eval(hi, r, m)?;
    if top.branching_ratio < target {
        return Ok(None);
    }
    let bottom = eval(lo, r, m)?;
    if bottom.branching_ratio >= target {
        return Ok(Some(bottom));
    }
    let (mut a, mut b) = (lo, hi);
    let mut at_b = top;
    while (b - a) > 1e-12 * b {
        let mid = 0.5 * (a + b);
        let d = eval(mid, r, m)?;
        if d.branching_ratio >= target {
            b = mid;
            at_b = d;
        } else {
            a = mid;
        }
    }
    Ok(Some(at_b))
}
