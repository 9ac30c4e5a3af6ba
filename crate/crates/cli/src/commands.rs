use std::f64::consts::PI;
use std::path::Path;

use microcav_core::analysis::PeakFit;
use microcav_core::coupling::{purcell_report, solid_angle_fraction, BfpCavity};
use microcav_core::design::Optimization;
use microcav_core::io::{
    from_json, read_map_csv, read_spectrum_csv, read_trace_csv, write_columns, write_map_csv, write_spectrum_csv,
    write_trace_csv, ResonancePositions,
};
use microcav_core::optics::{group_delay_length, stopband_at, StopbandSearch, Threshold};
use microcav_core::presets::{self, DbrPreset};
use microcav_core::spectrum::linspace;
use microcav_core::{
    airy_transmission, bfp_radial_profile, branching_ratio, calibrate_length, cavity_report, filtered_spectrum,
    finesse_from_scan, fit_gaussian_2d, fit_peaks_lorentzian, optimize_design, purcell_max, reflectivity_spectrum,
    required_enhancement, synthesize_mode_map, synthesize_scan_trace, Background, CavityFilter, CavityGeometry,
    DesignSpace, EmitterModel, LayerStack, MirrorSpec, Objective, Polarization, ScanSpec, TransverseMode,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::error::{core, CliError};
use crate::output::{read_text, Report};

fn params<T: Serialize>(args: &T) -> Result<Value, CliError> {
    serde_json::to_value(args).map_err(|e| CliError::Invalid(e.to_string()))
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Invalid(msg.into()))
}

fn load_stack(src: &StackSource) -> Result<(LayerStack, Option<DbrPreset>), CliError> {
    if let Some(path) = &src.stack {
        let stack = from_json(&read_text(path)?).map_err(core)?;
        return Ok((stack, None));
    }
    let preset = match src.preset.expect("clap requires a stack source") {
        Preset::Cavity => presets::cavity_dbr(),
        Preset::BeadScan => presets::bead_scan_dbr(),
        Preset::Film => presets::film_dbr(),
    };
    Ok((preset.stack.clone(), Some(preset)))
}

fn load_emitter(path: Option<&Path>) -> Result<EmitterModel, CliError> {
    match path {
        Some(p) => from_json(&read_text(p)?).map_err(core),
        None => Ok(EmitterModel::dbt()),
    }
}

fn polarization(p: Pol) -> Polarization {
    match p {
        Pol::S => Polarization::S,
        Pol::P => Polarization::P,
    }
}

fn grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if points < 2 {
        return invalid(format!("at least 2 points are needed, got {points}"));
    }
    Ok(linspace(from, to, points))
}

fn radius_um(um: Option<f64>, mm: Option<f64>) -> Option<f64> {
    um.or(mm.map(|r| r * 1e3))
}

pub fn dbr_spectrum(a: &DbrSpectrumArgs) -> Result<Report, CliError> {
    let (stack, _) = load_stack(&a.source)?;
    let wavelengths = grid(a.from_nm, a.to_nm, a.points)?;
    let s = reflectivity_spectrum(&stack, &wavelengths, a.angle_deg.to_radians(), polarization(a.polarization))
        .map_err(core)?;
    Ok(Report::csv("dbr-spectrum", params(a)?, write_spectrum_csv(&s)))
}

pub fn stopband(a: &StopbandArgs) -> Result<Report, CliError> {
    let (stack, preset) = load_stack(&a.source)?;
    let threshold = match (a.threshold, a.relative_threshold, &preset) {
        (Some(t), _, _) => Threshold::Absolute(t),
        (None, Some(t), _) => Threshold::RelativeToPeak(t),
        (None, None, Some(p)) => p.threshold,
        (None, None, None) => Threshold::default(),
    };
    let search = match (a.from_nm, a.to_nm, &preset) {
        (Some(lo), Some(hi), _) => StopbandSearch::new(lo, hi),
        (None, None, Some(p)) => p.search,
        _ => return invalid("--from-nm and --to-nm are both required unless a preset supplies the window"),
    };
    let band = stopband_at(&stack, threshold, search, a.angle_deg.to_radians(), polarization(a.polarization))
        .map_err(core)?;
    Report::json("stopband", params(a)?, &band)
}

pub fn group_delay(a: &GroupDelayArgs) -> Result<Report, CliError> {
    let (stack, _) = load_stack(&a.source)?;
    let g = group_delay_length(&stack, a.lambda_nm).map_err(core)?;
    Report::json("group-delay", params(a)?, &g)
}

pub fn cavity(a: &CavityReportArgs) -> Result<Report, CliError> {
    let r = cavity_report(a.r1, a.r2, a.m, a.lambda_nm, a.radius.um()).map_err(core)?;
    Report::json("cavity-report", params(a)?, &r)
}

pub fn airy(a: &AiryArgs) -> Result<Report, CliError> {
    if !(a.finesse > 0.0 && a.fsr > 0.0 && a.t_peak > 0.0) {
        return invalid("--finesse, --fsr and --t-peak must be positive");
    }
    let x = grid(a.from, a.to, a.points)?;
    let t: Vec<f64> = x.iter().map(|&v| airy_transmission(v, a.finesse, a.fsr, a.t_peak)).collect();
    Ok(Report::csv("airy", params(a)?, write_columns("detuning,transmission", &[&x, &t])))
}

pub fn mode_profile(a: &ModeProfileArgs) -> Result<Report, CliError> {
    let map = synthesize_mode_map(TransverseMode::new(a.p, a.n), a.waist_um, a.extent_um, a.step_um, 0.0, 0.0, 0)
        .map_err(core)?;
    Ok(Report::csv("mode-profile", params(a)?, write_map_csv(&map)))
}

#[derive(Serialize)]
struct ScanFitReport {
    fit: PeakFit,
    finesse: Option<f64>,
}

pub fn fit_scan(a: &FitScanArgs) -> Result<Report, CliError> {
    let trace = read_trace_csv(&read_text(&a.trace)?).map_err(core)?;
    let fit = fit_peaks_lorentzian(&trace, a.peaks).map_err(core)?;
    let finesse = match a.lambda_nm {
        Some(l) => Some(finesse_from_scan(&fit, l, a.nm_per_unit).map_err(core)?),
        None => None,
    };
    Report::json("fit-scan", params(a)?, &ScanFitReport { fit, finesse })
}

pub fn calibrate(a: &CalibrateLengthArgs) -> Result<Report, CliError> {
    let p: ResonancePositions = from_json(&read_text(&a.positions)?).map_err(core)?;
    let cal = calibrate_length(&p.positions, &p.wavelengths_nm, (a.m_min, a.m_max)).map_err(core)?;
    Report::json("calibrate-length", params(a)?, &cal)
}

pub fn fit_map(a: &FitMapArgs) -> Result<Report, CliError> {
    let map = read_map_csv(&read_text(&a.map)?).map_err(core)?;
    let fit = fit_gaussian_2d(&map).map_err(core)?;
    Report::json("fit-map", params(a)?, &fit)
}

pub fn synth_scan(a: &SynthScanArgs) -> Result<Report, CliError> {
    let geometry = CavityGeometry::on_resonance(a.m, a.lambda_nm, a.radius.um()).map_err(core)?;
    let m1 = MirrorSpec::fixed(a.r1, None, PI).map_err(core)?;
    let m2 = MirrorSpec::fixed(a.r2, None, PI).map_err(core)?;
    let scan = ScanSpec {
        start_nm: a.start_nm,
        stop_nm: a.stop_nm,
        samples: a.samples,
        nm_per_unit: a.nm_per_unit,
    };
    let trace = synthesize_scan_trace(&geometry, (&m1, &m2), &a.modes, scan, a.noise, a.seed).map_err(core)?;
    Ok(Report::csv("synth-scan", params(a)?, write_trace_csv(&trace)))
}

pub fn synth_map(a: &SynthMapArgs) -> Result<Report, CliError> {
    let map = synthesize_mode_map(
        TransverseMode::new(a.p, a.n),
        a.waist_um,
        a.extent_um,
        a.step_um,
        a.bead_um,
        a.noise,
        a.seed,
    )
    .map_err(core)?;
    Ok(Report::csv("synth-map", params(a)?, write_map_csv(&map)))
}

pub fn filter_spectrum(a: &FilterSpectrumArgs) -> Result<Report, CliError> {
    let emitter = load_emitter(a.emitter.as_deref())?;
    let spectrum = emitter
        .spectrum(&emitter.grid(a.step_nm, a.span_fwhm).map_err(core)?)
        .map_err(core)?;
    let filter = CavityFilter::resonant(a.finesse, a.length_um, a.lambda_nm)
        .and_then(|f| f.with_peak_transmission(a.t_peak))
        .map_err(core)?;
    let background = match (a.background, &a.background_file) {
        (Some(b), _) => Background::Scalar(b),
        (None, Some(path)) => Background::Spectrum(read_spectrum_csv(&read_text(path)?).map_err(core)?),
        (None, None) => Background::None,
    };
    let out = filtered_spectrum(&spectrum, &filter, &background, &a.modes, radius_um(a.radius_um, a.radius_mm))
        .map_err(core)?;
    Ok(Report::csv("filter-spectrum", params(a)?, write_spectrum_csv(&out)))
}

pub fn purcell(a: &PurcellArgs) -> Result<Report, CliError> {
    let fp = purcell_max(a.q, a.volume_lambda3).map_err(core)?;
    let solid = match (a.solid_fraction, a.waist_um, a.lambda_nm) {
        (Some(f), _, _) => f,
        (None, Some(w), Some(l)) => solid_angle_fraction(w, l).map_err(core)?,
        _ => return invalid("either --solid-fraction or --waist-um with --lambda is required"),
    };
    let report = purcell_report(fp, solid, a.overlap, a.alpha0).map_err(core)?;
    Report::json("purcell", params(a)?, &report)
}

pub fn branching(a: &BranchingArgs) -> Result<Report, CliError> {
    let result = match (a.enhancement, a.target) {
        (Some(e), _) => json!({ "branching_ratio": branching_ratio(a.alpha0, e).map_err(core)? }),
        (None, Some(t)) => json!({ "required_enhancement": required_enhancement(a.alpha0, t).map_err(core)? }),
        (None, None) => return invalid("--enhancement or --target is required"),
    };
    Report::json("branching", params(a)?, &result)
}

pub fn bfp(a: &BfpArgs) -> Result<Report, CliError> {
    let (stack, _) = load_stack(&a.source)?;
    let emitter = load_emitter(a.emitter.as_deref())?;
    let angles: Vec<f64> = grid(0.0, a.max_angle_deg, a.points)?
        .into_iter()
        .map(f64::to_radians)
        .collect();
    let cavity = match (a.finesse, a.m, a.lambda_nm) {
        (Some(finesse), Some(m), Some(l)) => {
            let Some(r) = radius_um(a.radius_um, a.radius_mm) else {
                return invalid("the cavity lobe needs --radius-um or --radius-mm");
            };
            let geometry = CavityGeometry::on_resonance(m, l, r).map_err(core)?;
            Some(BfpCavity {
                geometry,
                finesse,
                t_peak: a.t_peak,
            })
        }
        _ => None,
    };
    let profile = bfp_radial_profile(&emitter, &stack, cavity.as_ref(), &angles).map_err(core)?;
    let text = write_columns("angle_rad,intensity", &[&profile.angles_rad, &profile.values]);
    Ok(Report::csv("bfp", params(a)?, text))
}

pub fn optimize(a: &OptimizeArgs) -> Result<Report, CliError> {
    let space: DesignSpace = from_json(&read_text(&a.space)?).map_err(core)?;
    let objective = match a.objective {
        ObjectiveArg::MaxBranching => Objective::MaxBranching,
        ObjectiveArg::MinFinesseForTarget => Objective::MinFinesseForTarget,
    };
    let mut result: Optimization = optimize_design(&space, objective, a.target).map_err(core)?;
    if a.no_trace {
        result.trace.clear();
    }
    Report::json("optimize", params(a)?, &result)
}
