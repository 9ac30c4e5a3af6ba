use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use microcav_core::cavity::TransverseMode;
use microcav_core::coupling::ModeComb;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "microcav", version, about = "Fiber Fabry-Perot microcavity modelling and analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reflectance spectrum of a layer stack (CSV).
    DbrSpectrum(DbrSpectrumArgs),
    /// High-reflectance band of a layer stack (JSON).
    Stopband(StopbandArgs),
    /// Penetration length from the reflection-phase slope (JSON).
    GroupDelay(GroupDelayArgs),
    /// Finesse, FSR, waist, mode volume and Q of a plano-concave cavity (JSON).
    CavityReport(CavityReportArgs),
    /// Airy transmission over a detuning range (CSV).
    Airy(AiryArgs),
    /// Hermite-Gauss intensity on a square grid (CSV).
    ModeProfile(ModeProfileArgs),
    /// Multi-Lorentzian fit of a cavity-length scan (JSON).
    FitScan(FitScanArgs),
    /// Longitudinal order and piezo scale from multi-wavelength resonances (JSON).
    CalibrateLength(CalibrateLengthArgs),
    /// 2D Gaussian fit of a mode map (JSON).
    FitMap(FitMapArgs),
    /// Seeded synthetic cavity-length scan (CSV).
    SynthScan(SynthScanArgs),
    /// Seeded synthetic bead-scan mode map (CSV).
    SynthMap(SynthMapArgs),
    /// Emitter spectrum filtered by the cavity transmission (CSV).
    FilterSpectrum(FilterSpectrumArgs),
    /// Purcell factor and effective enhancement chain (JSON).
    Purcell(PurcellArgs),
    /// Branching ratio after enhancement, or the enhancement for a target (JSON).
    Branching(BranchingArgs),
    /// Back-focal-plane radial intensity profile (CSV).
    Bfp(BfpArgs),
    /// Search for the cavity design with the best branching ratio (JSON).
    Optimize(OptimizeArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    /// Output file path; standard output when omitted. CSV outputs get a
    /// `<out>.params.json` sidecar.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// 13 Ta2O5/SiO2 pairs at 780 nm.
    Cavity,
    /// 12 TiO2/SiO2 pairs, band 524-684 nm.
    BeadScan,
    /// 4 Ta2O5/SiO2 pairs under anthracene, band 685-880 nm.
    Film,
}

#[derive(Debug, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct StackSource {
    /// Layer stack JSON (indices dimensionless, thicknesses in nm).
    #[arg(long)]
    pub stack: Option<PathBuf>,
    /// Built-in mirror (name, no unit).
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pol {
    S,
    P,
}

#[derive(Debug, Args, Serialize)]
pub struct DbrSpectrumArgs {
    #[command(flatten)]
    pub source: StackSource,
    /// First wavelength, nm.
    #[arg(long, default_value_t = 500.0)]
    pub from_nm: f64,
    /// Last wavelength, nm.
    #[arg(long, default_value_t = 1100.0)]
    pub to_nm: f64,
    /// Number of wavelength samples (count).
    #[arg(long, default_value_t = 1201)]
    pub points: usize,
    /// Angle of incidence in the ambient, degrees.
    #[arg(long, default_value_t = 0.0)]
    pub angle_deg: f64,
    /// Polarization (s or p; no unit).
    #[arg(long, value_enum, default_value = "s")]
    pub polarization: Pol,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct StopbandArgs {
    #[command(flatten)]
    pub source: StackSource,
    /// Absolute reflectance at the band edge (fraction); preset default otherwise.
    #[arg(long, conflicts_with = "relative_threshold")]
    pub threshold: Option<f64>,
    /// Band edge as a fraction of the peak reflectance (fraction).
    #[arg(long)]
    pub relative_threshold: Option<f64>,
    /// Lower end of the search window, nm.
    #[arg(long)]
    pub from_nm: Option<f64>,
    /// Upper end of the search window, nm.
    #[arg(long)]
    pub to_nm: Option<f64>,
    /// Angle of incidence in the ambient, degrees.
    #[arg(long, default_value_t = 0.0)]
    pub angle_deg: f64,
    /// Polarization (s or p; no unit).
    #[arg(long, value_enum, default_value = "s")]
    pub polarization: Pol,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct GroupDelayArgs {
    #[command(flatten)]
    pub source: StackSource,
    /// Wavelength, nm.
    #[arg(long = "lambda")]
    pub lambda_nm: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct Radius {
    /// Mirror radius of curvature, um.
    #[arg(long)]
    pub radius_um: Option<f64>,
    /// Mirror radius of curvature, mm.
    #[arg(long)]
    pub radius_mm: Option<f64>,
}

impl Radius {
    pub fn um(&self) -> f64 {
        self.radius_um.or(self.radius_mm.map(|r| r * 1e3)).expect("clap requires one")
    }
}

#[derive(Debug, Args, Serialize)]
pub struct CavityReportArgs {
    /// Fiber mirror reflectance R1 (fraction).
    #[arg(long = "R1")]
    pub r1: f64,
    /// Planar mirror reflectance R2 (fraction).
    #[arg(long = "R2")]
    pub r2: f64,
    /// Longitudinal order m (count).
    #[arg(long)]
    pub m: u32,
    /// Resonant wavelength, nm.
    #[arg(long = "lambda")]
    pub lambda_nm: f64,
    #[command(flatten)]
    pub radius: Radius,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct AiryArgs {
    /// Finesse (dimensionless).
    #[arg(long)]
    pub finesse: f64,
    /// Free spectral range, in the unit of the detuning axis.
    #[arg(long, default_value_t = 1.0)]
    pub fsr: f64,
    /// Peak transmission (fraction).
    #[arg(long, default_value_t = 1.0)]
    pub t_peak: f64,
    /// First detuning, same unit as --fsr.
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    pub from: f64,
    /// Last detuning, same unit as --fsr.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub to: f64,
    /// Number of samples (count).
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ModeProfileArgs {
    /// Hermite order along x (count).
    #[arg(long, default_value_t = 0)]
    pub p: u32,
    /// Hermite order along y (count).
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    /// 1/e field half-width, um.
    #[arg(long)]
    pub waist_um: f64,
    /// Full width of the square grid, um.
    #[arg(long, default_value_t = 12.0)]
    pub extent_um: f64,
    /// Grid spacing, um.
    #[arg(long, default_value_t = 0.1)]
    pub step_um: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct FitScanArgs {
    /// Scan CSV with header displacement_raw,signal (raw piezo units, counts).
    #[arg(long)]
    pub trace: PathBuf,
    /// Number of Lorentzian peaks (count).
    #[arg(long, default_value_t = 1)]
    pub peaks: usize,
    /// Laser wavelength for the finesse, nm.
    #[arg(long = "lambda")]
    pub lambda_nm: Option<f64>,
    /// Piezo calibration, nm of cavity length per raw unit.
    #[arg(long)]
    pub nm_per_unit: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct CalibrateLengthArgs {
    /// JSON with wavelengths_nm (nm) and positions (raw piezo units).
    #[arg(long)]
    pub positions: PathBuf,
    /// Smallest order tried (count).
    #[arg(long, default_value_t = 3)]
    pub m_min: u32,
    /// Largest order tried (count).
    #[arg(long, default_value_t = 50)]
    pub m_max: u32,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct FitMapArgs {
    /// Map CSV with header x_um,y_um,signal (um, um, counts).
    #[arg(long)]
    pub map: PathBuf,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

/// `P,N,WEIGHT`, for instance `0,1,0.5`.
pub fn parse_mode(s: &str) -> Result<ModeComb, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [p, n, w] = parts[..] else {
        return Err(format!("expected P,N,WEIGHT, got `{s}`"));
    };
    let p = p.parse().map_err(|_| format!("bad order `{p}`"))?;
    let n = n.parse().map_err(|_| format!("bad order `{n}`"))?;
    let w = w.parse().map_err(|_| format!("bad weight `{w}`"))?;
    Ok(ModeComb::new(TransverseMode::new(p, n), w))
}

#[derive(Debug, Args, Serialize)]
pub struct SynthScanArgs {
    /// Fiber mirror reflectance R1 (fraction).
    #[arg(long = "R1", default_value_t = 0.97)]
    pub r1: f64,
    /// Planar mirror reflectance R2 (fraction).
    #[arg(long = "R2", default_value_t = 0.999)]
    pub r2: f64,
    /// Longitudinal order m (count).
    #[arg(long, default_value_t = 7)]
    pub m: u32,
    /// Laser wavelength, nm.
    #[arg(long = "lambda", default_value_t = 785.0)]
    pub lambda_nm: f64,
    #[command(flatten)]
    pub radius: Radius,
    /// Cavity length at the first sample, nm.
    #[arg(long)]
    pub start_nm: f64,
    /// Cavity length at the last sample, nm.
    #[arg(long)]
    pub stop_nm: f64,
    /// Number of samples (count).
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Piezo calibration, nm of cavity length per raw unit.
    #[arg(long, default_value_t = 1.0)]
    pub nm_per_unit: f64,
    /// Transverse mode comb as P,N,WEIGHT (orders as counts, weight as a
    /// fraction); repeat for several. Fundamental alone when omitted.
    #[arg(long = "mode", value_parser = parse_mode)]
    pub modes: Vec<ModeComb>,
    /// Gaussian noise, fraction of the noiseless peak.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Random seed (integer).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SynthMapArgs {
    /// Hermite order along x (count).
    #[arg(long, default_value_t = 0)]
    pub p: u32,
    /// Hermite order along y (count).
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    /// 1/e field half-width, um.
    #[arg(long)]
    pub waist_um: f64,
    /// Full width of the square grid, um.
    #[arg(long, default_value_t = 12.0)]
    pub extent_um: f64,
    /// Grid spacing, um.
    #[arg(long, default_value_t = 0.25)]
    pub step_um: f64,
    /// Fluorescent bead diameter, um.
    #[arg(long, default_value_t = 0.0)]
    pub bead_um: f64,
    /// Gaussian noise, fraction of the noiseless peak.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Random seed (integer).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct FilterSpectrumArgs {
    /// Emitter model JSON (band centres and widths in nm); DBT model when omitted.
    #[arg(long)]
    pub emitter: Option<PathBuf>,
    /// Finesse (dimensionless).
    #[arg(long, default_value_t = 200.0)]
    pub finesse: f64,
    /// Approximate optical cavity length, um; snapped to a resonance.
    #[arg(long, default_value_t = 2.7475)]
    pub length_um: f64,
    /// Resonance wavelength of the fundamental mode, nm.
    #[arg(long = "lambda", default_value_t = 785.0)]
    pub lambda_nm: f64,
    /// Peak transmission (fraction).
    #[arg(long, default_value_t = 1.0)]
    pub t_peak: f64,
    /// Wavelength-independent background transmission (fraction).
    #[arg(long, conflicts_with = "background_file")]
    pub background: Option<f64>,
    /// Background transmission CSV (wavelength_nm,value; nm, fraction).
    #[arg(long)]
    pub background_file: Option<PathBuf>,
    /// Transverse mode comb as P,N,WEIGHT (orders as counts, weight as a
    /// fraction); repeat for several. Fundamental alone when omitted.
    #[arg(long = "mode", value_parser = parse_mode)]
    pub modes: Vec<ModeComb>,
    /// Mirror radius of curvature for higher modes, um.
    #[arg(long, conflicts_with = "radius_mm")]
    pub radius_um: Option<f64>,
    /// Mirror radius of curvature for higher modes, mm.
    #[arg(long)]
    pub radius_mm: Option<f64>,
    /// Wavelength step of the emitter grid, nm.
    #[arg(long, default_value_t = 0.05)]
    pub step_nm: f64,
    /// Grid half-span around each band, in band FWHMs (dimensionless).
    #[arg(long, default_value_t = 3.0)]
    pub span_fwhm: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct PurcellArgs {
    /// Quality factor Q (dimensionless).
    #[arg(long)]
    pub q: f64,
    /// Mode volume, cubic wavelengths (lambda^3).
    #[arg(long)]
    pub volume_lambda3: f64,
    /// Solid-angle fraction (fraction).
    #[arg(long, conflicts_with = "waist_um")]
    pub solid_fraction: Option<f64>,
    /// Mode waist, um; sets the solid-angle fraction with --lambda.
    #[arg(long, requires = "lambda_nm")]
    pub waist_um: Option<f64>,
    /// Wavelength for the solid-angle fraction, nm.
    #[arg(long = "lambda")]
    pub lambda_nm: Option<f64>,
    /// Spectral overlap (fraction).
    #[arg(long, default_value_t = 1.0)]
    pub overlap: f64,
    /// Free-space 0-0 branching ratio (fraction).
    #[arg(long, default_value_t = 0.3)]
    pub alpha0: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
#[command(group(clap::ArgGroup::new("what").required(true).args(["enhancement", "target"])))]
pub struct BranchingArgs {
    /// Free-space 0-0 branching ratio (fraction).
    #[arg(long)]
    pub alpha0: f64,
    /// 0-0 rate enhancement factor (dimensionless).
    #[arg(long)]
    pub enhancement: Option<f64>,
    /// Target branching ratio (fraction); reports the required enhancement.
    #[arg(long)]
    pub target: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct BfpArgs {
    #[command(flatten)]
    pub source: StackSource,
    /// Emitter model JSON (nm); DBT model when omitted.
    #[arg(long)]
    pub emitter: Option<PathBuf>,
    /// Largest emission angle, degrees.
    #[arg(long, default_value_t = 70.0)]
    pub max_angle_deg: f64,
    /// Number of angles (count).
    #[arg(long, default_value_t = 141)]
    pub points: usize,
    /// Add the on-resonance cavity lobe with this finesse (dimensionless).
    #[arg(long, requires_all = ["m", "lambda_nm"])]
    pub finesse: Option<f64>,
    /// Longitudinal order of the cavity (count).
    #[arg(long)]
    pub m: Option<u32>,
    /// Cavity resonance, nm.
    #[arg(long = "lambda")]
    pub lambda_nm: Option<f64>,
    /// Mirror radius of curvature, um.
    #[arg(long, conflicts_with = "radius_mm")]
    pub radius_um: Option<f64>,
    /// Mirror radius of curvature, mm.
    #[arg(long)]
    pub radius_mm: Option<f64>,
    /// Cavity peak transmission (fraction).
    #[arg(long, default_value_t = 1.0)]
    pub t_peak: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveArg {
    MaxBranching,
    MinFinesseForTarget,
}

#[derive(Debug, Args, Serialize)]
pub struct OptimizeArgs {
    /// Design space JSON (finesse, radius_um in um, order, wavelength_nm in nm).
    #[arg(long)]
    pub space: PathBuf,
    /// Objective (no unit).
    #[arg(long, value_enum, default_value = "max-branching")]
    pub objective: ObjectiveArg,
    /// Target branching ratio (fraction).
    #[arg(long)]
    pub target: Option<f64>,
    /// Leave the coarse-grid trace out of the report (flag, no unit).
    #[arg(long)]
    pub no_trace: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}
