//! `microcav`: command-line front end for microcav-core.
//!
//! Exit codes: 0 success, 2 invalid input, 3 I/O failure. Errors are
//! reported on standard error as one line of JSON.

mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    use Command::*;
    let (report, out) = match &cli.command {
        DbrSpectrum(a) => (commands::dbr_spectrum(a)?, &a.output),
        Stopband(a) => (commands::stopband(a)?, &a.output),
        GroupDelay(a) => (commands::group_delay(a)?, &a.output),
        CavityReport(a) => (commands::cavity(a)?, &a.output),
        Airy(a) => (commands::airy(a)?, &a.output),
        ModeProfile(a) => (commands::mode_profile(a)?, &a.output),
        FitScan(a) => (commands::fit_scan(a)?, &a.output),
        CalibrateLength(a) => (commands::calibrate(a)?, &a.output),
        FitMap(a) => (commands::fit_map(a)?, &a.output),
        SynthScan(a) => (commands::synth_scan(a)?, &a.output),
        SynthMap(a) => (commands::synth_map(a)?, &a.output),
        FilterSpectrum(a) => (commands::filter_spectrum(a)?, &a.output),
        Purcell(a) => (commands::purcell(a)?, &a.output),
        Branching(a) => (commands::branching(a)?, &a.output),
        Bfp(a) => (commands::bfp(a)?, &a.output),
        Optimize(a) => (commands::optimize(a)?, &a.output),
    };
    report.emit(out.out.as_deref())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
