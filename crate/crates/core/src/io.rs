//! File formats: JSON inputs (layer stacks, emitter models, design spaces),
//! CSV data (spectra, scan traces, mode maps) and rounded JSON reports.
//!
//! Numbers are written with nine significant digits.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::analysis::{AnalysisError, ModeMap, ScanTrace};
use crate::fmt::{g9, round9};
use crate::spectrum::{Spectrum, SpectrumError};

pub const SPECTRUM_HEADER: &str = "wavelength_nm,value";
pub const TRACE_HEADER: &str = "displacement_raw,signal";
pub const MAP_HEADER: &str = "x_um,y_um,signal";

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("expected header `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("line {line}: expected {expected} fields, found {found}")]
    FieldCount { line: usize, expected: usize, found: usize },
    #[error("line {line}: cannot parse `{text}` as a number")]
    Number { line: usize, text: String },
    #[error("map rows are not a complete row-major x/y grid")]
    RaggedMap,
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Resonance positions per laser wavelength, the input of a length
/// calibration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonancePositions {
    pub wavelengths_nm: Vec<f64>,
    /// Raw piezo positions, one list per wavelength.
    pub positions: Vec<Vec<f64>>,
}

/// Parses any of the JSON input types (layer stack, emitter model, design
/// space); validation runs as part of deserialisation.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))
}

/// Pretty JSON with every float rounded to nine significant digits.
pub fn to_json_report<T: Serialize + ?Sized>(value: &T) -> Result<String, FormatError> {
    let mut v = serde_json::to_value(value).map_err(|e| FormatError::Json(e.to_string()))?;
    round_value(&mut v);
    let mut text = serde_json::to_string_pretty(&v).map_err(|e| FormatError::Json(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().map(round9).and_then(serde_json::Number::from_f64) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// CSV with the given header and equally long numeric columns.
pub fn write_columns(header: &str, columns: &[&[f64]]) -> String {
    let rows = columns.first().map_or(0, |c| c.len());
    let mut out = String::with_capacity(24 * rows * columns.len() + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for i in 0..rows {
        for (j, c) in columns.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&g9(c[i]));
        }
        out.push('\n');
    }
    out
}

/// Parses numeric CSV with the exact `header`; blank lines are skipped.
pub fn read_columns(text: &str, header: &str) -> Result<Vec<Vec<f64>>, FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let found = lines.next().map_or("", |(_, l)| l.trim());
    if found != header {
        return Err(FormatError::Header {
            expected: header.to_string(),
            found: found.to_string(),
        });
    }
    let width = header.split(',').count();
    let mut columns = vec![Vec::new(); width];
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != width {
            return Err(FormatError::FieldCount {
                line: i + 1,
                expected: width,
                found: fields.len(),
            });
        }
        for (c, f) in columns.iter_mut().zip(fields) {
            c.push(f.parse().map_err(|_| FormatError::Number {
                line: i + 1,
                text: f.to_string(),
            })?);
        }
    }
    Ok(columns)
}

pub fn write_spectrum_csv(s: &Spectrum) -> String {
    write_columns(SPECTRUM_HEADER, &[s.wavelengths(), s.values()])
}

pub fn read_spectrum_csv(text: &str) -> Result<Spectrum, FormatError> {
    let mut c = read_columns(text, SPECTRUM_HEADER)?;
    let values = c.pop().unwrap_or_default();
    let wavelengths = c.pop().unwrap_or_default();
    Ok(Spectrum::new(wavelengths, values)?)
}

pub fn write_trace_csv(t: &ScanTrace) -> String {
    write_columns(TRACE_HEADER, &[t.displacement(), t.signal()])
}

pub fn read_trace_csv(text: &str) -> Result<ScanTrace, FormatError> {
    let mut c = read_columns(text, TRACE_HEADER)?;
    let signal = c.pop().unwrap_or_default();
    let displacement = c.pop().unwrap_or_default();
    Ok(ScanTrace::new(displacement, signal)?)
}

pub fn write_map_csv(m: &ModeMap) -> String {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (x, y, _) in m.iter() {
        xs.push(x);
        ys.push(y);
    }
    write_columns(MAP_HEADER, &[&xs, &ys, m.signal()])
}

/// Row-major map: x varies fastest, each row repeats the same x values.
pub fn read_map_csv(text: &str) -> Result<ModeMap, FormatError> {
    let c = read_columns(text, MAP_HEADER)?;
    let (x, y, s) = (&c[0], &c[1], &c[2]);
    if x.is_empty() {
        return Err(FormatError::RaggedMap);
    }
    let nx = y.iter().take_while(|&&v| v == y[0]).count();
    if x.len() % nx != 0 {
        return Err(FormatError::RaggedMap);
    }
    let ny = x.len() / nx;
    let xs = x[..nx].to_vec();
    let ys: Vec<f64> = (0..ny).map(|j| y[j * nx]).collect();
    for j in 0..ny {
        for i in 0..nx {
            let k = j * nx + i;
            if x[k] != xs[i] || y[k] != ys[j] {
                return Err(FormatError::RaggedMap);
            }
        }
    }
    Ok(ModeMap::new(xs, ys, s.clone())?)
}
