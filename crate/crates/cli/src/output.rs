use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use microcav_core::io::to_json_report;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{core, CliError};

/// What a command produced, before it is written anywhere.
pub enum Artifact {
    Json(Value),
    Csv(String),
}

pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub artifact: Artifact,
}

impl Report {
    pub fn json<T: Serialize>(command: &'static str, params: Value, result: &T) -> Result<Self, CliError> {
        let result = serde_json::to_value(result).map_err(|e| CliError::Invalid(e.to_string()))?;
        Ok(Self {
            command,
            params,
            artifact: Artifact::Json(result),
        })
    }

    pub fn csv(command: &'static str, params: Value, text: String) -> Self {
        Self {
            command,
            params,
            artifact: Artifact::Csv(text),
        }
    }

    fn params_json(&self) -> Result<String, CliError> {
        to_json_report(&json!({ "command": self.command, "params": self.params })).map_err(core)
    }

    /// Writes the report to `out`, or to standard output. CSV parameters go
    /// to `<out>.params.json`, or to standard error without `out`.
    pub fn emit(&self, out: Option<&Path>) -> Result<(), CliError> {
        match (&self.artifact, out) {
            (Artifact::Json(result), out) => {
                let text = to_json_report(&json!({
                    "command": self.command,
                    "params": self.params,
                    "result": result,
                }))
                .map_err(core)?;
                match out {
                    Some(path) => write_atomic(path, &text),
                    None => write_stdout(&text),
                }
            }
            (Artifact::Csv(text), Some(path)) => {
                write_atomic(path, text)?;
                write_atomic(&sidecar(path), &self.params_json()?)
            }
            (Artifact::Csv(text), None) => {
                write_stdout(text)?;
                eprint!("{}", self.params_json()?);
                Ok(())
            }
        }
    }
}

pub fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".params.json");
    PathBuf::from(name)
}

fn write_stdout(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io("<stdout>", e))
}

/// Temporary file in the target directory, then rename over the target.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    let result = fs::File::create(&tmp)
        .and_then(|mut f| f.write_all(text.as_bytes()).and_then(|_| f.sync_all()))
        .and_then(|_| fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(CliError::io(path, e));
    }
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}
