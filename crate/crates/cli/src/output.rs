use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

/// Formats a value as `{:.16e}`, `+∞` as `inf`; NaN and `−∞` are invariant
/// violations.
pub fn num(x: f64) -> Result<String, CliError> {
    if x.is_nan() {
        Err(CliError::Invariant("NaN produced in output".into()))
    } else if x == f64::INFINITY {
        Ok("inf".into())
    } else if x.is_infinite() {
        Err(CliError::Invariant("-inf produced in output".into()))
    } else {
        Ok(format!("{x:.16e}"))
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))
}

/// Writes a CSV file with the given header and preformatted rows.
pub fn write_csv(
    path: &Path,
    header: &[String],
    rows: &[Vec<String>],
) -> Result<PathBuf, CliError> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(path.to_path_buf())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<PathBuf, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Invariant(format!("cannot serialize {}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(path.to_path_buf())
}
