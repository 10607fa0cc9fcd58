use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Scientific notation with 17 significant digits, enough to round-trip any
/// `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))
}

/// Writes a CSV file with a header line and returns its path.
pub fn write_csv<I>(dir: &Path, name: &str, header: &[String], rows: I) -> Result<PathBuf, CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(path)
}

/// Writes `metadata.txt` as `key = value` lines, which `--config` accepts back.
pub fn write_metadata(dir: &Path, title: &str, entries: &[(&str, String)], notes: &[String]) -> Result<PathBuf, CliError> {
    let mut text = format!("# {title}\n");
    for note in notes {
        text.push_str(&format!("# {note}\n"));
    }
    for (k, v) in entries {
        text.push_str(&format!("{k} = {v}\n"));
    }
    let path = dir.join("metadata.txt");
    fs::write(&path, text)?;
    Ok(path)
}

pub fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}
