//! CSV tables and the run manifest.

use std::path::{Path, PathBuf};

use crate::config::Settings;
use crate::CliError;

/// Round-trip formatting: 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Output { path: path.display().to_string(), message: e.to_string() }
}

pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(header).map_err(|e| io_err(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// `<dir>/<stem><suffix>` next to the main output file.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

/// Writes the resolved settings as a config file that reproduces the run,
/// with version and timing as comments.
pub fn write_manifest(path: &Path, settings: &Settings, outputs: &[PathBuf], wall_time: f64) -> Result<(), CliError> {
    let mut text = String::new();
    text.push_str(&format!("# qfb {} run manifest\n", env!("CARGO_PKG_VERSION")));
    text.push_str(&format!("# command = {}\n", settings.command));
    if let Some(seed) = settings.get("seed") {
        text.push_str(&format!("# seed = {seed}\n"));
    }
    text.push_str(&format!("# wall_time_s = {wall_time:.3}\n"));
    for out in outputs {
        text.push_str(&format!("# wrote {}\n", out.display()));
    }
    text.push_str(&format!("# rerun: qfb {} --config {}\n", settings.command, path.display()));
    text.push_str(&format!("[{}]\n", settings.command));
    for (k, v) in settings.values() {
        text.push_str(&format!("{k} = {v}\n"));
    }
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 0.0, 123456.789] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let digits = s.split('e').next().unwrap().chars().filter(char::is_ascii_digit).count();
            assert_eq!(digits, 17);
        }
    }

    #[test]
    fn sibling_paths() {
        assert_eq!(sibling(Path::new("out/run.csv"), "_optimum.csv"), PathBuf::from("out/run_optimum.csv"));
        assert_eq!(sibling(Path::new("run"), ".manifest"), PathBuf::from("run.manifest"));
    }
}
