//! CSV and JSON artifacts.
//!
//! Every CSV has one header line and numbers at 9 significant digits. Each
//! run writes into `<directory>/<name>-<hash>/` where `hash` is the first 12
//! hex digits of the configuration hash, and the manifest in the same
//! directory carries the full hash.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bound::BoundTrajectory;
use crate::config::RunConfig;
use crate::continuum::SpectrumGrid;
use crate::error::{Error, Result};
use crate::observables::{AsymmetryResult, ScanResult};
use crate::oracles::OracleReport;
use crate::pipeline::Derived;
use crate::units::au_to_fs;

/// A number at 9 significant digits.
pub fn fmt9(v: f64) -> String {
    format!("{v:.8e}")
}

/// Write rows under a header.
pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        let line: Vec<String> = row.into_iter().map(fmt9).collect();
        text.push_str(&line.join(","));
        text.push('\n');
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

pub fn spectrum_csv(path: &Path, s: &SpectrumGrid) -> Result<()> {
    let e = s.energies();
    let rows = s.grid.angles.iter().enumerate().flat_map(|(k, &th)| {
        let slice = s.slice(k);
        e.iter().zip(slice).map(move |(&en, &p)| vec![en, th, p])
    });
    write_csv(path, &["energy_eV", "theta_rad", "density_per_eV_sr"], rows)
}

pub fn density_csv(path: &Path, energies: &[f64], density: &[f64], column: &str) -> Result<()> {
    let rows = energies.iter().zip(density).map(|(&e, &p)| vec![e, p]);
    write_csv(path, &["energy_eV", column], rows)
}

pub fn trajectory_csv(path: &Path, traj: &BoundTrajectory) -> Result<()> {
    let rows = (0..traj.len()).map(|k| {
        let (a0, a1) = (traj.a0(k), traj.a1(k));
        vec![au_to_fs(traj.grid.time(k)), a0.re, a0.im, a1.re, a1.im, a0.norm_sqr(), a1.norm_sqr()]
    });
    write_csv(path, &["t_fs", "re_a0", "im_a0", "re_a1", "im_a1", "pop0", "pop1"], rows)
}

pub fn scan_csv(path: &Path, scan: &ScanResult) -> Result<()> {
    let column = format!("{}_{}", scan.kind.name().replace('-', "_"), scan.unit);
    let rows = scan.values.iter().zip(&scan.asymmetry).map(|(&v, r)| vec![v, r.a, r.n_above, r.n_below]);
    write_csv(path, &[column.as_str(), "A", "n_above", "n_below"], rows)
}

/// Record sufficient to rerun a computation.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub config_hash: String,
    pub config: RunConfig,
    pub derived: Option<Derived>,
    /// θ = 0 and angle-integrated asymmetries for spectrum runs.
    pub asymmetry: Option<AsymmetryResult>,
    pub asymmetry_integrated: Option<AsymmetryResult>,
    pub scan: Option<ScanSummary>,
    pub checks: Vec<OracleReport>,
    pub elapsed_seconds: f64,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub kind: String,
    pub unit: String,
    pub values: Vec<f64>,
    pub a: Vec<f64>,
}

impl RunManifest {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: config.hash(),
            config: config.clone(),
            derived: None,
            asymmetry: None,
            asymmetry_integrated: None,
            scan: None,
            checks: Vec::new(),
            elapsed_seconds: 0.0,
            files: Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("manifest.json");
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))?;
        fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

/// Create and return the run directory for `config` under `root`.
pub fn run_directory(root: &Path, config: &RunConfig) -> Result<PathBuf> {
    let dir = root.join(format!("{}-{}", config.name, &config.hash()[..12]));
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    Ok(dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt9(747.68), "7.47680000e2");
        assert_eq!(fmt9(-0.000123456789123), "-1.23456789e-4");
        assert_eq!(fmt9(0.0), "0.00000000e0");
    }

    #[test]
    fn csv_layout_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        density_csv(&p, &[1.0, 2.0], &[0.5, 0.25], "density").unwrap();
        let text = fs::read_to_string(&p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, ["energy_eV,density", "1.00000000e0,5.00000000e-1", "2.00000000e0,2.50000000e-1"]);

        let cfg = RunConfig::default();
        let run = run_directory(dir.path(), &cfg).unwrap();
        assert!(run.ends_with(format!("{}-{}", cfg.name, &cfg.hash()[..12])));
        let m = RunManifest::new("spectrum", &cfg).write(&run).unwrap();
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(m).unwrap()).unwrap();
        assert_eq!(v["config_hash"], cfg.hash());
    }

    #[test]
    fn unwritable_target_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("missing").join("x.csv");
        assert!(matches!(density_csv(&p, &[1.0], &[1.0], "d"), Err(Error::Io { .. })));
    }
}
