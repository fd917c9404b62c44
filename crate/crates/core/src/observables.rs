//! Asymmetry of the Auger line and parameter scans over it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, ScanKind};
use crate::error::{Error, Result};
use crate::pipeline::Simulation;
use crate::quadrature::linear_integral;

/// `A = (n_above − n_below) / (n_above + n_below)` about `e_ref`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryResult {
    pub a: f64,
    pub n_above: f64,
    pub n_below: f64,
    pub e_ref: f64,
}

/// Asymmetry of a spectrum sampled at increasing `energies` (eV). The
/// window is trimmed to be symmetric about `e_ref`; the sample interval
/// containing `e_ref` is split there.
pub fn asymmetry(energies: &[f64], density: &[f64], e_ref: f64) -> Result<AsymmetryResult> {
    if energies.len() != density.len() {
        return Err(Error::Incompatible("energies and density differ in length".into()));
    }
    if energies.len() < 2 {
        return Err(Error::EmptySpectrum);
    }
    let width = (e_ref - energies[0]).min(energies[energies.len() - 1] - e_ref);
    if !(width > 0.0) {
        return Err(Error::invalid("e_ref", "outside the spectrum"));
    }
    let n_above = linear_integral(energies, density, e_ref, e_ref + width);
    let n_below = linear_integral(energies, density, e_ref - width, e_ref);
    let total = n_above + n_below;
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::EmptySpectrum);
    }
    Ok(AsymmetryResult { a: (n_above - n_below) / total, n_above, n_below, e_ref })
}

/// Indices of local maxima of `density` that reach at least `floor` times
/// its largest value. Plateaus count once, at their first sample.
pub fn local_maxima(density: &[f64], floor: f64) -> Vec<usize> {
    let top = density.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out = Vec::new();
    let mut k = 1;
    while k + 1 < density.len() {
        if density[k] > density[k - 1] {
            let mut j = k;
            while j + 1 < density.len() && density[j + 1] == density[k] {
                j += 1;
            }
            if j + 1 < density.len() && density[j + 1] < density[k] && density[k] >= floor * top {
                out.push(k);
            }
            k = j + 1;
        } else {
            k += 1;
        }
    }
    out
}

/// Asymmetry values against one scanned parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub kind: ScanKind,
    pub unit: String,
    pub values: Vec<f64>,
    pub asymmetry: Vec<AsymmetryResult>,
    /// Energy axis of the stored spectra, eV.
    pub energies: Vec<f64>,
    /// Spectrum behind each point (θ = 0 slice, or the averaged spectrum).
    pub spectra: Vec<Vec<f64>>,
}

impl ScanResult {
    pub fn a(&self) -> Vec<f64> {
        self.asymmetry.iter().map(|r| r.a).collect()
    }
}

/// θ = 0 spectrum and its asymmetry for one configuration.
pub fn forward_asymmetry(cfg: &RunConfig) -> Result<(AsymmetryResult, Vec<f64>, Vec<f64>)> {
    let sim = Simulation::prepare(cfg)?;
    let spectrum = sim.spectrum_at(&[0.0])?;
    let result = asymmetry(spectrum.energies(), spectrum.slice(0), sim.channel_energy_ev())?;
    Ok((result, spectrum.energies().to_vec(), spectrum.slice(0).to_vec()))
}

fn scan_with(kind: ScanKind, values: &[f64], cfg: &RunConfig, apply: impl Fn(&mut RunConfig, f64) + Sync) -> Result<ScanResult> {
    check_monotone(values)?;
    let points: Vec<_> = values
        .par_iter()
        .map(|&v| {
            let mut c = cfg.clone();
            apply(&mut c, v);
            forward_asymmetry(&c)
        })
        .collect::<Result<_>>()?;
    Ok(collect(kind, values, points))
}

fn collect(kind: ScanKind, values: &[f64], points: Vec<(AsymmetryResult, Vec<f64>, Vec<f64>)>) -> ScanResult {
    let energies = points.first().map(|p| p.1.clone()).unwrap_or_default();
    let mut asymmetry = Vec::with_capacity(points.len());
    let mut spectra = Vec::with_capacity(points.len());
    for (a, _, s) in points {
        asymmetry.push(a);
        spectra.push(s);
    }
    ScanResult { kind, unit: kind.unit().into(), values: values.to_vec(), asymmetry, energies, spectra }
}

fn check_monotone(values: &[f64]) -> Result<()> {
    if values.is_empty() || !values.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::MalformedRange("scan values must be non-empty and strictly increasing".into()));
    }
    Ok(())
}

/// θ = 0 asymmetry against x-ray delay (fs); the optical phase is held fixed.
pub fn scan_delay(delays_fs: &[f64], cfg: &RunConfig) -> Result<ScanResult> {
    scan_with(ScanKind::Delay, delays_fs, cfg, |c, v| c.xray.delay_fs = v)
}

/// θ = 0 asymmetry against optical wavelength (nm).
pub fn scan_wavelength(wavelengths_nm: &[f64], cfg: &RunConfig) -> Result<ScanResult> {
    scan_with(ScanKind::Wavelength, wavelengths_nm, cfg, |c, v| c.optical.wavelength_nm = v)
}

/// θ = 0 asymmetry against peak x-ray intensity (W/cm²).
pub fn scan_xray_intensity(intensities: &[f64], cfg: &RunConfig) -> Result<ScanResult> {
    scan_with(ScanKind::XrayIntensity, intensities, cfg, |c, v| c.xray.intensity_wcm2 = v)
}

/// Asymmetry against emission angle (rad) from one simulation.
pub fn scan_angle(angles: &[f64], cfg: &RunConfig) -> Result<ScanResult> {
    check_monotone(angles)?;
    if angles.iter().any(|&a| !(0.0..=std::f64::consts::PI).contains(&a)) {
        return Err(Error::MalformedRange("angles must lie in [0, π]".into()));
    }
    let sim = Simulation::prepare(cfg)?;
    let spectrum = sim.spectrum_at(angles)?;
    let e_ref = sim.channel_energy_ev();
    let points = (0..angles.len())
        .map(|k| Ok((asymmetry(spectrum.energies(), spectrum.slice(k), e_ref)?, spectrum.energies().to_vec(), spectrum.slice(k).to_vec())))
        .collect::<Result<_>>()?;
    Ok(collect(ScanKind::Angle, angles, points))
}

/// Transverse x-ray intensity profile across an extended uniform target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransverseProfile {
    /// `I(r) = I₀ e^{−2r²/w²}`; the annulus `r dr` is proportional to `d ln I`.
    Gaussian,
    /// Every atom sees the peak intensity.
    FlatTop,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntensityAverage {
    pub profile: TransverseProfile,
    /// Intensity samples, log-spaced.
    pub samples: usize,
    /// Lowest sampled intensity as a fraction of the peak.
    pub min_fraction: f64,
}

impl Default for IntensityAverage {
    fn default() -> Self {
        Self { profile: TransverseProfile::Gaussian, samples: 40, min_fraction: 0.02 }
    }
}

impl IntensityAverage {
    /// Sample intensities (fractions of the peak) and their weights.
    pub fn nodes(&self) -> Result<Vec<(f64, f64)>> {
        match self.profile {
            TransverseProfile::FlatTop => Ok(vec![(1.0, 1.0)]),
            TransverseProfile::Gaussian => {
                if self.samples < 2 {
                    return Err(Error::invalid("samples", "at least two intensity samples required"));
                }
                if !(self.min_fraction > 0.0 && self.min_fraction < 1.0) {
                    return Err(Error::invalid("min_fraction", "must lie in (0, 1)"));
                }
                let span = -self.min_fraction.ln();
                let h = span / (self.samples - 1) as f64;
                Ok((0..self.samples)
                    .map(|k| {
                        let ln_f = -span + k as f64 * h;
                        let w = if k == 0 || k + 1 == self.samples { 0.5 * h } else { h };
                        (ln_f.exp(), w)
                    })
                    .collect())
            }
        }
    }
}

/// Spectrum summed over the transverse profile and its asymmetry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AveragedSpectrum {
    pub asymmetry: AsymmetryResult,
    pub energies: Vec<f64>,
    pub density: Vec<f64>,
    /// `(intensity W/cm², weight)` per sample.
    pub samples: Vec<(f64, f64)>,
}

/// Average the θ = 0 spectrum over the transverse intensity distribution of
/// the x rays peaking at `cfg.xray.intensity_wcm2`. Lower intensities
/// contribute less continuum mass, so the excitation probability enters
/// through the spectra themselves.
pub fn intensity_average(cfg: &RunConfig, avg: &IntensityAverage) -> Result<AveragedSpectrum> {
    let peak = cfg.xray.intensity_wcm2;
    if !(peak > 0.0) {
        return Err(Error::invalid("xray.intensity_wcm2", "peak intensity must be positive"));
    }
    let nodes = avg.nodes()?;
    let runs: Vec<_> = nodes
        .par_iter()
        .map(|&(f, _)| {
            let mut c = cfg.clone();
            c.xray.intensity_wcm2 = f * peak;
            forward_asymmetry(&c)
        })
        .collect::<Result<_>>()?;
    let energies = runs[0].1.clone();
    let mut density = vec![0.0; energies.len()];
    for ((_, w), (_, _, s)) in nodes.iter().zip(&runs) {
        for (d, v) in density.iter_mut().zip(s) {
            *d += w * v;
        }
    }
    let asymmetry = asymmetry(&energies, &density, runs[0].0.e_ref)?;
    let samples = nodes.iter().map(|&(f, w)| (f * peak, w)).collect();
    Ok(AveragedSpectrum { asymmetry, energies, density, samples })
}

/// Intensity-averaged asymmetry against the peak intensity.
pub fn scan_intensity_average(peaks: &[f64], cfg: &RunConfig, avg: &IntensityAverage) -> Result<ScanResult> {
    check_monotone(peaks)?;
    let points = peaks
        .iter()
        .map(|&p| {
            let mut c = cfg.clone();
            c.xray.intensity_wcm2 = p;
            let r = intensity_average(&c, avg)?;
            Ok((r.asymmetry, r.energies, r.density))
        })
        .collect::<Result<_>>()?;
    Ok(collect(ScanKind::IntensityAverage, peaks, points))
}

/// Dispatch a scan by kind.
pub fn run_scan(kind: ScanKind, values: &[f64], cfg: &RunConfig) -> Result<ScanResult> {
    match kind {
        ScanKind::Delay => scan_delay(values, cfg),
        ScanKind::Wavelength => scan_wavelength(values, cfg),
        ScanKind::XrayIntensity => scan_xray_intensity(values, cfg),
        ScanKind::Angle => scan_angle(values, cfg),
        ScanKind::IntensityAverage => scan_intensity_average(values, cfg, &IntensityAverage::default()),
    }
}
