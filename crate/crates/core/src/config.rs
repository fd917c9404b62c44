//! Run configuration in TOML, with presets for the standard figures.
//!
//! Every key is optional; missing keys take the defaults below, which
//! describe the 1500 nm setup (x rays 1.4e16 W/cm², σ = 2 fs, resonant at
//! 848 eV; optical 1e11 W/cm², 3 + 10 + 3 cycle trapezoid; zero delay).

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bound::Frame;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    pub atom: AtomConfig,
    pub xray: XRayConfig,
    pub optical: OpticalConfig,
    pub grid: GridConfig,
    pub output: OutputConfig,
    pub scan: Option<ScanConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            name: "run".into(),
            atom: AtomConfig::default(),
            xray: XRayConfig::default(),
            optical: OpticalConfig::default(),
            grid: GridConfig::default(),
            output: OutputConfig::default(),
            scan: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtomConfig {
    pub e0_ev: f64,
    pub e1_ev: f64,
    pub mu10: f64,
    pub gamma_1s_ev: f64,
    pub sigma0_cm2: f64,
    pub sigma1_cm2: f64,
    pub e_ion_ev: f64,
    pub partial_width_ev: f64,
    pub beta: f64,
    pub xi: f64,
    /// Apply x-ray ionization to the ground state.
    pub ground_decay: bool,
}

impl Default for AtomConfig {
    fn default() -> Self {
        Self {
            e0_ev: 0.0,
            e1_ev: 848.0,
            mu10: 0.0573,
            gamma_1s_ev: 0.27,
            sigma0_cm2: 2.56e-20,
            sigma1_cm2: 3.47e-20,
            e_ion_ev: 100.32,
            partial_width_ev: 0.016,
            beta: 0.0,
            xi: 0.0,
            ground_decay: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct XRayConfig {
    pub intensity_wcm2: f64,
    /// Photon energy; resonant with the transition when absent.
    pub photon_energy_ev: Option<f64>,
    pub sigma_fs: f64,
    /// Delay of the pulse peak after the optical pulse centre.
    pub delay_fs: f64,
}

impl Default for XRayConfig {
    fn default() -> Self {
        Self { intensity_wcm2: 1.4e16, photon_energy_ev: None, sigma_fs: 2.0, delay_fs: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OpticalConfig {
    pub enabled: bool,
    pub wavelength_nm: f64,
    pub intensity_wcm2: f64,
    pub phi: f64,
    pub cycles_on: f64,
    pub cycles_plateau: f64,
    pub cycles_off: f64,
}

impl Default for OpticalConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            wavelength_nm: 1500.0,
            intensity_wcm2: 1e11,
            phi: 0.0,
            cycles_on: 3.0,
            cycles_plateau: 10.0,
            cycles_off: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub energy_half_width_ev: f64,
    pub energy_step_ev: f64,
    /// Gauss-Legendre points in cos θ.
    pub angles: usize,
    /// Add θ = 0 and π/2 to the angular grid.
    pub diagnostic_angles: bool,
    /// Time step is min(optical period, Rabi period, σ) divided by this.
    pub samples_per_cycle: f64,
    /// Free decay kept after the x-ray pulse, in core-hole lifetimes.
    pub tail_lifetimes: f64,
    pub ponderomotive: bool,
    pub frame: Frame,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            energy_half_width_ev: 12.0,
            energy_step_ev: 0.01,
            angles: 64,
            diagnostic_angles: true,
            samples_per_cycle: 200.0,
            tail_lifetimes: 20.0,
            ponderomotive: true,
            frame: Frame::Rotating,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: String,
    pub formats: Vec<String>,
    /// Write the bound-state trajectory alongside spectra.
    pub trajectory: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: "out".into(), formats: vec!["csv".into(), "json".into()], trajectory: true }
    }
}

/// Parameter scanned by `scan`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    Delay,
    XrayIntensity,
    Wavelength,
    Angle,
    IntensityAverage,
}

impl ScanKind {
    pub fn name(self) -> &'static str {
        match self {
            ScanKind::Delay => "delay",
            ScanKind::XrayIntensity => "xray-intensity",
            ScanKind::Wavelength => "wavelength",
            ScanKind::Angle => "angle",
            ScanKind::IntensityAverage => "intensity-average",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            ScanKind::Delay => "fs",
            ScanKind::XrayIntensity | ScanKind::IntensityAverage => "W/cm2",
            ScanKind::Wavelength => "nm",
            ScanKind::Angle => "rad",
        }
    }
}

/// Scan values, either listed or as an inclusive range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub kind: ScanKind,
    pub values: Option<Vec<f64>>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub step: Option<f64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { kind: ScanKind::Delay, values: None, from: None, to: None, step: None }
    }
}

impl ScanConfig {
    pub fn resolve(&self) -> Result<Vec<f64>> {
        parameter_values(self.values.as_deref(), self.from, self.to, self.step)
    }
}

/// Expand a scan range into strictly increasing values.
pub fn parameter_values(values: Option<&[f64]>, from: Option<f64>, to: Option<f64>, step: Option<f64>) -> Result<Vec<f64>> {
    let out = match (values, from, to, step) {
        (Some(v), None, None, None) => v.to_vec(),
        (None, Some(a), Some(b), Some(h)) => {
            if !(h > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
                return Err(Error::MalformedRange(format!("from {a} to {b} step {h}")));
            }
            let n = ((b - a) / h + 1e-9).floor() as usize;
            (0..=n).map(|k| a + k as f64 * h).collect()
        }
        (None, Some(a), None, None) => vec![a],
        _ => return Err(Error::MalformedRange("give either values or from/to/step".into())),
    };
    if out.is_empty() {
        return Err(Error::MalformedRange("no values".into()));
    }
    if out.iter().any(|v| !v.is_finite()) || !out.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::MalformedRange("values must be finite and strictly increasing".into()));
    }
    Ok(out)
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// SHA-256 of the canonical TOML form.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()).as_slice())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("atom.e1_ev", self.atom.e1_ev - self.atom.e0_ev),
            ("atom.mu10", self.atom.mu10),
            ("atom.gamma_1s_ev", self.atom.gamma_1s_ev),
            ("atom.partial_width_ev", self.atom.partial_width_ev),
            ("xray.sigma_fs", self.xray.sigma_fs),
            ("optical.wavelength_nm", self.optical.wavelength_nm),
            ("grid.energy_half_width_ev", self.grid.energy_half_width_ev),
            ("grid.energy_step_ev", self.grid.energy_step_ev),
            ("grid.samples_per_cycle", self.grid.samples_per_cycle),
            ("grid.tail_lifetimes", self.grid.tail_lifetimes),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, format!("{v} must be positive")));
            }
        }
        let non_negative = [
            ("atom.sigma0_cm2", self.atom.sigma0_cm2),
            ("atom.sigma1_cm2", self.atom.sigma1_cm2),
            ("xray.intensity_wcm2", self.xray.intensity_wcm2),
            ("optical.intensity_wcm2", self.optical.intensity_wcm2),
            ("optical.cycles_on", self.optical.cycles_on),
            ("optical.cycles_plateau", self.optical.cycles_plateau),
            ("optical.cycles_off", self.optical.cycles_off),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, format!("{v} must be non-negative")));
            }
        }
        if let Some(e) = self.xray.photon_energy_ev {
            if !(e > 0.0) {
                return Err(Error::invalid("xray.photon_energy_ev", "must be positive"));
            }
        }
        if !self.xray.delay_fs.is_finite() || !self.optical.phi.is_finite() {
            return Err(Error::invalid("xray.delay_fs", "must be finite"));
        }
        if self.grid.samples_per_cycle < crate::fields::MIN_SAMPLES_PER_CYCLE {
            return Err(Error::invalid(
                "grid.samples_per_cycle",
                format!("at least {} required", crate::fields::MIN_SAMPLES_PER_CYCLE),
            ));
        }
        if self.atom.partial_width_ev >= self.atom.gamma_1s_ev {
            return Err(Error::invalid("atom.partial_width_ev", "must be below gamma_1s_ev"));
        }
        if !(-1.0..=2.0).contains(&self.atom.beta) {
            return Err(Error::invalid("atom.beta", "must lie in [-1, 2]"));
        }
        if self.optical.enabled && self.optical.cycles_on + self.optical.cycles_plateau + self.optical.cycles_off <= 0.0 {
            return Err(Error::invalid("optical.cycles_plateau", "pulse must have positive length"));
        }
        if let Some(scan) = &self.scan {
            scan.resolve()?;
        }
        Ok(())
    }

    /// Optical field counts as present.
    pub fn dressed(&self) -> bool {
        self.optical.enabled && self.optical.intensity_wcm2 > 0.0
    }
}

/// Shipped presets as `(name, TOML)`.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig1b", include_str!("../presets/fig1b.toml")),
    ("fig1c", include_str!("../presets/fig1c.toml")),
    ("fig2a", include_str!("../presets/fig2a.toml")),
    ("fig2b", include_str!("../presets/fig2b.toml")),
    ("fig3", include_str!("../presets/fig3.toml")),
    ("fig5", include_str!("../presets/fig5.toml")),
];

pub fn preset(name: &str) -> Result<RunConfig> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Config(format!("unknown preset '{name}'")))
        .and_then(|(_, text)| RunConfig::from_toml(text))
}
