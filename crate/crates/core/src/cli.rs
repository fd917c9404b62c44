//! Command-line front end.
//!
//! Configuration comes from a preset or TOML file, then flags. Flags win.
//! The output root is `--out`, else `DRESSED_AUGER_OUT_DIR`, else
//! `output.directory` from the configuration.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical or validation
//! failure, 4 I/O error.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bound::Frame;
use crate::config::{parameter_values, preset, RunConfig, ScanKind, PRESETS};
use crate::continuum::angle_integrated;
use crate::error::{Error, Result};
use crate::observables::{asymmetry, run_scan};
use crate::output::{density_csv, run_directory, scan_csv, spectrum_csv, trajectory_csv, write_csv, RunManifest, ScanSummary};
use crate::pipeline::Simulation;
use crate::validation::{run_validation, Fault, ValidationOptions};

pub const OUT_DIR_ENV: &str = "DRESSED_AUGER_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "dressed-auger", version, about = "Resonant Auger spectra of neon in intense x rays with an optical dressing field")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound dynamics and electron spectra for one configuration.
    Spectrum(RunArgs),
    /// θ = 0 asymmetry against one parameter.
    Scan(ScanArgs),
    /// Run the oracle suite.
    Validate(ValidateArgs),
    /// Shipped configurations.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum PresetAction {
    List,
    /// Print a preset as TOML.
    Show { name: String },
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML configuration file.
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Shipped preset (see `presets list`).
    #[arg(long)]
    pub preset: Option<String>,
    /// Output root directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run name used in the output directory.
    #[arg(long)]
    pub name: Option<String>,
    /// Peak x-ray intensity, W/cm².
    #[arg(long, allow_hyphen_values = true)]
    pub xray_intensity: Option<f64>,
    /// X-ray photon energy, eV.
    #[arg(long, allow_hyphen_values = true)]
    pub photon_energy: Option<f64>,
    /// X-ray RMS duration, fs.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// X-ray delay after the optical centre, fs.
    #[arg(long, allow_hyphen_values = true)]
    pub delay: Option<f64>,
    /// Optical wavelength, nm.
    #[arg(long, allow_hyphen_values = true)]
    pub wavelength: Option<f64>,
    /// Optical intensity, W/cm².
    #[arg(long, allow_hyphen_values = true)]
    pub optical_intensity: Option<f64>,
    /// Optical carrier-envelope phase, rad.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Switch the optical field off.
    #[arg(long)]
    pub no_optical: bool,
    /// Gauss-Legendre angle count (0 for θ = 0 only).
    #[arg(long)]
    pub angles: Option<usize>,
    /// Energy step, eV.
    #[arg(long, allow_hyphen_values = true)]
    pub energy_step: Option<f64>,
    /// Energy half width about the channel energy, eV.
    #[arg(long, allow_hyphen_values = true)]
    pub energy_half_width: Option<f64>,
    /// Time steps per optical cycle.
    #[arg(long, allow_hyphen_values = true)]
    pub samples_per_cycle: Option<f64>,
    /// Integration frame for the bound amplitudes.
    #[arg(long, value_enum)]
    pub frame: Option<FrameArg>,
    /// Worker threads (default: available cores).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FrameArg {
    Rotating,
    Lab,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Scanned parameter; taken from the configuration when omitted.
    #[arg(value_enum)]
    pub kind: Option<ScanKindArg>,
    /// First scan value.
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,
    /// Last scan value, inclusive.
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,
    /// Scan increment.
    #[arg(long, allow_hyphen_values = true)]
    pub step: Option<f64>,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub values: Option<Vec<f64>>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScanKindArg {
    Delay,
    XrayIntensity,
    Wavelength,
    Angle,
    IntensityAverage,
}

impl From<ScanKindArg> for ScanKind {
    fn from(k: ScanKindArg) -> Self {
        match k {
            ScanKindArg::Delay => ScanKind::Delay,
            ScanKindArg::XrayIntensity => ScanKind::XrayIntensity,
            ScanKindArg::Wavelength => ScanKind::Wavelength,
            ScanKindArg::Angle => ScanKind::Angle,
            ScanKindArg::IntensityAverage => ScanKind::IntensityAverage,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Corrupt one quantity to demonstrate a failing check.
    #[arg(long, value_enum, default_value = "none")]
    pub fault_inject: FaultArg,
    /// Run the convergence check from a coarse base grid.
    #[arg(long)]
    pub coarse: bool,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FaultArg {
    None,
    PartialWidth,
    Hartree,
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => EXIT_IO,
        Error::Config(_)
        | Error::InvalidParameter { .. }
        | Error::MalformedRange(_)
        | Error::OffPlateau { .. }
        | Error::Incompatible(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

impl RunArgs {
    /// Base configuration with flag overrides applied and validated.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match (&self.config, &self.preset) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                RunConfig::from_toml(&text)?
            }
            (None, Some(name)) => preset(name)?,
            (None, None) => RunConfig::default(),
        };
        if let Some(v) = &self.name {
            cfg.name = v.clone();
        }
        set(&mut cfg.xray.intensity_wcm2, self.xray_intensity);
        if self.photon_energy.is_some() {
            cfg.xray.photon_energy_ev = self.photon_energy;
        }
        set(&mut cfg.xray.sigma_fs, self.sigma);
        set(&mut cfg.xray.delay_fs, self.delay);
        set(&mut cfg.optical.wavelength_nm, self.wavelength);
        set(&mut cfg.optical.intensity_wcm2, self.optical_intensity);
        set(&mut cfg.optical.phi, self.phi);
        if self.no_optical {
            cfg.optical.enabled = false;
        }
        set(&mut cfg.grid.angles, self.angles);
        set(&mut cfg.grid.energy_step_ev, self.energy_step);
        set(&mut cfg.grid.energy_half_width_ev, self.energy_half_width);
        set(&mut cfg.grid.samples_per_cycle, self.samples_per_cycle);
        if let Some(f) = self.frame {
            cfg.grid.frame = match f {
                FrameArg::Rotating => Frame::Rotating,
                FrameArg::Lab => Frame::Lab,
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn output_root(&self, cfg: &RunConfig) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(&cfg.output.directory))
    }
}

fn set<T: Copy>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn init_workers(workers: Option<usize>) -> Result<()> {
    if let Some(n) = workers {
        if n == 0 {
            return Err(Error::invalid("workers", "must be at least 1"));
        }
        // A second initialization in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

/// `spectrum`: returns the run directory.
pub fn cmd_spectrum(args: &RunArgs) -> Result<PathBuf> {
    let clock = Instant::now();
    init_workers(args.workers)?;
    let cfg = args.resolve()?;
    let sim = Simulation::prepare(&cfg)?;
    let dir = run_directory(&args.output_root(&cfg), &cfg)?;
    let mut manifest = RunManifest::new("spectrum", &cfg);
    manifest.derived = Some(sim.derived());
    let e_ref = sim.channel_energy_ev();

    if cfg.output.trajectory {
        let p = dir.join("trajectory.csv");
        trajectory_csv(&p, &sim.trajectory)?;
        manifest.files.push(file_name(&p));
    }
    let spectrum = if cfg.grid.angles == 0 { sim.spectrum_at(&[0.0])? } else { sim.spectrum()? };
    let p = dir.join("spectrum.csv");
    spectrum_csv(&p, &spectrum)?;
    manifest.files.push(file_name(&p));

    let forward = spectrum.slice_at(0.0);
    let p = dir.join("forward.csv");
    density_csv(&p, spectrum.energies(), forward, "density_per_eV_sr")?;
    manifest.files.push(file_name(&p));
    manifest.asymmetry = Some(asymmetry(spectrum.energies(), forward, e_ref)?);

    if spectrum.grid.has_quadrature() {
        let total = angle_integrated(&spectrum)?;
        let p = dir.join("integrated.csv");
        density_csv(&p, spectrum.energies(), &total, "density_per_eV")?;
        manifest.files.push(file_name(&p));
        manifest.asymmetry_integrated = Some(asymmetry(spectrum.energies(), &total, e_ref)?);
    }
    manifest.elapsed_seconds = clock.elapsed().as_secs_f64();
    manifest.write(&dir)?;
    Ok(dir)
}

/// `scan`: returns the run directory.
pub fn cmd_scan(args: &ScanArgs) -> Result<PathBuf> {
    let clock = Instant::now();
    init_workers(args.run.workers)?;
    let mut cfg = args.run.resolve()?;
    let from_flags = args.values.is_some() || args.from.is_some() || args.to.is_some() || args.step.is_some();
    let (kind, values) = match (&cfg.scan, from_flags) {
        (_, true) => {
            let kind = args.kind.map(ScanKind::from).or(cfg.scan.as_ref().map(|s| s.kind));
            let kind = kind.ok_or_else(|| Error::Config("scan kind required".into()))?;
            (kind, parameter_values(args.values.as_deref(), args.from, args.to, args.step)?)
        }
        (Some(s), false) => {
            if let Some(k) = args.kind.map(ScanKind::from) {
                if k != s.kind {
                    return Err(Error::Config(format!("configuration scans {}, not {}", s.kind.name(), k.name())));
                }
            }
            (s.kind, s.resolve()?)
        }
        (None, false) => return Err(Error::MalformedRange("no scan values given".into())),
    };
    cfg.scan = Some(crate::config::ScanConfig { kind, values: Some(values.clone()), from: None, to: None, step: None });
    let result = run_scan(kind, &values, &cfg)?;

    let dir = run_directory(&args.run.output_root(&cfg), &cfg)?;
    let mut manifest = RunManifest::new("scan", &cfg);
    let p = dir.join("scan.csv");
    scan_csv(&p, &result)?;
    manifest.files.push(file_name(&p));
    let p = dir.join("scan_spectra.csv");
    let rows = result
        .values
        .iter()
        .zip(&result.spectra)
        .flat_map(|(&v, s)| result.energies.iter().zip(s).map(move |(&e, &d)| vec![v, e, d]));
    write_csv(&p, &["parameter", "energy_eV", "density"], rows)?;
    manifest.files.push(file_name(&p));
    manifest.scan = Some(ScanSummary { kind: kind.name().into(), unit: kind.unit().into(), values, a: result.a() });
    manifest.elapsed_seconds = clock.elapsed().as_secs_f64();
    manifest.write(&dir)?;
    Ok(dir)
}

/// `validate`: prints one line per check, returns whether all passed.
pub fn cmd_validate(args: &ValidateArgs) -> Result<bool> {
    init_workers(args.workers)?;
    let fault = match args.fault_inject {
        FaultArg::None => Fault::None,
        FaultArg::PartialWidth => Fault::PartialWidth,
        FaultArg::Hartree => Fault::Hartree,
    };
    let clock = Instant::now();
    let reports = run_validation(ValidationOptions { fault, coarse: args.coarse });
    for r in &reports {
        println!("{}", r.line());
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("{} checks, {} failed, {:.1} s", reports.len(), failed, clock.elapsed().as_secs_f64());
    Ok(failed == 0)
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let outcome = match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a).map(|dir| {
            println!("{}", dir.display());
            EXIT_OK
        }),
        Command::Scan(a) => cmd_scan(a).map(|dir| {
            println!("{}", dir.display());
            EXIT_OK
        }),
        Command::Validate(a) => cmd_validate(a).map(|ok| if ok { EXIT_OK } else { EXIT_NUMERICAL }),
        Command::Presets { action: PresetAction::List } => {
            for (name, text) in PRESETS {
                let about = text.lines().next().unwrap_or("").trim_start_matches('#').trim();
                println!("{name:<8} {about}");
            }
            Ok(EXIT_OK)
        }
        Command::Presets { action: PresetAction::Show { name } } => preset(name).map(|cfg| {
            print!("{}", cfg.to_toml());
            EXIT_OK
        }),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })
}
