//! The oracle suite run by `validate`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{analytic_amplitude, bessel_jn, default_n_max, detection_phase, i_n, CwDressing, RabiParams};
use crate::atom::{AugerChannel, BoundState, NeonModel};
use crate::bound::{integrate_bound, BoundTrajectory, IntegratorConfig};
use crate::config::RunConfig;
use crate::continuum::{ContinuumOptions, ContinuumSolver};
use crate::error::Result;
use crate::fields::{FieldTables, OpticalField, TimeGrid, XRayPulse};
use crate::observables::forward_asymmetry;
use crate::oracles::{oracle_bessel_series, oracle_in_quadrature, oracle_parseval, Metric, OracleReport};
use crate::pipeline::Simulation;
use crate::quadrature::linear_integral;
use crate::units::{ev_to_au, fs_to_au, intensity_to_field, wavelength_to_omega, CONSTANTS};

/// Deliberate corruption used to show that the norm-transfer check bites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    #[default]
    None,
    /// Partial Auger width doubled on the spectrum side only.
    PartialWidth,
    /// Spectrum converted to per-eV with a hartree of 27.0 eV.
    Hartree,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ValidationOptions {
    pub fault: Fault,
    /// Run the convergence check from a deliberately coarse base grid.
    pub coarse: bool,
}

/// Seed for the random draws of the `Iₙ` check.
pub const SEED: u64 = 0x5eed_a0e7;

/// Closed-form `Iₙ` against quadrature over random parameters.
pub fn check_in_closed_form(draws: usize) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let gamma = rng.random_range(0.002..0.05);
        let rabi = 0.5 * gamma * rng.random_range(1.05..20.0);
        let t_f = rng.random_range(50.0..1500.0);
        let alpha = rng.random_range(-0.2..0.2);
        let p = RabiParams::new(rabi, gamma, t_f).expect("underdamped draw");
        let exact = oracle_in_quadrature(&p, alpha);
        worst = worst.max((i_n(&p, alpha) - exact).norm() / exact.norm());
    }
    OracleReport::new("in-closed-form", worst, 1e-8, Metric::Relative)
}

/// Miller recurrence against the exact series on a 60×60 grid of orders
/// `−29..=30` and arguments in `[−30, 30]`.
pub fn check_bessel_series() -> OracleReport {
    let mut worst: f64 = 0.0;
    for n in -29..=30 {
        for j in 0..60 {
            let x = -30.0 + 60.0 * j as f64 / 59.0;
            let a = bessel_jn(n, x).unwrap_or(f64::NAN);
            let b = oracle_bessel_series(n, x).unwrap_or(f64::NAN);
            worst = worst.max((a - b).abs()).max(if (a - b).is_nan() { f64::INFINITY } else { 0.0 });
        }
    }
    OracleReport::new("bessel-series", worst, 1e-10, Metric::Absolute)
}

/// `Jₙ₋₁ + Jₙ₊₁ − (2n/x)Jₙ` and `J₀ + 2ΣJ₂ₖ = 1`.
pub fn check_bessel_identities() -> Vec<OracleReport> {
    let mut recurrence: f64 = 0.0;
    let mut sum_rule: f64 = 0.0;
    for j in 1..=60 {
        let x = 0.5 * j as f64;
        for n in 1..60 {
            let r = bessel_jn(n - 1, x).unwrap() + bessel_jn(n + 1, x).unwrap() - 2.0 * n as f64 / x * bessel_jn(n, x).unwrap();
            recurrence = recurrence.max(r.abs());
        }
        let s: f64 = bessel_jn(0, x).unwrap() + (1..=60).map(|k| 2.0 * bessel_jn(2 * k, x).unwrap()).sum::<f64>();
        sum_rule = sum_rule.max((s - 1.0).abs());
    }
    vec![
        OracleReport::new("bessel-recurrence", recurrence, 1e-10, Metric::Absolute),
        OracleReport::new("bessel-sum-rule", sum_rule, 1e-10, Metric::Absolute),
    ]
}

fn lossless() -> NeonModel {
    NeonModel { sigma0: 0.0, sigma1: 0.0, ..Default::default() }
}

/// Integrated `|c₁|` under a resonant square pulse against the damped Rabi
/// solution, RMS over the pulse.
pub fn check_bound_rabi() -> OracleReport {
    let m = lossless();
    let e0x = intensity_to_field(1.4e16).expect("intensity");
    let t_f = 800.0;
    let x = XRayPulse::square(e0x, 0.0, t_f, m.transition()).expect("pulse");
    let grid = TimeGrid::covering(0.0, t_f, 0.4).expect("grid");
    let traj = integrate_bound(&m, &x, grid, IntegratorConfig::rotating(0.4)).expect("integration");
    let p = RabiParams::for_field(&m, e0x, t_f).expect("underdamped");
    let sq: f64 = (0..traj.len())
        .map(|k| {
            let exact = crate::analytic::rabi_amplitude(&p, traj.grid.time(k).min(t_f)).expect("inside").norm();
            (traj.c1[k].norm() - exact).powi(2)
        })
        .sum();
    OracleReport::new("bound-vs-rabi", (sq / traj.len() as f64).sqrt(), 1e-3, Metric::Absolute)
}

fn gaussian_at(intensity: f64, t_m: f64) -> XRayPulse {
    let m = NeonModel::default();
    XRayPulse::gaussian(intensity_to_field(intensity).expect("intensity"), t_m, fs_to_au(2.0), m.transition())
        .expect("pulse")
}

/// Rotating-frame populations against a dense lab-frame re-integration that
/// keeps the counter-rotating terms.
pub fn check_lab_frame() -> OracleReport {
    let m = NeonModel::default();
    let x = gaussian_at(1.4e16, 600.0);
    let grid = TimeGrid::covering(0.0, 1200.0, 0.4).expect("grid");
    let rot = integrate_bound(&m, &x, grid, IntegratorConfig::rotating(0.4)).expect("rotating");
    let lab = integrate_bound(&m, &x, grid, IntegratorConfig::lab_for(&x)).expect("lab");
    let mut worst: f64 = 0.0;
    for k in 0..rot.len() {
        worst = worst.max((rot.a0(k).norm() - lab.a0(k).norm()).abs());
        worst = worst.max((rot.a1(k).norm() - lab.a1(k).norm()).abs());
    }
    OracleReport::new("lab-vs-rotating", worst, 1e-3, Metric::Absolute)
}

/// Largest violation of `N(t) − 1 + ∫(Γ₀|c₀|² + Γ₁|c₁|²) = 0`, with the
/// integral accumulated by Simpson panels at even nodes.
pub fn norm_flow_defect(step: f64) -> Result<f64> {
    let m = NeonModel::default();
    let x = gaussian_at(1.4e16, 600.0);
    let grid = TimeGrid::covering(0.0, 1200.0, step)?;
    let traj = integrate_bound(&m, &x, grid, IntegratorConfig::rotating(step))?;
    Ok(norm_flow_defect_of(&traj, &m, &x))
}

fn norm_flow_defect_of(traj: &BoundTrajectory, m: &NeonModel, x: &XRayPulse) -> f64 {
    let rhs: Vec<f64> = (0..traj.len())
        .map(|k| {
            let flux = x.flux(traj.grid.time(k));
            m.decay_rate(BoundState::Ground, flux) * traj.c0[k].norm_sqr()
                + m.decay_rate(BoundState::CoreExcited, flux) * traj.c1[k].norm_sqr()
        })
        .collect();
    let h = traj.grid.step;
    let mut acc = 0.0;
    let mut worst: f64 = 0.0;
    for k in (2..traj.len()).step_by(2) {
        acc += h / 3.0 * (rhs[k - 2] + 4.0 * rhs[k - 1] + rhs[k]);
        worst = worst.max((traj.norm(k) - 1.0 + acc).abs());
    }
    worst
}

/// Observed order of the norm-flow defect between steps 2 and 1 a.u.
pub fn check_norm_flow_order() -> Result<OracleReport> {
    let coarse = norm_flow_defect(2.0)?;
    let fine = norm_flow_defect(1.0)?;
    Ok(OracleReport::new("norm-flow-order", (coarse / fine).log2(), 3.5, Metric::Order))
}

/// Analytic dressed amplitude against the numerical one under a CW field
/// and a resonant square x-ray pulse, ponderomotive term off in both.
/// Returns the RMS relative difference over ±12 eV after removing one
/// global phase.
pub fn cw_square_comparison(lambda_nm: f64, theta: f64) -> Result<f64> {
    let m = lossless();
    let ch = AugerChannel::default();
    let omega_l = wavelength_to_omega(lambda_nm)?;
    let e0l = intensity_to_field(1e11)?;
    let e0x = intensity_to_field(1.4e16)?;
    let optical = OpticalField::continuous(e0l, omega_l, 0.0, 0.0)?;
    let half_period = PI / omega_l;
    let step = half_period / 200.0;
    let t_f = (fs_to_au(10.0) / step).round() * step;
    let end = ((t_f + 30.0 / m.gamma_1s) / half_period).ceil() * half_period;
    let grid = TimeGrid::covering(0.0, end, step)?;
    let tables = FieldTables::build(&optical, grid)?;
    let x = XRayPulse::square(e0x, 0.0, t_f, m.transition())?;
    let traj = integrate_bound(&m, &x, grid, IntegratorConfig::rotating(grid.step))?;
    let solver = ContinuumSolver::new(&traj, &tables, &ch, &m, ContinuumOptions { ponderomotive: false })?;

    let p = RabiParams::for_field(&m, e0x, t_f)?;
    let d = CwDressing::from_field(e0l, omega_l, 0.0);
    let centre = ch.energy(&m);
    let n_e = 1201;
    let mut num = Vec::with_capacity(n_e);
    let mut ana = Vec::with_capacity(n_e);
    for k in 0..n_e {
        let energy = centre + ev_to_au(-12.0 + 24.0 * k as f64 / (n_e - 1) as f64);
        let speed = (2.0 * energy).sqrt();
        let n_max = default_n_max(d.argument(speed, theta));
        let b = analytic_amplitude(speed, theta, &p, &d, &ch, &m, n_max)?
            * detection_phase(speed, theta, solver.detection_time(), &d, &ch);
        num.push(solver.amplitude(energy, theta)?);
        ana.push(b);
    }
    let overlap: Complex64 = num.iter().zip(&ana).map(|(a, b)| a * b.conj()).sum();
    let align = Complex64::cis(-overlap.arg());
    let diff: f64 = num.iter().zip(&ana).map(|(a, b)| (a * align - b).norm_sqr()).sum();
    let norm: f64 = ana.iter().map(|b| b.norm_sqr()).sum();
    Ok((diff / norm).sqrt())
}

pub fn check_analytic_vs_numeric() -> Result<Vec<OracleReport>> {
    [0.0, PI / 4.0]
        .iter()
        .map(|&theta| {
            let r = cw_square_comparison(800.0, theta)?;
            Ok(OracleReport::new(format!("analytic-vs-numeric θ={theta:.3}"), r, 1e-2, Metric::Relative))
        })
        .collect()
}

/// Weak undressed pulse, no ionization losses, single angle with isotropic
/// emission over ±100 eV.
pub fn parseval_config() -> RunConfig {
    let mut cfg = RunConfig::default();
    cfg.optical.enabled = false;
    cfg.xray.intensity_wcm2 = 2.4e15;
    cfg.atom.sigma0_cm2 = 0.0;
    cfg.atom.sigma1_cm2 = 0.0;
    cfg.grid.energy_half_width_ev = 100.0;
    cfg
}

pub fn check_parseval(fault: Fault) -> Result<OracleReport> {
    let sim = Simulation::prepare(&parseval_config())?;
    let mut spectrum = match fault {
        Fault::PartialWidth => {
            let channel = AugerChannel { partial_width: 2.0 * sim.channel.partial_width, ..sim.channel };
            let solver = ContinuumSolver::new(&sim.trajectory, &sim.tables, &channel, &sim.model, sim.options())?;
            crate::continuum::build_spectrum(&sim.grid_at(&[0.0])?, &solver)?
        }
        _ => sim.spectrum_at(&[0.0])?,
    };
    if fault == Fault::Hartree {
        let factor = CONSTANTS.hartree_ev / 27.0;
        spectrum.values.iter_mut().for_each(|v| *v *= factor);
    }
    Ok(oracle_parseval(&sim.trajectory, &sim.channel, &spectrum))
}

/// θ = 0 continuum norm with and without the 800 nm field over ±40 eV.
pub fn check_dressing_norm() -> Result<OracleReport> {
    let mut cfg = RunConfig::default();
    cfg.optical.wavelength_nm = 800.0;
    cfg.grid.energy_half_width_ev = 40.0;
    cfg.grid.energy_step_ev = 0.02;
    let total = |c: &RunConfig| -> Result<f64> {
        let (_, e, p) = forward_asymmetry(c)?;
        Ok(linear_integral(&e, &p, e[0], e[e.len() - 1]))
    };
    let dressed = total(&cfg)?;
    cfg.optical.enabled = false;
    let bare = total(&cfg)?;
    Ok(OracleReport::new("dressing-norm", (dressed - bare).abs() / bare, 1e-2, Metric::Relative))
}

/// θ = 0 asymmetry of the default configuration against a rerun with twice
/// the time and energy resolution.
pub fn check_grid_refinement(coarse: bool) -> Result<OracleReport> {
    let mut base = RunConfig::default();
    if coarse {
        base.grid.samples_per_cycle = 50.0;
        base.grid.energy_step_ev = 0.4;
    }
    let mut fine = base.clone();
    fine.grid.samples_per_cycle *= 2.0;
    fine.grid.energy_step_ev *= 0.5;
    let a = forward_asymmetry(&base)?.0.a;
    let b = forward_asymmetry(&fine)?.0.a;
    Ok(OracleReport::new("grid-refinement", (a - b).abs(), 1e-2, Metric::Absolute))
}

fn failed(name: &str, err: crate::error::Error) -> OracleReport {
    let mut r = OracleReport::new(name, f64::NAN, 0.0, Metric::Absolute);
    r.name = format!("{name} ({err})");
    r
}

/// Run every check in a fixed order.
pub fn run_validation(opts: ValidationOptions) -> Vec<OracleReport> {
    let mut out = vec![check_in_closed_form(100), check_bessel_series()];
    out.extend(check_bessel_identities());
    out.push(check_bound_rabi());
    out.push(check_lab_frame());
    out.push(check_norm_flow_order().unwrap_or_else(|e| failed("norm-flow-order", e)));
    match check_analytic_vs_numeric() {
        Ok(r) => out.extend(r),
        Err(e) => out.push(failed("analytic-vs-numeric", e)),
    }
    out.push(check_parseval(opts.fault).unwrap_or_else(|e| failed("parseval", e)));
    out.push(check_dressing_norm().unwrap_or_else(|e| failed("dressing-norm", e)));
    out.push(check_grid_refinement(opts.coarse).unwrap_or_else(|e| failed("grid-refinement", e)));
    out
}
