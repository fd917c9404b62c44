//! Auger-electron continuum amplitudes with laser-dressed (Volkov) phases,
//! and angle-resolved spectra built from them.
//!
//! The amplitude for final velocity `v` detected at `T` is
//!
//! ```text
//! b(v) = −iγ(θ) ∫ a₁(t) e^{−iΦ(t, T)} dt,
//! Φ(t, T) = ∫_t^T [(v + A(t'))²/2 + Eᵢ⁺] dt'
//! ```
//!
//! evaluated by Simpson quadrature over the trajectory grid, with the phase
//! read from the running integrals of `A` and `A²`. Detection happens after
//! the optical field is gone, so the canonical and kinetic velocities agree.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atom::{AugerChannel, NeonModel};
use crate::bound::BoundTrajectory;
use crate::error::{Error, Result};
use crate::fields::FieldTables;
use crate::quadrature::{simpson_weights, GaussLegendre};
use crate::units::{au_to_ev, ev_to_au, CONSTANTS};

/// Nominal energy of the 2s⁻²(¹S) channel, eV.
pub const CHANNEL_ENERGY_EV: f64 = 747.68;

/// Detection requires `|A(T)|` below this fraction of the field's `A₀`.
pub const DETECTION_TOLERANCE: f64 = 1e-6;

/// Energies and emission angles at which the spectrum is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VelocityGrid {
    /// Kinetic energies, eV, strictly increasing.
    pub energies_ev: Vec<f64>,
    /// Emission angles from the polarization axis, rad, increasing.
    pub angles: Vec<f64>,
    /// Solid-angle quadrature weights; zero for diagnostic angles.
    pub solid_angle_weights: Vec<f64>,
}

impl VelocityGrid {
    /// `centre ± half_width` in steps of at most `step` (eV), with an
    /// `n_angles`-point Gauss-Legendre rule in cos θ and, optionally, the
    /// diagnostic angles 0 and π/2.
    pub fn new(centre_ev: f64, half_width_ev: f64, step_ev: f64, n_angles: usize, diagnostics: bool) -> Result<Self> {
        let energies_ev = energy_axis(centre_ev, half_width_ev, step_ev)?;
        let mut angles: Vec<(f64, f64)> = Vec::new();
        if n_angles > 0 {
            let gl = GaussLegendre::new(n_angles);
            for (&c, &w) in gl.nodes.iter().zip(&gl.weights) {
                angles.push((c.acos(), 2.0 * PI * w));
            }
        }
        if diagnostics {
            angles.push((0.0, 0.0));
            angles.push((0.5 * PI, 0.0));
        }
        if angles.is_empty() {
            return Err(Error::invalid("angles", "grid needs at least one angle"));
        }
        angles.sort_by(|a, b| a.0.total_cmp(&b.0));
        let grid = Self {
            energies_ev,
            angles: angles.iter().map(|a| a.0).collect(),
            solid_angle_weights: angles.iter().map(|a| a.1).collect(),
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Default grid: ±12 eV around the channel at 0.01 eV, 64 angles plus
    /// diagnostics.
    pub fn standard() -> Self {
        Self::new(CHANNEL_ENERGY_EV, 12.0, 0.01, 64, true).expect("default grid is valid")
    }

    /// Energies around `centre_ev` at the given angles, without angular weights.
    pub fn at_angles(centre_ev: f64, half_width_ev: f64, step_ev: f64, angles: &[f64]) -> Result<Self> {
        let grid = Self {
            energies_ev: energy_axis(centre_ev, half_width_ev, step_ev)?,
            angles: angles.to_vec(),
            solid_angle_weights: vec![0.0; angles.len()],
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.energies_ev.is_empty() || self.angles.is_empty() {
            return Err(Error::invalid("velocity grid", "needs energies and angles"));
        }
        if !self.energies_ev.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::invalid("energies", "must be strictly increasing"));
        }
        if !(self.energies_ev[0] > 0.0) {
            return Err(Error::invalid("energies", "must be positive"));
        }
        if self.angles.iter().any(|&a| !(0.0..=PI).contains(&a)) {
            return Err(Error::invalid("angles", "must lie in [0, π]"));
        }
        if self.solid_angle_weights.len() != self.angles.len() {
            return Err(Error::invalid("angles", "one weight per angle"));
        }
        Ok(())
    }

    pub fn has_quadrature(&self) -> bool {
        self.solid_angle_weights.iter().any(|&w| w > 0.0)
    }

    /// Index of the angle closest to `theta`.
    pub fn angle_index(&self, theta: f64) -> usize {
        let mut best = 0;
        for (k, &a) in self.angles.iter().enumerate() {
            if (a - theta).abs() < (self.angles[best] - theta).abs() {
                best = k;
            }
        }
        best
    }
}

fn energy_axis(centre: f64, half_width: f64, step: f64) -> Result<Vec<f64>> {
    if !(half_width > 0.0) || !(step > 0.0) {
        return Err(Error::invalid("energy window", "width and step must be positive"));
    }
    let half = (half_width / step).ceil() as i64;
    let h = half_width / half as f64;
    Ok((-half..=half).map(|k| centre + k as f64 * h).collect())
}

/// Angle-resolved spectrum, probability per eV per steradian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumGrid {
    pub grid: VelocityGrid,
    /// Row-major by angle: `values[a * n_energies + e]`.
    pub values: Vec<f64>,
}

impl SpectrumGrid {
    pub fn energies(&self) -> &[f64] {
        &self.grid.energies_ev
    }

    /// Spectrum at the `k`-th angle.
    pub fn slice(&self, k: usize) -> &[f64] {
        let n = self.grid.energies_ev.len();
        &self.values[k * n..(k + 1) * n]
    }

    /// Spectrum at the stored angle nearest `theta`.
    pub fn slice_at(&self, theta: f64) -> &[f64] {
        self.slice(self.grid.angle_index(theta))
    }
}

/// `(v²/2 + Eᵢ⁺)(t₂ − t₁) + v∥[∫A]_{t₁}^{t₂} + ½[∫A²]_{t₁}^{t₂}`.
pub fn volkov_phase(vpar: f64, vmag: f64, t1: f64, t2: f64, tables: &FieldTables, e_ion: f64) -> Result<f64> {
    if t1 > t2 {
        return Err(Error::invalid("t1", "must not exceed t2"));
    }
    let da = tables.cum_a_at(t2)? - tables.cum_a_at(t1)?;
    let da2 = tables.cum_a2_at(t2)? - tables.cum_a2_at(t1)?;
    Ok((0.5 * vmag * vmag + e_ion) * (t2 - t1) + vpar * da + 0.5 * da2)
}

/// Options for the continuum quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuumOptions {
    /// Keep the `½∫A²` term of the phase.
    pub ponderomotive: bool,
}

impl Default for ContinuumOptions {
    fn default() -> Self {
        Self { ponderomotive: true }
    }
}

/// Precomputed quadrature for continuum amplitudes on one trajectory.
#[derive(Debug, Clone)]
pub struct ContinuumSolver {
    model: NeonModel,
    channel: AugerChannel,
    /// `w_k c₁(t_k)` on the retained part of the grid.
    weighted: Vec<Complex64>,
    /// `t_k − T`
    tau: Vec<f64>,
    /// `∫A` from `t_k` back from `T`: `cum_a(t_k) − cum_a(T)`.
    cum_a: Vec<f64>,
    /// Same for `∫A²`, halved; zero when the term is disabled.
    half_cum_a2: Vec<f64>,
    /// Trajectory carrier `ω` with `a₁ = c₁ e^{−iωt}`.
    carrier: f64,
    /// `e^{−iωT}`
    carrier_phase: Complex64,
    detection: f64,
}

impl ContinuumSolver {
    pub fn new(
        traj: &BoundTrajectory,
        tables: &FieldTables,
        channel: &AugerChannel,
        model: &NeonModel,
        opts: ContinuumOptions,
    ) -> Result<Self> {
        model.validate()?;
        channel.validate(model)?;
        if traj.grid != tables.grid {
            return Err(Error::Incompatible("trajectory and field tables use different grids".into()));
        }
        let last = traj.len() - 1;
        let t_end = traj.grid.time(last);
        let a_end = tables.a[last];
        if a_end.abs() > DETECTION_TOLERANCE * tables.a_scale() {
            return Err(Error::DetectionInsidePulse { time: t_end, vector_potential: a_end });
        }
        let w = simpson_weights(traj.len(), traj.grid.step);
        // Leading samples before the core-excited state is populated add nothing.
        let peak = traj.c1.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let first = traj.c1.iter().position(|c| c.norm() > 1e-14 * peak).unwrap_or(last);
        let range = first..traj.len();
        let weighted = range.clone().map(|k| traj.c1[k] * w[k]).collect();
        let tau = range.clone().map(|k| traj.grid.time(k) - t_end).collect();
        let cum_a = range.clone().map(|k| tables.cum_a[k] - tables.cum_a[last]).collect();
        let half_cum_a2 = range
            .map(|k| if opts.ponderomotive { 0.5 * (tables.cum_a2[k] - tables.cum_a2[last]) } else { 0.0 })
            .collect();
        Ok(Self {
            model: *model,
            channel: *channel,
            weighted,
            tau,
            cum_a,
            half_cum_a2,
            carrier: traj.carrier(),
            carrier_phase: Complex64::cis(-(traj.carrier() * t_end).rem_euclid(2.0 * PI)),
            detection: t_end,
        })
    }

    /// Detection time `T`.
    pub fn detection_time(&self) -> f64 {
        self.detection
    }

    /// Amplitude at kinetic energy `energy` (a.u.) and angle `theta`.
    pub fn amplitude(&self, energy: f64, theta: f64) -> Result<Complex64> {
        if !(energy > 0.0) {
            return Err(Error::invalid("energy", "must be positive"));
        }
        let gamma = self.channel.matrix_element(&self.model, theta)?;
        Ok(gamma * self.reduced(energy, theta.cos()))
    }

    /// `−i ∫ a₁ e^{−iΦ} dt` without the matrix element.
    fn reduced(&self, energy: f64, cos_theta: f64) -> Complex64 {
        let speed = (2.0 * energy).sqrt();
        let vpar = speed * cos_theta;
        let eps = energy + self.channel.e_ion - self.carrier;
        let mut re = 0.0;
        let mut im = 0.0;
        for k in 0..self.weighted.len() {
            let phase = eps * self.tau[k] + vpar * self.cum_a[k] + self.half_cum_a2[k];
            let (s, c) = phase.sin_cos();
            let w = self.weighted[k];
            re += w.re * c - w.im * s;
            im += w.re * s + w.im * c;
        }
        -Complex64::i() * self.carrier_phase * Complex64::new(re, im)
    }
}

/// Single continuum amplitude (see [`ContinuumSolver`] for repeated use).
pub fn continuum_amplitude(
    energy_ev: f64,
    theta: f64,
    traj: &BoundTrajectory,
    tables: &FieldTables,
    channel: &AugerChannel,
    model: &NeonModel,
    opts: ContinuumOptions,
) -> Result<Complex64> {
    ContinuumSolver::new(traj, tables, channel, model, opts)?.amplitude(ev_to_au(energy_ev), theta)
}

/// `P(E, θ) = |b|² v`, per eV per steradian, at every grid point.
pub fn build_spectrum(grid: &VelocityGrid, solver: &ContinuumSolver) -> Result<SpectrumGrid> {
    grid.validate()?;
    let n_e = grid.energies_ev.len();
    let gammas: Vec<f64> = grid
        .angles
        .iter()
        .map(|&th| solver.channel.matrix_element(&solver.model, th).map(|g| g.norm_sqr()))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = (0..n_e * grid.angles.len())
        .into_par_iter()
        .map(|idx| {
            let (a, e) = (idx / n_e, idx % n_e);
            let energy = ev_to_au(grid.energies_ev[e]);
            let b = solver.reduced(energy, grid.angles[a].cos());
            gammas[a] * b.norm_sqr() * (2.0 * energy).sqrt() / CONSTANTS.hartree_ev
        })
        .collect();
    Ok(SpectrumGrid { grid: grid.clone(), values })
}

/// `P(E) = ∫ P(E, θ) dΩ` with the grid's angular weights.
pub fn angle_integrated(s: &SpectrumGrid) -> Result<Vec<f64>> {
    if !s.grid.has_quadrature() {
        return Err(Error::invalid("spectrum", "grid has no quadrature angles"));
    }
    let n = s.energies().len();
    let mut out = vec![0.0; n];
    for (k, &w) in s.grid.solid_angle_weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for (o, v) in out.iter_mut().zip(s.slice(k)) {
            *o += w * v;
        }
    }
    Ok(out)
}

/// Sideband index `round((e − 747.68 eV) / ω_L)`.
pub fn sideband_index(e_ev: f64, omega_l: f64) -> i64 {
    sideband_index_about(e_ev, omega_l, CHANNEL_ENERGY_EV)
}

/// Sideband index about an arbitrary line centre.
pub fn sideband_index_about(e_ev: f64, omega_l: f64, centre_ev: f64) -> i64 {
    ((e_ev - centre_ev) / au_to_ev(omega_l)).round() as i64
}
