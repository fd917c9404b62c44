//! X-ray driven two-level dynamics with flux-dependent decay.
//!
//! Amplitudes are stored as slowly varying envelopes `c₀, c₁` with
//! `a₀ = c₀ e^{-iE₀t}` and `a₁ = c₁ e^{-iωt}`, where `ω` is the reference
//! frequency of the frame: `E₀ + ω_X` in the rotating frame (rotating-wave
//! approximation) and `E₁` in the lab frame, which keeps the full carrier.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::atom::{BoundState, NeonModel};
use crate::error::{Error, Result};
use crate::fields::{TimeGrid, XRayPulse};
use crate::quadrature::simpson_weights;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Rotating,
    Lab,
}

/// Fixed-step RK4 settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    /// Largest allowed internal step, a.u. The output grid spacing is split
    /// into equal substeps no longer than this.
    pub step: f64,
    pub frame: Frame,
    /// Apply the x-ray ionization width σ₀J to the ground state.
    pub ground_decay: bool,
}

/// Minimum points per period of the fastest retained oscillation.
pub const POINTS_PER_PERIOD: f64 = 20.0;

impl IntegratorConfig {
    pub fn rotating(step: f64) -> Self {
        Self { step, frame: Frame::Rotating, ground_decay: true }
    }

    /// Lab frame with a step resolving twice the carrier frequency.
    pub fn lab_for(xray: &XRayPulse) -> Self {
        let period = PI / xray.omega_x;
        Self { step: period / (2.0 * POINTS_PER_PERIOD), frame: Frame::Lab, ground_decay: true }
    }
}

/// Sampled bound-state amplitudes.
#[derive(Debug, Clone)]
pub struct BoundTrajectory {
    pub grid: TimeGrid,
    pub frame: Frame,
    /// Ground-state envelope c₀.
    pub c0: Vec<Complex64>,
    /// Core-excited envelope c₁.
    pub c1: Vec<Complex64>,
    e0: f64,
    carrier: f64,
}

impl BoundTrajectory {
    pub fn len(&self) -> usize {
        self.c0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c0.is_empty()
    }

    /// Reference frequency ω with `a₁ = c₁ e^{-iωt}`.
    pub fn carrier(&self) -> f64 {
        self.carrier
    }

    pub fn a0(&self, k: usize) -> Complex64 {
        self.c0[k] * Complex64::cis(-self.e0 * self.grid.time(k))
    }

    pub fn a1(&self, k: usize) -> Complex64 {
        self.c1[k] * Complex64::cis(-self.carrier * self.grid.time(k))
    }

    pub fn ground_population(&self) -> Vec<f64> {
        self.c0.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn excited_population(&self) -> Vec<f64> {
        self.c1.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn norm(&self, k: usize) -> f64 {
        self.c0[k].norm_sqr() + self.c1[k].norm_sqr()
    }

    /// `∫ |a₁|² dt` over the grid (Simpson).
    pub fn excited_time_integral(&self) -> f64 {
        let w = simpson_weights(self.len(), self.grid.step);
        self.c1.iter().zip(&w).map(|(c, w)| c.norm_sqr() * w).sum()
    }
}

struct Drive<'a> {
    model: &'a NeonModel,
    xray: &'a XRayPulse,
    cfg: IntegratorConfig,
    phase_in: Complex64,
    detuning: f64,
}

impl Drive<'_> {
    fn rates(&self, t: f64) -> (f64, f64) {
        let flux = self.xray.flux(t);
        let g0 = if self.cfg.ground_decay { self.model.decay_rate(BoundState::Ground, flux) } else { 0.0 };
        (g0, self.model.decay_rate(BoundState::CoreExcited, flux))
    }

    fn rhs(&self, t: f64, c: [Complex64; 2]) -> [Complex64; 2] {
        let (g0, g1) = self.rates(t);
        match self.cfg.frame {
            Frame::Rotating => {
                let kappa = 0.5 * self.model.mu10 * self.xray.e0x * self.xray.envelope(t);
                [
                    -0.5 * g0 * c[0] - kappa * self.phase_in.conj() * c[1],
                    Complex64::new(-0.5 * g1, self.detuning) * c[1] + kappa * self.phase_in * c[0],
                ]
            }
            Frame::Lab => {
                let coupling = self.model.mu10 * self.xray.field(t);
                let rot = Complex64::cis(self.model.transition() * t);
                let i = Complex64::i();
                [
                    -0.5 * g0 * c[0] - i * coupling * rot.conj() * c[1],
                    -0.5 * g1 * c[1] - i * coupling * rot * c[0],
                ]
            }
        }
    }

    fn fastest_period(&self) -> f64 {
        let peak_flux = self.xray.flux(self.xray.t_m);
        let (g0, g1) = {
            let g0 = if self.cfg.ground_decay { self.model.decay_rate(BoundState::Ground, peak_flux) } else { 0.0 };
            (g0, self.model.decay_rate(BoundState::CoreExcited, peak_flux))
        };
        let rabi = self.model.rabi_frequency(self.xray.e0x);
        let mut fastest = rabi.max(self.detuning.abs()).max(g0).max(g1);
        if self.cfg.frame == Frame::Lab {
            fastest = fastest.max(self.xray.omega_x + self.model.transition());
        }
        2.0 * PI / fastest
    }
}

/// Integrate the driven two-level equations from `a₀ = 1, a₁ = 0` at the
/// first grid point, storing the solution at every grid point.
///
/// Rotating frame, with `κ(t) = μ₁₀ e0x g(t) / 2` and detuning
/// `δ = ω_X − (E₁ − E₀)`:
///
/// ```text
/// ċ₀ = −Γ₀/2 c₀ − κ e^{−iω_X t_m} c₁
/// ċ₁ = (iδ − Γ₁/2) c₁ + κ e^{iω_X t_m} c₀
/// ```
///
/// Lab frame (interaction picture, no rotating-wave approximation):
///
/// ```text
/// ċ₀ = −Γ₀/2 c₀ − i μ₁₀ ε_x(t) e^{−i(E₁−E₀)t} c₁
/// ċ₁ = −Γ₁/2 c₁ − i μ₁₀ ε_x(t) e^{i(E₁−E₀)t} c₀
/// ```
pub fn integrate_bound(
    model: &NeonModel,
    xray: &XRayPulse,
    grid: TimeGrid,
    cfg: IntegratorConfig,
) -> Result<BoundTrajectory> {
    model.validate()?;
    xray.validate()?;
    if grid.len < 2 {
        return Err(Error::invalid("time grid", "needs at least two points"));
    }
    if !(cfg.step > 0.0) {
        return Err(Error::invalid("step", "must be positive"));
    }
    let drive = Drive {
        model,
        xray,
        cfg,
        phase_in: Complex64::cis((xray.omega_x * xray.t_m).rem_euclid(2.0 * PI)),
        detuning: xray.omega_x - model.transition(),
    };
    let substeps = (grid.step / cfg.step).ceil().max(1.0) as usize;
    let h = grid.step / substeps as f64;
    let period = drive.fastest_period();
    if h > period / POINTS_PER_PERIOD {
        return Err(Error::StepTooLarge { step: h, period, required: POINTS_PER_PERIOD });
    }

    let mut c0 = Vec::with_capacity(grid.len);
    let mut c1 = Vec::with_capacity(grid.len);
    let mut state = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    c0.push(state[0]);
    c1.push(state[1]);
    // Stage times are nudged inside the step so that envelope kinks sitting on
    // grid nodes are seen from the correct side.
    let nudge = 1e-9 * h;
    for k in 1..grid.len {
        let base = grid.time(k - 1);
        for s in 0..substeps {
            let t = base + s as f64 * h;
            state = rk4_step(&drive, t, h, nudge, state);
        }
        c0.push(state[0]);
        c1.push(state[1]);
    }
    let carrier = match cfg.frame {
        Frame::Rotating => model.e0 + xray.omega_x,
        Frame::Lab => model.e1,
    };
    Ok(BoundTrajectory { grid, frame: cfg.frame, c0, c1, e0: model.e0, carrier })
}

fn rk4_step(drive: &Drive, t: f64, h: f64, nudge: f64, y: [Complex64; 2]) -> [Complex64; 2] {
    let add = |a: [Complex64; 2], b: [Complex64; 2], s: f64| [a[0] + b[0] * s, a[1] + b[1] * s];
    let k1 = drive.rhs(t + nudge, y);
    let k2 = drive.rhs(t + 0.5 * h, add(y, k1, 0.5 * h));
    let k3 = drive.rhs(t + 0.5 * h, add(y, k2, 0.5 * h));
    let k4 = drive.rhs(t + h - nudge, add(y, k3, h));
    [
        y[0] + (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) * (h / 6.0),
        y[1] + (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) * (h / 6.0),
    ]
}

/// Population that passed through the core-excited state and decayed by the
/// core-hole width: `∫ Γ₁ₛ |a₁|² dt`. Used as the excitation weight when
/// averaging over intensities.
pub fn population_transfer(traj: &BoundTrajectory, model: &NeonModel) -> f64 {
    model.gamma_1s * traj.excited_time_integral()
}
