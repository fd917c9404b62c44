//! From a [`RunConfig`] to fields, bound dynamics and spectra.
//!
//! Time layout: the optical pulse starts at `t = 0` with carrier
//! `cos(ω_L t + φ)`, so for the default whole-cycle trapezoid its centre sits
//! on a field crest when φ = 0. The x-ray peak is placed at the optical
//! centre plus the delay. The grid runs from the earlier of the pulse starts
//! to the end of the optical pulse or of the free decay after the x rays,
//! whichever is later, and spectra are
//! detected at its last point, where the vector potential has returned to
//! zero.

use std::f64::consts::PI;

use serde::Serialize;

use crate::atom::{AugerChannel, NeonModel};
use crate::bound::{integrate_bound, BoundTrajectory, Frame, IntegratorConfig};
use crate::config::RunConfig;
use crate::continuum::{build_spectrum, ContinuumOptions, ContinuumSolver, SpectrumGrid, VelocityGrid};
use crate::error::{Error, Result};
use crate::fields::{FieldTables, OpticalField, TimeGrid, XRayPulse};
use crate::units::{au_to_ev, au_to_fs, cm2_to_au, ev_to_au, fs_to_au, intensity_to_field, wavelength_to_omega};

/// Everything needed to evaluate spectra for one configuration.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub config: RunConfig,
    pub model: NeonModel,
    pub channel: AugerChannel,
    pub xray: XRayPulse,
    /// Zero amplitude when the optical field is disabled.
    pub optical: OpticalField,
    pub tables: FieldTables,
    pub trajectory: BoundTrajectory,
}

/// Derived quantities reported alongside results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Derived {
    /// Peak Rabi frequency Ω_x, a.u.
    pub rabi_frequency: f64,
    /// Generalized Rabi frequency Ω₁₀, a.u. (absent when overdamped).
    pub generalized_rabi_frequency: Option<f64>,
    /// Optical vector-potential amplitude A₀, a.u.
    pub a0: f64,
    /// Optical angular frequency, a.u.
    pub omega_l: f64,
    /// Bessel argument v A₀/ω_L at the channel energy and θ = 0.
    pub bessel_argument: f64,
    pub channel_energy_ev: f64,
    pub time_step: f64,
    pub time_points: usize,
    pub x_ray_peak_fs: f64,
    pub detection_time_fs: f64,
}

impl Simulation {
    pub fn model_from(cfg: &RunConfig) -> (NeonModel, AugerChannel) {
        let a = &cfg.atom;
        let model = NeonModel {
            e0: ev_to_au(a.e0_ev),
            e1: ev_to_au(a.e1_ev),
            mu10: a.mu10,
            gamma_1s: ev_to_au(a.gamma_1s_ev),
            sigma0: cm2_to_au(a.sigma0_cm2),
            sigma1: cm2_to_au(a.sigma1_cm2),
        };
        let channel = AugerChannel {
            e_ion: ev_to_au(a.e_ion_ev),
            partial_width: ev_to_au(a.partial_width_ev),
            beta: a.beta,
            xi: a.xi,
        };
        (model, channel)
    }

    pub fn prepare(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let (model, channel) = Self::model_from(cfg);
        model.validate()?;
        channel.validate(&model)?;

        let omega_l = wavelength_to_omega(cfg.optical.wavelength_nm)?;
        let e0l = if cfg.dressed() { intensity_to_field(cfg.optical.intensity_wcm2)? } else { 0.0 };
        let o = &cfg.optical;
        let optical = OpticalField::with_cycles(e0l, omega_l, o.phi, 0.0, o.cycles_on, o.cycles_plateau, o.cycles_off)?;

        let sigma = fs_to_au(cfg.xray.sigma_fs);
        let omega_x = match cfg.xray.photon_energy_ev {
            Some(e) => ev_to_au(e),
            None => model.transition(),
        };
        let e0x = intensity_to_field(cfg.xray.intensity_wcm2)?;
        let t_m = optical.center() + fs_to_au(cfg.xray.delay_fs);
        let xray = XRayPulse::gaussian(e0x, t_m, sigma, omega_x)?;

        if cfg.dressed() {
            let (lo, hi) = xray.core();
            let (p_lo, p_hi) = optical.plateau();
            if lo < p_lo || hi > p_hi {
                return Err(Error::OffPlateau {
                    lo: au_to_fs(lo),
                    hi: au_to_fs(hi),
                    plateau_lo: au_to_fs(p_lo),
                    plateau_hi: au_to_fs(p_hi),
                });
            }
        }

        let mut scale = sigma;
        if cfg.dressed() {
            scale = scale.min(optical.period());
        }
        let rabi = model.rabi_frequency(e0x);
        if rabi > 0.0 {
            scale = scale.min(2.0 * PI / rabi);
        }
        let step = scale / cfg.grid.samples_per_cycle;
        let (x_lo, x_hi) = xray.support();
        let start = x_lo.min(optical.t_start);
        let end = (x_hi + cfg.grid.tail_lifetimes / model.gamma_1s).max(optical.end());
        let grid = TimeGrid::covering(start, end, step)?;
        let tables = FieldTables::build(&optical, grid)?;

        let integrator = match cfg.grid.frame {
            Frame::Rotating => IntegratorConfig::rotating(grid.step),
            Frame::Lab => IntegratorConfig::lab_for(&xray),
        };
        let integrator = IntegratorConfig { ground_decay: cfg.atom.ground_decay, ..integrator };
        let trajectory = integrate_bound(&model, &xray, grid, integrator)?;

        Ok(Self { config: cfg.clone(), model, channel, xray, optical, tables, trajectory })
    }

    pub fn channel_energy_ev(&self) -> f64 {
        au_to_ev(self.channel.energy(&self.model))
    }

    pub fn options(&self) -> ContinuumOptions {
        ContinuumOptions { ponderomotive: self.config.grid.ponderomotive }
    }

    pub fn solver(&self) -> Result<ContinuumSolver> {
        ContinuumSolver::new(&self.trajectory, &self.tables, &self.channel, &self.model, self.options())
    }

    /// Angular and energy grid from the configuration.
    pub fn velocity_grid(&self) -> Result<VelocityGrid> {
        let g = &self.config.grid;
        VelocityGrid::new(self.channel_energy_ev(), g.energy_half_width_ev, g.energy_step_ev, g.angles, g.diagnostic_angles)
    }

    /// Energy grid from the configuration at the given angles.
    pub fn grid_at(&self, angles: &[f64]) -> Result<VelocityGrid> {
        let g = &self.config.grid;
        VelocityGrid::at_angles(self.channel_energy_ev(), g.energy_half_width_ev, g.energy_step_ev, angles)
    }

    /// Full angle-resolved spectrum.
    pub fn spectrum(&self) -> Result<SpectrumGrid> {
        build_spectrum(&self.velocity_grid()?, &self.solver()?)
    }

    pub fn spectrum_at(&self, angles: &[f64]) -> Result<SpectrumGrid> {
        build_spectrum(&self.grid_at(angles)?, &self.solver()?)
    }

    pub fn derived(&self) -> Derived {
        let rabi = self.model.rabi_frequency(self.xray.e0x);
        let half_gamma = 0.5 * self.model.gamma_1s;
        let speed = self.channel.nominal_speed(&self.model).unwrap_or(f64::NAN);
        let grid = self.trajectory.grid;
        Derived {
            rabi_frequency: rabi,
            generalized_rabi_frequency: (rabi > half_gamma).then(|| (rabi * rabi - half_gamma * half_gamma).sqrt()),
            a0: self.optical.a0(),
            omega_l: self.optical.omega_l,
            bessel_argument: speed * self.optical.a0() / self.optical.omega_l,
            channel_energy_ev: self.channel_energy_ev(),
            time_step: grid.step,
            time_points: grid.len,
            x_ray_peak_fs: au_to_fs(self.xray.t_m),
            detection_time_fs: au_to_fs(grid.end()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_layout() {
        let sim = Simulation::prepare(&RunConfig::default()).unwrap();
        // Optical crest at the x-ray peak for zero delay.
        assert_relative_eq!(sim.optical.field(sim.xray.t_m), sim.optical.e0l, max_relative = 1e-12);
        assert!(sim.tables.a[sim.tables.a.len() - 1].abs() < 1e-6 * sim.optical.a0());
        let d = sim.derived();
        assert_relative_eq!(d.bessel_argument, 13.6, max_relative = 0.01);
        assert_relative_eq!(d.channel_energy_ev, 747.68, max_relative = 1e-12);
        assert!(d.time_step < 0.45);
    }

    #[test]
    fn off_plateau_delay_is_rejected() {
        let mut cfg = RunConfig::default();
        cfg.xray.delay_fs = 20.0;
        assert!(matches!(Simulation::prepare(&cfg), Err(Error::OffPlateau { .. })));
        cfg.optical.enabled = false;
        assert!(Simulation::prepare(&cfg).is_ok());
    }

    #[test]
    fn undressed_run_has_no_vector_potential() {
        let mut cfg = RunConfig::default();
        cfg.optical.enabled = false;
        let sim = Simulation::prepare(&cfg).unwrap();
        assert!(sim.tables.a.iter().all(|&a| a == 0.0));
        assert_eq!(sim.derived().bessel_argument, 0.0);
    }
}
