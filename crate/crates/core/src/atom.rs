//! Two-level Ne⁺ model (2p⁵ ground state, 1s⁻¹2p⁶ core-excited state) and the
//! 2s⁻²(¹S) resonant Auger channel.
//!
//! All quantities are stored in atomic units.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::p2;
use crate::units::{cm2_to_au, ev_to_au};

/// Atomic constants of the ion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeonModel {
    /// Ground-state energy.
    pub e0: f64,
    /// Core-excited state energy.
    pub e1: f64,
    /// Transition dipole moment.
    pub mu10: f64,
    /// Total width of the core hole (Auger plus radiative).
    pub gamma_1s: f64,
    /// X-ray photoionization cross section of the ground state, bohr².
    pub sigma0: f64,
    /// X-ray photoionization cross section of the core-excited state, bohr².
    pub sigma1: f64,
}

impl Default for NeonModel {
    fn default() -> Self {
        Self {
            e0: 0.0,
            e1: ev_to_au(848.0),
            mu10: 0.0573,
            gamma_1s: ev_to_au(0.27),
            sigma0: cm2_to_au(2.56e-20),
            sigma1: cm2_to_au(3.47e-20),
        }
    }
}

/// Bound states of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundState {
    Ground,
    CoreExcited,
}

impl TryFrom<usize> for BoundState {
    type Error = Error;

    fn try_from(k: usize) -> Result<Self> {
        match k {
            0 => Ok(BoundState::Ground),
            1 => Ok(BoundState::CoreExcited),
            other => Err(Error::UnknownState(other)),
        }
    }
}

impl NeonModel {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("e1", self.e1),
            ("mu10", self.mu10),
            ("gamma_1s", self.gamma_1s),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, format!("{v} must be positive")));
            }
        }
        for (name, v) in [("sigma0", self.sigma0), ("sigma1", self.sigma1)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, format!("{v} must be non-negative")));
            }
        }
        if !(self.e0 < self.e1) {
            return Err(Error::invalid("e0", "ground state must lie below the core-excited state"));
        }
        Ok(())
    }

    /// Transition frequency E₁ − E₀.
    pub fn transition(&self) -> f64 {
        self.e1 - self.e0
    }

    /// Rabi frequency μ₁₀ ε for a field amplitude ε.
    pub fn rabi_frequency(&self, field: f64) -> f64 {
        self.mu10 * field
    }

    /// Total decay rate of a state under an x-ray photon flux (photons per a.u.
    /// time per bohr²): Γ₀ = σ₀J, Γ₁ = Γ₁ₛ + σ₁J.
    pub fn decay_rate(&self, state: BoundState, flux: f64) -> f64 {
        match state {
            BoundState::Ground => self.sigma0 * flux,
            BoundState::CoreExcited => self.gamma_1s + self.sigma1 * flux,
        }
    }

    /// [`Self::decay_rate`] addressed by state index (0 ground, 1 core-excited).
    pub fn decay_rate_by_index(&self, k: usize, flux: f64) -> Result<f64> {
        if !(flux >= 0.0) {
            return Err(Error::invalid("flux", "must be non-negative"));
        }
        Ok(self.decay_rate(BoundState::try_from(k)?, flux))
    }
}

/// One resonant Auger decay channel of the core-excited state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugerChannel {
    /// Final-ion energy.
    pub e_ion: f64,
    /// Partial Auger width into this channel.
    pub partial_width: f64,
    /// Anisotropy parameter of the angular distribution.
    pub beta: f64,
    /// Overall phase of the matrix element.
    pub xi: f64,
}

impl Default for AugerChannel {
    fn default() -> Self {
        Self { e_ion: ev_to_au(100.32), partial_width: ev_to_au(0.016), beta: 0.0, xi: 0.0 }
    }
}

impl AugerChannel {
    pub fn validate(&self, model: &NeonModel) -> Result<()> {
        if !(self.partial_width > 0.0) {
            return Err(Error::invalid("partial_width", "must be positive"));
        }
        if self.partial_width >= model.gamma_1s {
            return Err(Error::invalid("partial_width", "must be smaller than the total core-hole width"));
        }
        if !(-1.0..=2.0).contains(&self.beta) {
            return Err(Error::invalid("beta", format!("{} outside [-1, 2]", self.beta)));
        }
        if !(self.e_ion < model.e1) {
            return Err(Error::invalid("e_ion", "final ion must lie below the core-excited state"));
        }
        Ok(())
    }

    /// Nominal Auger electron energy E₁ − Eᵢ⁺.
    pub fn energy(&self, model: &NeonModel) -> f64 {
        model.e1 - self.e_ion
    }

    /// Speed fixed by energy conservation ṽ²/2 + Eᵢ⁺ = E₁.
    pub fn nominal_speed(&self, model: &NeonModel) -> Result<f64> {
        let kinetic = self.energy(model);
        if !(kinetic > 0.0) {
            return Err(Error::invalid("e_ion", "channel is closed (E₁ ≤ Eᵢ⁺)"));
        }
        Ok((2.0 * kinetic).sqrt())
    }

    /// Branching ratio into this channel.
    pub fn branching_ratio(&self, model: &NeonModel) -> f64 {
        self.partial_width / model.gamma_1s
    }

    /// Auger transition amplitude γ(θ) at emission angle `theta` from the
    /// polarization axis:
    /// `e^{iξ} (4π ṽ)^{-1/2} (Γᵢ/2π)^{1/2} (1 + β P₂(cos θ))^{1/2}`.
    pub fn matrix_element(&self, model: &NeonModel, theta: f64) -> Result<Complex64> {
        let speed = self.nominal_speed(model)?;
        let radicand = 1.0 + self.beta * p2(theta.cos());
        if radicand < 0.0 {
            return Err(Error::NegativeRadicand { value: radicand });
        }
        let magnitude =
            (4.0 * PI * speed).recip().sqrt() * (self.partial_width / (2.0 * PI)).sqrt() * radicand.sqrt();
        Ok(Complex64::from_polar(magnitude, self.xi))
    }
}
