//! Conversions between laboratory units and atomic units.
//!
//! Everything inside the library runs in atomic units; these helpers are only
//! used where parameters enter or results leave.

use crate::error::{Error, Result};

/// Conversion constants between laboratory and atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// eV per hartree.
    pub hartree_ev: f64,
    /// fs per atomic unit of time.
    pub au_time_fs: f64,
    /// W/cm² carried by a field of amplitude 1 a.u.
    pub au_intensity_wcm2: f64,
    /// nm · a.u. product relating wavelength and photon energy.
    pub nm_au_energy_product: f64,
    /// cm² per bohr².
    pub bohr_cm2: f64,
}

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hartree_ev: 27.211386,
    au_time_fs: 0.02418884,
    au_intensity_wcm2: 3.50945e16,
    nm_au_energy_product: 45.5634,
    bohr_cm2: 2.80028e-17,
};

/// W/cm² per atomic unit of intensity (energy per unit time per unit area).
///
/// A field of amplitude 1 a.u. carries a cycle-averaged intensity of
/// c/(8π) ≈ 5.4525 atomic intensity units.
pub const ATOMIC_INTENSITY_WCM2: f64 = 6.436409e15;

/// Speed of light in nm/fs.
pub const SPEED_OF_LIGHT_NM_FS: f64 = 299.792458;

pub fn ev_to_au(e: f64) -> f64 {
    e / CONSTANTS.hartree_ev
}

pub fn au_to_ev(e: f64) -> f64 {
    e * CONSTANTS.hartree_ev
}

pub fn fs_to_au(t: f64) -> f64 {
    t / CONSTANTS.au_time_fs
}

pub fn au_to_fs(t: f64) -> f64 {
    t * CONSTANTS.au_time_fs
}

pub fn cm2_to_au(area: f64) -> f64 {
    area / CONSTANTS.bohr_cm2
}

pub fn au_to_cm2(area: f64) -> f64 {
    area * CONSTANTS.bohr_cm2
}

/// Peak electric field (a.u.) of a linearly polarized pulse of intensity `i` W/cm².
pub fn intensity_to_field(i: f64) -> Result<f64> {
    if !(i >= 0.0) || !i.is_finite() {
        return Err(Error::invalid("intensity", format!("{i} W/cm² must be finite and non-negative")));
    }
    Ok((i / CONSTANTS.au_intensity_wcm2).sqrt())
}

/// Inverse of [`intensity_to_field`].
pub fn field_to_intensity(e: f64) -> f64 {
    e * e * CONSTANTS.au_intensity_wcm2
}

/// Angular frequency (a.u.) of light with wavelength `l` nm.
pub fn wavelength_to_omega(l: f64) -> Result<f64> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::invalid("wavelength", format!("{l} nm must be positive")));
    }
    Ok(CONSTANTS.nm_au_energy_product / l)
}

/// Inverse of [`wavelength_to_omega`].
pub fn omega_to_wavelength(omega: f64) -> f64 {
    CONSTANTS.nm_au_energy_product / omega
}

/// Optical period in fs for a wavelength in nm.
pub fn optical_period_fs(l: f64) -> f64 {
    l / SPEED_OF_LIGHT_NM_FS
}
