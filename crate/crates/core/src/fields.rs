//! The two light fields: a resonant x-ray pulse and a linearly polarized
//! optical field, plus tabulated vector-potential integrals on a time grid.
//!
//! Both fields share one polarization axis. The optical vector potential is
//! `A(t) = -∫ ε_L dt'` measured from the start of the optical pulse, so an
//! electron with final (canonical) velocity `v` moves with kinetic velocity
//! `v + A(t)` while the field is on.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::units::{self, ATOMIC_INTENSITY_WCM2};

/// Temporal envelope of the x-ray field amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum XRayEnvelope {
    /// `exp(-(t - t_m)² / 2σ²)`, σ in a.u.
    Gaussian { sigma: f64 },
    /// Constant amplitude on `[t_m, t_m + duration]`, zero elsewhere.
    Square { duration: f64 },
}

/// Resonant x-ray pulse `ε_x(t) = e0x g(t) sin(ω_X (t - t_m))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XRayPulse {
    /// Peak electric field, a.u.
    pub e0x: f64,
    /// Envelope reference time (Gaussian peak, or square-pulse start), a.u.
    pub t_m: f64,
    /// Carrier frequency, a.u.
    pub omega_x: f64,
    pub envelope: XRayEnvelope,
}

impl XRayPulse {
    pub fn gaussian(e0x: f64, t_m: f64, sigma: f64, omega_x: f64) -> Result<Self> {
        let pulse = Self { e0x, t_m, omega_x, envelope: XRayEnvelope::Gaussian { sigma } };
        pulse.validate()?;
        Ok(pulse)
    }

    pub fn square(e0x: f64, t_on: f64, duration: f64, omega_x: f64) -> Result<Self> {
        let pulse = Self { e0x, t_m: t_on, omega_x, envelope: XRayEnvelope::Square { duration } };
        pulse.validate()?;
        Ok(pulse)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e0x >= 0.0) || !self.e0x.is_finite() {
            return Err(Error::invalid("e0x", "must be finite and non-negative"));
        }
        if !(self.omega_x > 0.0) {
            return Err(Error::invalid("omega_x", "must be positive"));
        }
        match self.envelope {
            XRayEnvelope::Gaussian { sigma } if !(sigma > 0.0) => {
                Err(Error::invalid("sigma", "must be positive"))
            }
            XRayEnvelope::Square { duration } if !(duration > 0.0) => {
                Err(Error::invalid("duration", "must be positive"))
            }
            _ => Ok(()),
        }
    }

    /// Envelope of the field amplitude, normalized to 1 at its maximum.
    pub fn envelope(&self, t: f64) -> f64 {
        match self.envelope {
            XRayEnvelope::Gaussian { sigma } => {
                let x = (t - self.t_m) / sigma;
                (-0.5 * x * x).exp()
            }
            XRayEnvelope::Square { duration } => {
                if t >= self.t_m && t <= self.t_m + duration {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Instantaneous electric field, a.u.
    pub fn field(&self, t: f64) -> f64 {
        self.e0x * self.envelope(t) * (self.omega_x * (t - self.t_m)).sin()
    }

    /// Cycle-averaged intensity envelope in W/cm².
    pub fn intensity_wcm2(&self, t: f64) -> f64 {
        let g = self.envelope(t);
        units::field_to_intensity(self.e0x) * g * g
    }

    /// Photon flux from the cycle-averaged envelope intensity, in photons per
    /// a.u. time per bohr².
    pub fn flux(&self, t: f64) -> f64 {
        self.intensity_wcm2(t) / ATOMIC_INTENSITY_WCM2 / self.omega_x
    }

    /// Interval outside which the envelope is negligible (Gaussian: ±6σ).
    pub fn support(&self) -> (f64, f64) {
        match self.envelope {
            XRayEnvelope::Gaussian { sigma } => (self.t_m - 6.0 * sigma, self.t_m + 6.0 * sigma),
            XRayEnvelope::Square { duration } => (self.t_m, self.t_m + duration),
        }
    }

    /// Interval used for plateau-containment checks (Gaussian: ±3σ).
    pub fn core(&self) -> (f64, f64) {
        match self.envelope {
            XRayEnvelope::Gaussian { sigma } => (self.t_m - 3.0 * sigma, self.t_m + 3.0 * sigma),
            XRayEnvelope::Square { duration } => (self.t_m, self.t_m + duration),
        }
    }

    /// Fourier bandwidth of the field amplitude envelope, a.u. (1/σ).
    pub fn bandwidth(&self) -> f64 {
        match self.envelope {
            XRayEnvelope::Gaussian { sigma } => 1.0 / sigma,
            XRayEnvelope::Square { duration } => 2.0 * PI / duration,
        }
    }
}

/// Envelope of the optical field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OpticalEnvelope {
    /// Linear turn-on, flat plateau, linear turn-off; lengths in optical cycles.
    Trapezoid { cycles_on: f64, cycles_plateau: f64, cycles_off: f64 },
    /// Switched on at `t_start` and never turned off.
    Continuous,
}

/// Optical field `ε_L(t) = f(t) e0l cos(ω_L t + φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalField {
    /// Peak electric field, a.u.
    pub e0l: f64,
    /// Angular frequency, a.u.
    pub omega_l: f64,
    /// Carrier-envelope phase, rad.
    pub phi: f64,
    /// Start of the envelope, a.u.
    pub t_start: f64,
    pub envelope: OpticalEnvelope,
}

impl OpticalField {
    /// Trapezoidal pulse with the usual 3 + 10 + 3 cycle layout.
    pub fn trapezoid(e0l: f64, omega_l: f64, phi: f64, t_start: f64) -> Result<Self> {
        Self::with_cycles(e0l, omega_l, phi, t_start, 3.0, 10.0, 3.0)
    }

    pub fn with_cycles(
        e0l: f64,
        omega_l: f64,
        phi: f64,
        t_start: f64,
        cycles_on: f64,
        cycles_plateau: f64,
        cycles_off: f64,
    ) -> Result<Self> {
        let field = Self {
            e0l,
            omega_l,
            phi,
            t_start,
            envelope: OpticalEnvelope::Trapezoid { cycles_on, cycles_plateau, cycles_off },
        };
        field.validate()?;
        Ok(field)
    }

    /// Continuous wave switched on at a node of `sin(ω_L t + φ)`, so that the
    /// vector potential is `-(e0l/ω_L) sin(ω_L t + φ)` with no offset.
    pub fn continuous(e0l: f64, omega_l: f64, phi: f64, not_after: f64) -> Result<Self> {
        // Latest t <= not_after with ω t + φ ≡ 0 (mod π).
        let k = ((omega_l * not_after + phi) / PI).floor();
        let t_start = (k * PI - phi) / omega_l;
        let field = Self { e0l, omega_l, phi, t_start, envelope: OpticalEnvelope::Continuous };
        field.validate()?;
        Ok(field)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e0l >= 0.0) || !self.e0l.is_finite() {
            return Err(Error::invalid("e0l", "must be finite and non-negative"));
        }
        if !(self.omega_l > 0.0) {
            return Err(Error::invalid("omega_l", "must be positive"));
        }
        if let OpticalEnvelope::Trapezoid { cycles_on, cycles_plateau, cycles_off } = self.envelope {
            if !(cycles_on >= 0.0 && cycles_plateau >= 0.0 && cycles_off >= 0.0) {
                return Err(Error::invalid("cycles", "cycle counts must be non-negative"));
            }
            if cycles_on + cycles_plateau + cycles_off <= 0.0 {
                return Err(Error::invalid("cycles", "pulse must last a positive number of cycles"));
            }
        }
        Ok(())
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega_l
    }

    /// Vector-potential amplitude e0l / ω_L.
    pub fn a0(&self) -> f64 {
        self.e0l / self.omega_l
    }

    /// Total duration (infinite for a continuous wave).
    pub fn duration(&self) -> f64 {
        match self.envelope {
            OpticalEnvelope::Trapezoid { cycles_on, cycles_plateau, cycles_off } => {
                (cycles_on + cycles_plateau + cycles_off) * self.period()
            }
            OpticalEnvelope::Continuous => f64::INFINITY,
        }
    }

    pub fn end(&self) -> f64 {
        self.t_start + self.duration()
    }

    /// Center of the pulse (for a continuous wave, its start).
    pub fn center(&self) -> f64 {
        match self.envelope {
            OpticalEnvelope::Trapezoid { .. } => self.t_start + 0.5 * self.duration(),
            OpticalEnvelope::Continuous => self.t_start,
        }
    }

    /// Interval on which the envelope equals one.
    pub fn plateau(&self) -> (f64, f64) {
        match self.envelope {
            OpticalEnvelope::Trapezoid { cycles_on, cycles_plateau, .. } => {
                let lo = self.t_start + cycles_on * self.period();
                (lo, lo + cycles_plateau * self.period())
            }
            OpticalEnvelope::Continuous => (self.t_start, f64::INFINITY),
        }
    }

    /// Envelope `f(t)`: zero outside the pulse, continuous everywhere.
    pub fn envelope(&self, t: f64) -> f64 {
        let s = t - self.t_start;
        if s < 0.0 {
            return 0.0;
        }
        match self.envelope {
            OpticalEnvelope::Continuous => 1.0,
            OpticalEnvelope::Trapezoid { cycles_on, cycles_plateau, cycles_off } => {
                let period = self.period();
                let on = cycles_on * period;
                let plateau_end = on + cycles_plateau * period;
                let end = plateau_end + cycles_off * period;
                if s < on {
                    s / on
                } else if s <= plateau_end {
                    1.0
                } else if s < end {
                    (end - s) / (cycles_off * period)
                } else {
                    0.0
                }
            }
        }
    }

    /// Instantaneous electric field, a.u.
    pub fn field(&self, t: f64) -> f64 {
        self.envelope(t) * self.e0l * (self.omega_l * t + self.phi).cos()
    }

    fn kinks(&self) -> Vec<f64> {
        match self.envelope {
            OpticalEnvelope::Continuous => vec![self.t_start],
            OpticalEnvelope::Trapezoid { cycles_on, cycles_plateau, cycles_off } => {
                let period = self.period();
                let a = self.t_start;
                let b = a + cycles_on * period;
                let c = b + cycles_plateau * period;
                let d = c + cycles_off * period;
                vec![a, b, c, d]
            }
        }
    }
}

/// Uniform time grid `t_k = start + k·step`, `k = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl TimeGrid {
    /// Grid covering `[start, end]` with spacing at most `max_step` and an
    /// even number of intervals (for Simpson quadrature).
    pub fn covering(start: f64, end: f64, max_step: f64) -> Result<Self> {
        if !(end > start) {
            return Err(Error::invalid("time grid", format!("end {end} must exceed start {start}")));
        }
        if !(max_step > 0.0) {
            return Err(Error::invalid("time grid", "step must be positive"));
        }
        let mut intervals = ((end - start) / max_step).ceil() as usize;
        intervals = intervals.max(2);
        if intervals % 2 == 1 {
            intervals += 1;
        }
        Ok(Self { start, step: (end - start) / intervals as f64, len: intervals + 1 })
    }

    pub fn time(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.time(self.len - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |k| self.time(k))
    }

    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-9 * self.step;
        t >= self.start - slack && t <= self.end() + slack
    }
}

/// Minimum accepted optical sampling.
pub const MIN_SAMPLES_PER_CYCLE: f64 = 50.0;
/// Sampling below which results are flagged as under-resolved.
pub const RECOMMENDED_SAMPLES_PER_CYCLE: f64 = 200.0;

/// Optical field, vector potential and its running integrals on a grid.
#[derive(Debug, Clone)]
pub struct FieldTables {
    pub grid: TimeGrid,
    pub optical: OpticalField,
    /// ε_L(t_k)
    pub field: Vec<f64>,
    /// A(t_k)
    pub a: Vec<f64>,
    /// ∫_{t_0}^{t_k} A dt
    pub cum_a: Vec<f64>,
    /// ∫_{t_0}^{t_k} A² dt
    pub cum_a2: Vec<f64>,
}

impl FieldTables {
    /// Tabulate the optical field on `grid`.
    ///
    /// `A` is integrated from the start of the optical pulse with 5-point
    /// Gauss-Legendre panels split at the envelope kinks. The running
    /// integrals of `A` and `A²` use the endpoint-corrected trapezoid rule
    /// (exact derivatives `A' = -ε_L`), so they are additive by construction
    /// and fourth-order accurate.
    pub fn build(optical: &OpticalField, grid: TimeGrid) -> Result<Self> {
        optical.validate()?;
        let samples = optical.period() / grid.step;
        if samples < MIN_SAMPLES_PER_CYCLE {
            return Err(Error::GridTooCoarse {
                samples_per_cycle: samples,
                minimum: MIN_SAMPLES_PER_CYCLE,
            });
        }
        let gl = GaussLegendre::new(5);
        let kinks = optical.kinks();
        let integrate = |lo: f64, hi: f64| -> f64 {
            let mut cuts = vec![lo];
            cuts.extend(kinks.iter().copied().filter(|&k| k > lo && k < hi));
            cuts.push(hi);
            cuts.windows(2).map(|w| gl.integrate(w[0], w[1], |t| optical.field(t))).sum()
        };

        let field: Vec<f64> = grid.times().map(|t| optical.field(t)).collect();
        let mut a = Vec::with_capacity(grid.len);
        // Offset for grids that start after the optical turn-on.
        let mut acc = 0.0;
        if grid.start > optical.t_start {
            let mut lo = optical.t_start;
            while lo < grid.start {
                let hi = (lo + grid.step).min(grid.start);
                acc -= integrate(lo, hi);
                lo = hi;
            }
        }
        a.push(acc);
        for k in 1..grid.len {
            acc -= integrate(grid.time(k - 1), grid.time(k));
            a.push(acc);
        }

        let h = grid.step;
        let mut cum_a = Vec::with_capacity(grid.len);
        let mut cum_a2 = Vec::with_capacity(grid.len);
        let (mut s1, mut s2) = (0.0, 0.0);
        cum_a.push(0.0);
        cum_a2.push(0.0);
        for k in 1..grid.len {
            let (a0, a1) = (a[k - 1], a[k]);
            let (d0, d1) = (-field[k - 1], -field[k]);
            s1 += 0.5 * h * (a0 + a1) + h * h / 12.0 * (d0 - d1);
            s2 += 0.5 * h * (a0 * a0 + a1 * a1) + h * h / 12.0 * (2.0 * a0 * d0 - 2.0 * a1 * d1);
            cum_a.push(s1);
            cum_a2.push(s2);
        }
        Ok(Self { grid, optical: *optical, field, a, cum_a, cum_a2 })
    }

    pub fn samples_per_cycle(&self) -> f64 {
        self.optical.period() / self.grid.step
    }

    /// Scale of the vector potential, e0l/ω_L.
    pub fn a_scale(&self) -> f64 {
        self.optical.a0()
    }

    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        if !self.grid.contains(t) {
            return Err(Error::OutsideTable { time: t, start: self.grid.start, end: self.grid.end() });
        }
        let x = ((t - self.grid.start) / self.grid.step).max(0.0);
        let k = (x.floor() as usize).min(self.grid.len - 2);
        Ok((k, (x - k as f64).clamp(0.0, 1.0)))
    }

    /// Cubic Hermite interpolation of a tabulated function with known derivative.
    fn hermite(&self, k: usize, s: f64, y: &[f64], dy: impl Fn(usize) -> f64) -> f64 {
        let h = self.grid.step;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * y[k] + h10 * h * dy(k) + h01 * y[k + 1] + h11 * h * dy(k + 1)
    }

    /// Vector potential at an arbitrary time inside the grid.
    pub fn a_at(&self, t: f64) -> Result<f64> {
        let (k, s) = self.locate(t)?;
        Ok(self.hermite(k, s, &self.a, |j| -self.field[j]))
    }

    /// `∫_{t_0}^{t} A dt'` at an arbitrary time inside the grid.
    pub fn cum_a_at(&self, t: f64) -> Result<f64> {
        let (k, s) = self.locate(t)?;
        Ok(self.hermite(k, s, &self.cum_a, |j| self.a[j]))
    }

    /// `∫_{t_0}^{t} A² dt'` at an arbitrary time inside the grid.
    pub fn cum_a2_at(&self, t: f64) -> Result<f64> {
        let (k, s) = self.locate(t)?;
        Ok(self.hermite(k, s, &self.cum_a2, |j| self.a[j] * self.a[j]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{fs_to_au, intensity_to_field, wavelength_to_omega};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn optical_1500() -> OpticalField {
        let e0l = intensity_to_field(1e11).unwrap();
        OpticalField::trapezoid(e0l, wavelength_to_omega(1500.0).unwrap(), 0.0, 0.0).unwrap()
    }

    #[test]
    fn xray_examples() {
        let sigma = fs_to_au(2.0);
        let p = XRayPulse::gaussian(0.5, 1000.0, sigma, 31.1634).unwrap();
        assert_eq!(p.field(1000.0), 0.0);
        assert_eq!(p.envelope(1000.0), 1.0);
        assert_relative_eq!(p.envelope(1000.0 + sigma), (-0.5f64).exp(), max_relative = 1e-15);
        let ratio = p.flux(1000.0 + 5.0 * sigma) / p.flux(1000.0);
        assert_relative_eq!(ratio, (-25.0f64).exp(), max_relative = 1e-12);
        let dark = XRayPulse::gaussian(0.0, 1000.0, sigma, 31.1634).unwrap();
        assert!((0..100).all(|k| dark.flux(900.0 + k as f64) == 0.0));
    }

    #[test]
    fn two_fs_sigma_gives_033_ev_bandwidth() {
        let p = XRayPulse::gaussian(0.1, 0.0, fs_to_au(2.0), 31.16).unwrap();
        assert_relative_eq!(units::au_to_ev(p.bandwidth()), 0.33, max_relative = 0.02);
        assert_relative_eq!(fs_to_au(2.0), 82.683, max_relative = 1e-4);
    }

    #[test]
    fn peak_ionization_width() {
        // σ₁ J_x at 1.4e16 W/cm² and 848 eV is about 2.4 meV.
        let e0x = intensity_to_field(1.4e16).unwrap();
        let p = XRayPulse::gaussian(e0x, 0.0, 80.0, units::ev_to_au(848.0)).unwrap();
        let rate = units::cm2_to_au(3.47e-20) * p.flux(0.0);
        let per_second = rate / (units::CONSTANTS.au_time_fs * 1e-15);
        assert_relative_eq!(per_second, 3.6e12, max_relative = 0.02);
        assert_relative_eq!(units::au_to_ev(rate), 2.4e-3, max_relative = 0.03);
    }

    #[test]
    fn rejects_bad_pulses() {
        assert!(XRayPulse::gaussian(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(XRayPulse::gaussian(-1.0, 0.0, 1.0, 1.0).is_err());
        assert!(XRayPulse::gaussian(1.0, 0.0, 1.0, 0.0).is_err());
        assert!(OpticalField::trapezoid(1.0, -1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn optical_examples() {
        let f = optical_1500();
        let period = f.period();
        assert_eq!(f.field(-1.0), 0.0);
        // Plateau point with ω t + φ = 0 mod 2π.
        assert_relative_eq!(f.field(5.0 * period), f.e0l, max_relative = 1e-12);
        assert_relative_eq!(f.envelope(1.5 * period), 0.5, max_relative = 1e-12);
        assert_relative_eq!(f.duration(), 16.0 * period, max_relative = 1e-15);
        assert_eq!(f.field(f.end() + 1.0), 0.0);
        let (lo, hi) = f.plateau();
        assert_relative_eq!(lo, 3.0 * period, max_relative = 1e-15);
        assert_relative_eq!(hi, 13.0 * period, max_relative = 1e-15);
    }

    #[test]
    fn envelope_is_continuous() {
        let f = optical_1500();
        for &t in &f.kinks() {
            let l = f.envelope(t - 1e-9);
            let r = f.envelope(t + 1e-9);
            assert!((l - r).abs() < 1e-9, "jump at {t}: {l} vs {r}");
        }
    }

    fn tables_for(f: &OpticalField, per_cycle: f64, tail: f64) -> FieldTables {
        let grid = TimeGrid::covering(f.t_start, f.end() + tail, f.period() / per_cycle).unwrap();
        FieldTables::build(f, grid).unwrap()
    }

    #[test]
    fn vector_potential_starts_and_ends_at_zero() {
        let f = optical_1500();
        let tab = tables_for(&f, 200.0, 500.0);
        assert_eq!(tab.a[0], 0.0);
        let end = tab.a_at(f.end()).unwrap();
        assert!(end.abs() < 1e-6 * f.a0(), "A(t_end) = {end}");
        assert!(tab.a.last().unwrap().abs() < 1e-6 * f.a0());
    }

    #[test]
    fn plateau_vector_potential_matches_closed_form() {
        let f = optical_1500();
        let tab = tables_for(&f, 200.0, 0.0);
        let (lo, hi) = f.plateau();
        let mut worst: f64 = 0.0;
        for (k, t) in tab.grid.times().enumerate() {
            if t > lo && t < hi {
                let exact = -f.a0() * (f.omega_l * t + f.phi).sin();
                worst = worst.max((tab.a[k] - exact).abs());
            }
        }
        assert!(worst < 1e-2 * f.a0(), "max deviation {worst}");
    }

    #[test]
    fn running_integrals_match_closed_form_for_cw() {
        let e0l = intensity_to_field(1e11).unwrap();
        let w = wavelength_to_omega(1500.0).unwrap();
        let f = OpticalField::continuous(e0l, w, 0.4, 0.0).unwrap();
        let grid = TimeGrid::covering(f.t_start, f.t_start + 10.0 * f.period(), f.period() / 200.0).unwrap();
        let tab = FieldTables::build(&f, grid).unwrap();
        let a0 = f.a0();
        let theta0 = w * f.t_start + f.phi;
        for k in (0..tab.grid.len).step_by(97) {
            let t = tab.grid.time(k);
            let theta = w * t + f.phi;
            let exact_a = -a0 * theta.sin();
            let exact_cum = a0 / w * (theta.cos() - theta0.cos());
            assert!((tab.a[k] - exact_a).abs() < 1e-9 * a0);
            assert!((tab.cum_a[k] - exact_cum).abs() < 1e-6 * a0 / w);
            // ∫ sin² = t/2 - sin(2θ)/(4ω)
            let s = |th: f64| th / (2.0 * w) - (2.0 * th).sin() / (4.0 * w);
            let exact_cum2 = a0 * a0 * (s(theta) - s(theta0));
            assert!((tab.cum_a2[k] - exact_cum2).abs() < 1e-6 * a0 * a0 * (t - f.t_start).max(1.0));
        }
    }

    #[test]
    fn rejects_coarse_grid() {
        let f = optical_1500();
        let grid = TimeGrid::covering(0.0, f.end(), f.period() / 40.0).unwrap();
        assert!(matches!(FieldTables::build(&f, grid), Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn interpolation_agrees_with_nodes_and_rejects_outside() {
        let f = optical_1500();
        let tab = tables_for(&f, 200.0, 0.0);
        let k = 1234;
        let t = tab.grid.time(k);
        assert_relative_eq!(tab.cum_a_at(t).unwrap(), tab.cum_a[k], max_relative = 1e-12);
        assert_relative_eq!(tab.cum_a2_at(t).unwrap(), tab.cum_a2[k], max_relative = 1e-12);
        assert!(tab.a_at(tab.grid.end() + 10.0).is_err());
        assert!(tab.cum_a_at(tab.grid.start - 10.0).is_err());
    }

    #[test]
    fn linearity_in_amplitudes() {
        let f1 = optical_1500();
        let mut f2 = f1;
        f2.e0l *= 2.0;
        let t1 = tables_for(&f1, 200.0, 0.0);
        let t2 = tables_for(&f2, 200.0, 0.0);
        for k in (0..t1.grid.len).step_by(311) {
            assert_relative_eq!(t2.field[k], 2.0 * t1.field[k], max_relative = 1e-13, epsilon = 1e-300);
            assert!((t2.a[k] - 2.0 * t1.a[k]).abs() <= 1e-12 * f2.a0());
        }
        let x = XRayPulse::gaussian(0.3, 500.0, 80.0, 31.0).unwrap();
        let mut x2 = x;
        x2.e0x *= 2.0;
        for t in [400.0, 480.0, 523.0] {
            assert_relative_eq!(x2.field(t), 2.0 * x.field(t), max_relative = 1e-14);
        }
    }

    proptest! {
        #[test]
        fn running_integrals_are_additive(i in 0usize..3201, j in 0usize..3201) {
            let f = optical_1500();
            let tab = tables_for(&f, 200.0, 0.0);
            let (lo, hi) = (i.min(j), i.max(j));
            // Composite endpoint-corrected trapezoid between the two nodes.
            let h = tab.grid.step;
            let mut direct = 0.0;
            for k in lo..hi {
                direct += 0.5 * h * (tab.a[k] + tab.a[k + 1]);
            }
            direct += h * h / 12.0 * (-tab.field[lo] + tab.field[hi]);
            let diff = tab.cum_a[hi] - tab.cum_a[lo];
            prop_assert!((diff - direct).abs() <= 1e-10 * (direct.abs() + f.a0() * h));
        }
    }
}
