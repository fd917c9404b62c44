//! Closed-form model for a square x-ray pulse in a continuous-wave optical
//! field, with the vector potential `A(t) = −A₀ sin(ω_L t + φ)`.
//!
//! The core-excited amplitude inside the pulse is the damped Rabi solution
//! `c₁(t) = i (Ω_x/Ω₁₀) e^{−Γ₁t/4} sin(Ω₁₀t/2)`; after the pulse it decays
//! freely. Dressing the continuum expands the Volkov phase in Bessel
//! functions, giving `b = −iγ Σₙ iⁿ Jₙ(z) e^{inφ} Iₙ` with
//! `z = v cos θ A₀ / ω_L`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::atom::{AugerChannel, NeonModel};
use crate::error::{Error, Result};

/// Largest supported Bessel order.
pub const BESSEL_MAX_ORDER: i64 = 200;
/// Largest supported Bessel argument.
pub const BESSEL_MAX_ARGUMENT: f64 = 500.0;
/// Bessel weights beyond the truncation order must be below this.
pub const TRUNCATION_TOLERANCE: f64 = 1e-8;

/// `J_n(x)` for `n = 0..=n_max` and `x ≥ 0` by Miller's downward recurrence,
/// normalized with `J₀ + 2 Σ J₂ₖ = 1`.
fn miller(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if x < 1e-5 {
        // Two series terms are exact to double precision here.
        let half = 0.5 * x;
        let mut lead = 1.0;
        for (n, slot) in out.iter_mut().enumerate() {
            if n > 0 {
                lead *= half / n as f64;
            }
            *slot = lead * (1.0 - half * half / (n as f64 + 1.0));
        }
        return out;
    }
    let top = (n_max as f64).max(x);
    let mut start = (top + 20.0 + (160.0 * top).sqrt()).ceil() as usize;
    start += start % 2;
    let (mut above, mut here) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        // `here` holds J_k, compute J_{k-1}.
        let below = 2.0 * k as f64 / x * here - above;
        above = here;
        here = below;
        let order = k - 1;
        if order <= n_max {
            out[order] = here;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * here;
        }
        if here.abs() > 1e250 {
            here *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut().skip(order) {
                *v *= 1e-250;
            }
        }
    }
    norm += here;
    for v in &mut out {
        *v /= norm;
    }
    out
}

fn check_bessel_domain(order: i64, x: f64) -> Result<()> {
    if order.abs() > BESSEL_MAX_ORDER || !(x.abs() <= BESSEL_MAX_ARGUMENT) {
        return Err(Error::BesselDomain { order, argument: x });
    }
    Ok(())
}

/// Bessel function of the first kind `J_n(x)`.
pub fn bessel_jn(n: i64, x: f64) -> Result<f64> {
    check_bessel_domain(n, x)?;
    let m = n.unsigned_abs() as usize;
    let value = miller(m, x.abs())[m];
    // J₋ₙ = (−1)ⁿ Jₙ and Jₙ(−x) = (−1)ⁿ Jₙ(x)
    let flips = (n < 0) as u32 + (x < 0.0) as u32;
    Ok(if m % 2 == 1 && flips == 1 { -value } else { value })
}

/// `J_n(x)` for `n = −n_max..=n_max`, indexed by `n + n_max`.
pub fn bessel_j_all(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_bessel_domain(n_max as i64, x)?;
    let pos = miller(n_max, x.abs());
    let sign = |n: usize| if n % 2 == 1 && x < 0.0 { -1.0 } else { 1.0 };
    let mut all = Vec::with_capacity(2 * n_max + 1);
    for n in (1..=n_max).rev() {
        let parity = if n % 2 == 1 { -1.0 } else { 1.0 };
        all.push(parity * sign(n) * pos[n]);
    }
    for (n, v) in pos.iter().enumerate() {
        all.push(sign(n) * v);
    }
    Ok(all)
}

/// Parameters of the resonant damped Rabi solution under a square pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RabiParams {
    /// Ω_x = μ₁₀ ε₀ₓ
    pub omega_x_rabi: f64,
    /// Ω₁₀ = √(Ω_x² − (Γ₁/2)²)
    pub omega_10: f64,
    pub gamma1: f64,
    /// Pulse duration.
    pub t_f: f64,
}

impl RabiParams {
    pub fn new(omega_x_rabi: f64, gamma1: f64, t_f: f64) -> Result<Self> {
        if !(gamma1 > 0.0) {
            return Err(Error::invalid("gamma1", "must be positive"));
        }
        if !(t_f > 0.0) {
            return Err(Error::invalid("t_f", "must be positive"));
        }
        if !(omega_x_rabi > 0.5 * gamma1) {
            return Err(Error::Overdamped { rabi: omega_x_rabi, half_gamma: 0.5 * gamma1 });
        }
        let omega_10 = (omega_x_rabi * omega_x_rabi - 0.25 * gamma1 * gamma1).sqrt();
        Ok(Self { omega_x_rabi, omega_10, gamma1, t_f })
    }

    /// Parameters for a field amplitude `e0x` driving `model` without
    /// ionization losses.
    pub fn for_field(model: &NeonModel, e0x: f64, t_f: f64) -> Result<Self> {
        Self::new(model.rabi_frequency(e0x), model.gamma_1s, t_f)
    }

    fn ratio(&self) -> f64 {
        self.omega_x_rabi / self.omega_10
    }
}

/// `c₁(t)` inside the pulse.
pub fn rabi_amplitude(p: &RabiParams, t: f64) -> Result<Complex64> {
    if !(0.0..=p.t_f).contains(&t) {
        return Err(Error::invalid("t", format!("{t} outside the pulse [0, {}]", p.t_f)));
    }
    let magnitude = p.ratio() * (-0.25 * p.gamma1 * t).exp() * (0.5 * p.omega_10 * t).sin();
    Ok(Complex64::new(0.0, magnitude))
}

/// Continuous-wave dressing `A(t) = −A₀ sin(ω_L t + φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CwDressing {
    pub a0: f64,
    pub omega_l: f64,
    pub phi: f64,
}

impl CwDressing {
    /// From the field amplitude, using ε₀ₗ = ω_L A₀.
    pub fn from_field(e0l: f64, omega_l: f64, phi: f64) -> Self {
        Self { a0: e0l / omega_l, omega_l, phi }
    }

    /// Bessel argument `v cos θ A₀ / ω_L`.
    pub fn argument(&self, speed: f64, theta: f64) -> f64 {
        speed * theta.cos() * self.a0 / self.omega_l
    }
}

/// Detuning of sideband `n`: `α_n = v²/2 + Eᵢ⁺ − E₁ + nω_L`.
pub fn alpha_n(speed: f64, ch: &AugerChannel, model: &NeonModel, omega_l: f64, n: i64) -> f64 {
    0.5 * speed * speed + ch.e_ion - model.e1 + n as f64 * omega_l
}

/// `Iₙ = ∫₀^∞ c₁(t) e^{iαt} dt` with the pulse on over `[0, t_f]`, split as
/// the in-pulse part plus the free decay afterwards.
pub fn i_n(p: &RabiParams, alpha: f64) -> Complex64 {
    let i = Complex64::i();
    let g = p.gamma1;
    let tf = p.t_f;
    let b = 0.5 * p.omega_10;
    let a = Complex64::new(-0.25 * g, alpha);
    let shifted = Complex64::new(alpha, 0.25 * g);
    let denom = (shifted - b) * (shifted + b);
    let bt = b * tf;
    let inside = ((a * tf).exp() * (b * bt.cos() + Complex64::new(0.25 * g, -alpha) * bt.sin()) - b) / denom;
    let first = i * p.ratio() * inside;
    let second = -p.ratio() * (-0.25 * g * tf).exp() * bt.sin() * Complex64::cis(alpha * tf)
        / Complex64::new(alpha, 0.5 * g);
    first + second
}

/// Default truncation `ceil(|z|) + 20`.
pub fn default_n_max(z: f64) -> usize {
    z.abs().ceil() as usize + 20
}

/// Dressed continuum amplitude without the detection phase (see
/// [`detection_phase`]), with the sum truncated at `|n| ≤ n_max`.
pub fn analytic_amplitude(
    speed: f64,
    theta: f64,
    p: &RabiParams,
    d: &CwDressing,
    ch: &AugerChannel,
    model: &NeonModel,
    n_max: usize,
) -> Result<Complex64> {
    let z = d.argument(speed, theta);
    let j = bessel_j_all(n_max + 1, z)?;
    let tail = j[0].abs().max(j[2 * n_max + 2].abs());
    if tail >= TRUNCATION_TOLERANCE {
        return Err(Error::Truncation { n_max, required: default_n_max(z) });
    }
    let gamma = ch.matrix_element(model, theta)?;
    let mut sum = Complex64::new(0.0, 0.0);
    let n_max = n_max as i64;
    for n in -n_max..=n_max {
        sum += term(n, j[(n + n_max + 1) as usize], speed, p, d, ch, model);
    }
    Ok(-Complex64::i() * gamma * sum)
}

fn term(n: i64, jn: f64, speed: f64, p: &RabiParams, d: &CwDressing, ch: &AugerChannel, model: &NeonModel) -> Complex64 {
    let alpha = alpha_n(speed, ch, model, d.omega_l, n);
    Complex64::i().powi(n.rem_euclid(4) as i32) * jn * Complex64::cis(n as f64 * d.phi) * i_n(p, alpha)
}

/// Phase picked up between the end of the sum and a detection time `t_d` at
/// which `A(t_d) = 0`: `e^{−i(v²/2 + Eᵢ⁺)t_d − iz cos(ω_L t_d + φ)}`.
pub fn detection_phase(speed: f64, theta: f64, t_d: f64, d: &CwDressing, ch: &AugerChannel) -> Complex64 {
    let z = d.argument(speed, theta);
    Complex64::cis(-(0.5 * speed * speed + ch.e_ion) * t_d - z * (d.omega_l * t_d + d.phi).cos())
}

/// The neighbouring terms `iⁿJₙe^{inφ}Iₙ` and `i^{n+1}J_{n+1}e^{i(n+1)φ}I_{n+1}`
/// whose overlap produces the asymmetry.
pub fn interference_pair(
    n: i64,
    speed: f64,
    theta: f64,
    p: &RabiParams,
    d: &CwDressing,
    ch: &AugerChannel,
    model: &NeonModel,
) -> Result<(Complex64, Complex64)> {
    let z = d.argument(speed, theta);
    let first = term(n, bessel_jn(n, z)?, speed, p, d, ch, model);
    let second = term(n + 1, bessel_jn(n + 1, z)?, speed, p, d, ch, model);
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{ev_to_au, intensity_to_field, wavelength_to_omega};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn peak_params(t_f: f64) -> RabiParams {
        let m = NeonModel::default();
        RabiParams::for_field(&m, intensity_to_field(1.4e16).unwrap(), t_f).unwrap()
    }

    #[test]
    fn bessel_known_values() {
        assert_eq!(bessel_jn(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_jn(3, 0.0).unwrap(), 0.0);
        assert!(bessel_jn(0, 2.4048).unwrap().abs() < 1e-4);
        assert_relative_eq!(bessel_jn(0, 1.0).unwrap(), 0.765_197_686_557_966_6, max_relative = 1e-14);
        assert_relative_eq!(bessel_jn(1, 1.0).unwrap(), 0.440_050_585_744_933_5, max_relative = 1e-14);
        assert_relative_eq!(bessel_jn(5, 10.0).unwrap(), -0.234_061_528_186_793_6, max_relative = 1e-12);
        assert_relative_eq!(bessel_jn(0, 100.0).unwrap(), 0.019_985_850_304_223_12, max_relative = 1e-10);
    }

    #[test]
    fn bessel_domain() {
        assert!(bessel_jn(201, 1.0).is_err());
        assert!(bessel_jn(0, 500.5).is_err());
        assert!(bessel_jn(0, f64::NAN).is_err());
        assert!(bessel_jn(-200, -500.0).is_ok());
    }

    #[test]
    fn sum_rule_at_default_truncation() {
        for z in [0.0, 0.3, 3.86, 13.6, 40.0] {
            let n = default_n_max(z);
            let j = bessel_j_all(n, z).unwrap();
            let sum: f64 = j.iter().map(|v| v * v).sum();
            assert!((sum - 1.0).abs() < 1e-8, "z={z}: {sum}");
        }
    }

    #[test]
    fn batch_matches_single() {
        let j = bessel_j_all(30, -7.3).unwrap();
        for n in -30..=30i64 {
            assert_relative_eq!(j[(n + 30) as usize], bessel_jn(n, -7.3).unwrap(), max_relative = 1e-12, epsilon = 1e-300);
        }
    }

    proptest! {
        #[test]
        fn negative_order_reflection(n in 0i64..100, x in -200.0f64..200.0) {
            let a = bessel_jn(-n, x).unwrap();
            let b = bessel_jn(n, x).unwrap();
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert_eq!(a, s * b);
        }

        #[test]
        fn recurrence_holds(n in 1i64..80, x in 0.5f64..100.0) {
            let r = bessel_jn(n - 1, x).unwrap() + bessel_jn(n + 1, x).unwrap()
                - 2.0 * n as f64 / x * bessel_jn(n, x).unwrap();
            prop_assert!(r.abs() < 1e-12, "residual {}", r);
        }
    }

    #[test]
    fn rabi_parameters() {
        let p = peak_params(100.0);
        assert_relative_eq!(p.omega_x_rabi, 0.0362, max_relative = 2e-3);
        assert!(RabiParams::new(0.001, 0.0099, 10.0).is_err());
        assert!(matches!(RabiParams::new(0.001, 0.01, 10.0), Err(Error::Overdamped { .. })));
    }

    #[test]
    fn rabi_amplitude_behaviour() {
        let p = peak_params(500.0);
        assert_eq!(rabi_amplitude(&p, 0.0).unwrap(), Complex64::new(0.0, 0.0));
        let bound = p.omega_x_rabi / p.omega_10;
        for k in 0..=500 {
            assert!(rabi_amplitude(&p, k as f64).unwrap().norm() <= bound);
        }
        assert!(rabi_amplitude(&p, 500.1).is_err());
        assert!(rabi_amplitude(&p, -0.1).is_err());
    }

    #[test]
    fn long_pulse_gives_autler_townes_doublet() {
        let p = peak_params(3000.0);
        let alphas: Vec<f64> = (-4000..=4000).map(|k| k as f64 * 1e-5).collect();
        let mags: Vec<f64> = alphas.iter().map(|&a| i_n(&p, a).norm()).collect();
        let peaks: Vec<f64> = (1..mags.len() - 1)
            .filter(|&k| mags[k] > mags[k - 1] && mags[k] >= mags[k + 1])
            .map(|k| alphas[k])
            .collect();
        assert_eq!(peaks.len(), 2, "{peaks:?}");
        assert_relative_eq!(peaks[1], 0.5 * p.omega_10, max_relative = 0.05);
        assert_relative_eq!(peaks[0], -0.5 * p.omega_10, max_relative = 0.05);
        // Each line in |Iₙ|² has a full width at half maximum ≈ Γ₁/2.
        let top = mags.iter().cloned().fold(0.0, f64::max);
        let k0 = mags.iter().position(|&m| m == top).unwrap();
        let mut k = k0;
        while mags[k] * mags[k] > top * top / 2.0 {
            k += 1;
        }
        let hwhm = alphas[k] - alphas[k0];
        assert_relative_eq!(2.0 * hwhm, 0.5 * p.gamma1, max_relative = 0.1);
    }

    #[test]
    fn splitting_grows_with_rabi_frequency() {
        let g = NeonModel::default().gamma_1s;
        let mut last = 0.0;
        for rabi in [0.02, 0.04, 0.08] {
            let p = RabiParams::new(rabi, g, 4000.0).unwrap();
            let alphas: Vec<f64> = (0..=6000).map(|k| k as f64 * 1e-5).collect();
            let peak = alphas
                .iter()
                .cloned()
                .max_by(|a, b| i_n(&p, *a).norm().total_cmp(&i_n(&p, *b).norm()))
                .unwrap();
            assert_relative_eq!(2.0 * peak, p.omega_10, max_relative = 0.05);
            assert!(peak > last);
            last = peak;
        }
    }

    #[test]
    fn undressed_amplitude_is_single_term() {
        let m = NeonModel::default();
        let ch = AugerChannel::default();
        let p = peak_params(600.0);
        let d = CwDressing { a0: 0.0, omega_l: 0.03, phi: 0.4 };
        let v = ch.nominal_speed(&m).unwrap() * 1.001;
        let b = analytic_amplitude(v, 0.0, &p, &d, &ch, &m, 0).unwrap();
        let direct = -Complex64::i() * ch.matrix_element(&m, 0.0).unwrap() * i_n(&p, alpha_n(v, &ch, &m, 0.03, 0));
        assert_relative_eq!((b - direct).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn bessel_argument_at_1500_nm() {
        let m = NeonModel::default();
        let v = AugerChannel::default().nominal_speed(&m).unwrap();
        let w = wavelength_to_omega(1500.0).unwrap();
        let d = CwDressing::from_field(intensity_to_field(1e11).unwrap(), w, 0.0);
        assert_relative_eq!(d.a0, 0.0556, max_relative = 2e-3);
        assert_relative_eq!(d.argument(v, 0.0), 13.6, max_relative = 0.01);
        assert!(d.argument(v, PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn truncation_is_checked() {
        let m = NeonModel::default();
        let ch = AugerChannel::default();
        let p = peak_params(600.0);
        let w = wavelength_to_omega(1500.0).unwrap();
        let d = CwDressing::from_field(intensity_to_field(1e11).unwrap(), w, 0.0);
        let v = ch.nominal_speed(&m).unwrap();
        assert!(matches!(analytic_amplitude(v, 0.0, &p, &d, &ch, &m, 5), Err(Error::Truncation { .. })));
        assert!(analytic_amplitude(v, 0.0, &p, &d, &ch, &m, default_n_max(d.argument(v, 0.0))).is_ok());
    }

    #[test]
    fn weak_pulse_spectrum_is_symmetric_about_channel() {
        let m = NeonModel::default();
        let ch = AugerChannel::default();
        // Weak enough that neighbouring sidebands do not overlap.
        let p = RabiParams::new(0.006, m.gamma_1s, 400.0).unwrap();
        let w = wavelength_to_omega(800.0).unwrap();
        let d = CwDressing::from_field(intensity_to_field(1e11).unwrap(), w, 0.0);
        let centre = ch.energy(&m);
        let n_max = 30;
        let (mut above, mut below) = (0.0, 0.0);
        for k in 1..=1200 {
            let de = ev_to_au(0.01) * k as f64;
            let up = (2.0 * (centre + de)).sqrt();
            let down = (2.0 * (centre - de)).sqrt();
            above += analytic_amplitude(up, 0.0, &p, &d, &ch, &m, n_max).unwrap().norm_sqr();
            below += analytic_amplitude(down, 0.0, &p, &d, &ch, &m, n_max).unwrap().norm_sqr();
        }
        let a = (above - below) / (above + below);
        assert!(a.abs() < 0.02, "asymmetry {a}");
    }

    #[test]
    fn interference_pair_phase_properties() {
        let m = NeonModel::default();
        let ch = AugerChannel::default();
        let p = peak_params(600.0);
        let w = wavelength_to_omega(1500.0).unwrap();
        let v = ch.nominal_speed(&m).unwrap() * 1.0005;
        let d = CwDressing::from_field(intensity_to_field(1e11).unwrap(), w, 0.3);
        let shifted = CwDressing { phi: 0.3 + 2.0 * PI, ..d };
        let (a, b) = interference_pair(1, v, 0.0, &p, &d, &ch, &m).unwrap();
        let (a2, b2) = interference_pair(1, v, 0.0, &p, &shifted, &ch, &m).unwrap();
        assert!((a - a2).norm() < 1e-12 * a.norm());
        assert!((b - b2).norm() < 1e-12 * b.norm());
        // Advancing φ by δ advances the relative phase of the pair by δ.
        let delta = 0.7;
        let moved = CwDressing { phi: 0.3 + delta, ..d };
        let (c, e) = interference_pair(1, v, 0.0, &p, &moved, &ch, &m).unwrap();
        let before = (b / a).arg();
        let after = (e / c).arg();
        let diff = (after - before - delta).rem_euclid(2.0 * PI);
        assert!(diff < 1e-10 || 2.0 * PI - diff < 1e-10);
    }

    #[test]
    fn sidebands_barely_overlap_at_800_nm() {
        let m = NeonModel::default();
        let p = peak_params(600.0);
        let w = wavelength_to_omega(800.0).unwrap();
        // |Iₙ| falls well below its peak half a photon away from the line.
        let peak = (0..200).map(|k| i_n(&p, -0.03 + 3e-4 * k as f64).norm()).fold(0.0, f64::max);
        let half_photon = i_n(&p, 0.5 * w).norm();
        assert!(half_photon < 0.2 * peak, "{half_photon} vs {peak}");
        let _ = m;
    }
}
