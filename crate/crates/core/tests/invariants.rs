use std::f64::consts::PI;

use dressed_auger::analytic::{analytic_amplitude, default_n_max, CwDressing, RabiParams};
use dressed_auger::atom::{AugerChannel, NeonModel};
use dressed_auger::config::RunConfig;
use dressed_auger::continuum::build_spectrum;
use dressed_auger::observables::{forward_asymmetry, intensity_average, scan_delay, IntensityAverage, TransverseProfile};
use dressed_auger::pipeline::Simulation;
use dressed_auger::units::{intensity_to_field, optical_period_fs, wavelength_to_omega};
use proptest::prelude::*;

fn quick() -> RunConfig {
    let mut cfg = RunConfig::default();
    cfg.grid.energy_step_ev = 0.05;
    cfg
}

#[test]
fn mirror_symmetry_under_field_reversal() {
    let mut cfg = quick();
    cfg.optical.phi = 0.3;
    let theta = 0.4;
    let a = Simulation::prepare(&cfg).unwrap().spectrum_at(&[theta]).unwrap();
    cfg.optical.phi += PI;
    let b = Simulation::prepare(&cfg).unwrap().spectrum_at(&[PI - theta]).unwrap();
    let peak = a.values.iter().cloned().fold(0.0, f64::max);
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - y).abs() < 1e-2 * peak, "{x} vs {y}");
    }
}

#[test]
fn delay_scan_repeats_after_one_optical_period() {
    let cfg = quick();
    let period = optical_period_fs(cfg.optical.wavelength_nm);
    let delays = [-1.0, 0.3, -1.0 + period, 0.3 + period];
    let r = scan_delay(&delays, &cfg).unwrap();
    let a = r.a();
    assert!((a[0] - a[2]).abs() < 0.03, "{a:?}");
    assert!((a[1] - a[3]).abs() < 0.03, "{a:?}");
}

#[test]
fn narrow_intensity_distribution_approaches_the_point_result() {
    let cfg = quick();
    let point = forward_asymmetry(&cfg).unwrap().0.a;
    let mut gaps = Vec::new();
    for min_fraction in [0.5, 0.8, 0.98] {
        let avg = IntensityAverage { profile: TransverseProfile::Gaussian, samples: 5, min_fraction };
        gaps.push((intensity_average(&cfg, &avg).unwrap().asymmetry.a - point).abs());
    }
    assert!(gaps[2] < gaps[1] && gaps[1] < gaps[0], "{gaps:?}");
    assert!(gaps[2] < 0.02, "{gaps:?}");
    let flat = IntensityAverage { profile: TransverseProfile::FlatTop, ..Default::default() };
    assert_eq!(intensity_average(&cfg, &flat).unwrap().asymmetry.a, point);
}

#[test]
fn spectra_are_identical_for_any_worker_count() {
    let sim = Simulation::prepare(&quick()).unwrap();
    let grid = sim.grid_at(&[0.0, 0.7, PI / 2.0]).unwrap();
    let solver = sim.solver().unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| build_spectrum(&grid, &solver)).unwrap();
    let b = four.install(|| build_spectrum(&grid, &solver)).unwrap();
    assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
}

fn cw_setup(phi: f64) -> (RabiParams, CwDressing, NeonModel) {
    let m = NeonModel::default();
    let p = RabiParams::for_field(&m, intensity_to_field(1.4e16).unwrap(), 400.0).unwrap();
    let d = CwDressing::from_field(intensity_to_field(1e11).unwrap(), wavelength_to_omega(1500.0).unwrap(), phi);
    (p, d, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn analytic_density_is_two_pi_periodic_in_phase(phi in -PI..PI, de in -0.3f64..0.3, theta in 0.0f64..PI) {
        let ch = AugerChannel::default();
        let (p, d, m) = cw_setup(phi);
        let (_, d2, _) = cw_setup(phi + 2.0 * PI);
        let v = (2.0 * (ch.energy(&m) + de)).sqrt();
        let n = default_n_max(d.argument(v, theta));
        let a = analytic_amplitude(v, theta, &p, &d, &ch, &m, n).unwrap().norm_sqr();
        let b = analytic_amplitude(v, theta, &p, &d2, &ch, &m, n).unwrap().norm_sqr();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-300));
    }

    #[test]
    fn density_is_quadratic_in_the_matrix_element(scale in 0.1f64..4.0, de in -0.3f64..0.3) {
        let base = AugerChannel::default();
        let scaled = AugerChannel { partial_width: base.partial_width * scale * scale, ..base };
        let (p, d, m) = cw_setup(0.0);
        let v = (2.0 * (base.energy(&m) + de)).sqrt();
        let n = default_n_max(d.argument(v, 0.0));
        let a = analytic_amplitude(v, 0.0, &p, &d, &base, &m, n).unwrap().norm_sqr();
        let b = analytic_amplitude(v, 0.0, &p, &d, &scaled, &m, n).unwrap().norm_sqr();
        prop_assert!((b - scale * scale * a).abs() <= 1e-10 * b);
    }
}
