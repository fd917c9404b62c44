//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use dressed_auger::config::{preset, RunConfig};
use dressed_auger::continuum::angle_integrated;
use dressed_auger::observables::{
    asymmetry, forward_asymmetry, intensity_average, local_maxima, scan_delay, IntensityAverage,
};
use dressed_auger::oracles::OracleReport;
use dressed_auger::pipeline::Simulation;
use dressed_auger::quadrature::linear_integral;
use dressed_auger::units::{optical_period_fs, wavelength_to_omega, au_to_ev};
use dressed_auger::validation::{
    check_analytic_vs_numeric, check_bound_rabi, check_dressing_norm, check_grid_refinement, check_in_closed_form,
    check_norm_flow_order, check_parseval, Fault,
};

const WAVELENGTHS: [f64; 3] = [800.0, 1300.0, 1500.0];
const TARGET_A: [f64; 3] = [-0.02, -0.24, 0.41];
const A_TOLERANCE: f64 = 0.08;
const RUNTIME_LIMIT_S: f64 = 120.0;
const INTEGRATED_A_LIMIT: f64 = 0.03;
const SPLITTING_EV: f64 = 0.98;
const SPLITTING_TOLERANCE: f64 = 0.25;
const SIDEBAND_SPACING_EV: f64 = 1.55;
const SPACING_TOLERANCE_EV: f64 = 0.05;
const SIDEBAND_DEPTH_RATIO: f64 = 0.05;
const PERIOD_FS: f64 = 5.0;
const PERIOD_TOLERANCE: f64 = 0.05;
const ZERO_CROSSING_DELAY_FS: f64 = 1.5;
const AVERAGED_A: f64 = 0.05;
const AVERAGED_A_TOLERANCE: f64 = 0.05;
const AVERAGE_REDUCTION: f64 = 4.0;
const VALIDATION_LIMIT_S: f64 = 300.0;
/// Maxima below this fraction of the largest one are not counted as peaks.
const PEAK_FLOOR: f64 = 0.01;

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn report(o: &Outcome) {
    println!("{} {} {}: {}", o.id, if o.passed { "PASS" } else { "FAIL" }, o.title, o.detail);
}

fn with_wavelength(lambda: f64) -> RunConfig {
    let mut cfg = RunConfig::default();
    cfg.optical.wavelength_nm = lambda;
    cfg
}

struct WavelengthRun {
    lambda: f64,
    forward_a: f64,
    integrated_a: f64,
    seconds: f64,
    energies: Vec<f64>,
    forward: Vec<f64>,
}

fn wavelength_run(lambda: f64) -> WavelengthRun {
    let clock = Instant::now();
    let sim = Simulation::prepare(&with_wavelength(lambda)).expect("simulation");
    let spectrum = sim.spectrum().expect("spectrum");
    let e_ref = sim.channel_energy_ev();
    let forward = spectrum.slice_at(0.0).to_vec();
    let total = angle_integrated(&spectrum).expect("quadrature");
    WavelengthRun {
        lambda,
        forward_a: asymmetry(spectrum.energies(), &forward, e_ref).expect("asymmetry").a,
        integrated_a: asymmetry(spectrum.energies(), &total, e_ref).expect("asymmetry").a,
        seconds: clock.elapsed().as_secs_f64(),
        energies: spectrum.energies().to_vec(),
        forward,
    }
}

/// Extremes of the θ = 0 asymmetry over delays spanning half an optical
/// period on either side of zero.
fn half_period_range(lambda: f64) -> (f64, f64) {
    let half = 0.5 * optical_period_fs(lambda);
    let delays: Vec<f64> = (0..=10).map(|k| -half + k as f64 * half / 5.0).collect();
    let a = scan_delay(&delays, &with_wavelength(lambda)).expect("scan").a();
    (a.iter().cloned().fold(f64::INFINITY, f64::min), a.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
}

fn ac1(runs: &[WavelengthRun]) -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (run, target) in runs.iter().zip(TARGET_A) {
        let ok = (run.forward_a - target).abs() <= A_TOLERANCE && run.seconds < RUNTIME_LIMIT_S;
        passed &= ok;
        let (lo, hi) = half_period_range(run.lambda);
        parts.push(format!(
            "{} nm A = {:+.3} (target {:+.2} ± {A_TOLERANCE}, {:.0} s; over ±T/2 delay A ∈ [{:+.2}, {:+.2}])",
            run.lambda, run.forward_a, target, run.seconds, lo, hi
        ));
    }
    Outcome { id: "AC1", title: "wavelength asymmetries at θ = 0", passed, detail: parts.join("; ") }
}

fn ac2(runs: &[WavelengthRun]) -> Outcome {
    let passed = runs.iter().all(|r| r.integrated_a.abs() < INTEGRATED_A_LIMIT);
    let parts: Vec<String> = runs.iter().map(|r| format!("{} nm {:+.4}", r.lambda, r.integrated_a)).collect();
    Outcome {
        id: "AC2",
        title: "angle-integrated symmetry",
        passed,
        detail: format!("{} (required |A| < {INTEGRATED_A_LIMIT})", parts.join(", ")),
    }
}

fn undressed_integrated(intensity: f64) -> (Vec<f64>, Vec<f64>) {
    let mut cfg = RunConfig::default();
    cfg.optical.enabled = false;
    cfg.xray.intensity_wcm2 = intensity;
    cfg.grid.angles = 8;
    let sim = Simulation::prepare(&cfg).expect("simulation");
    let spectrum = sim.spectrum().expect("spectrum");
    (spectrum.energies().to_vec(), angle_integrated(&spectrum).expect("quadrature"))
}

fn ac3() -> Outcome {
    let (e, strong) = undressed_integrated(1.4e16);
    let peaks = local_maxima(&strong, PEAK_FLOOR);
    let (_, weak) = undressed_integrated(2.4e15);
    let weak_peaks = local_maxima(&weak, PEAK_FLOOR).len();
    let splitting = (peaks.len() == 2).then(|| e[peaks[1]] - e[peaks[0]]);
    let passed = weak_peaks == 1
        && splitting.is_some_and(|s| (s - SPLITTING_EV).abs() <= SPLITTING_TOLERANCE * SPLITTING_EV);
    let positions: Vec<String> = peaks.iter().map(|&k| format!("{:.2}", e[k])).collect();
    Outcome {
        id: "AC3",
        title: "twin-peak splitting",
        passed,
        detail: format!(
            "1.4e16 W/cm² maxima at [{}] eV, splitting {} (required two, {SPLITTING_EV} eV ± {:.0}%); 2.4e15 W/cm² maxima: {weak_peaks} (required 1)",
            positions.join(", "),
            splitting.map_or("n/a".into(), |s| format!("{s:.3} eV")),
            100.0 * SPLITTING_TOLERANCE
        ),
    }
}

/// Median spacing between sideband centres. Maxima closer than half a
/// photon energy belong to one sideband and are merged into their mean.
fn sideband_spacing(e: &[f64], p: &[f64], photon_ev: f64) -> Option<f64> {
    let peaks = local_maxima(p, PEAK_FLOOR);
    let mut centres: Vec<Vec<f64>> = Vec::new();
    for k in peaks {
        match centres.last_mut() {
            Some(group) if e[k] - group[group.len() - 1] < 0.5 * photon_ev => group.push(e[k]),
            _ => centres.push(vec![e[k]]),
        }
    }
    let centres: Vec<f64> = centres.iter().map(|g| g.iter().sum::<f64>() / g.len() as f64).collect();
    let mut gaps: Vec<f64> = centres.windows(2).map(|w| w[1] - w[0]).collect();
    if gaps.is_empty() {
        return None;
    }
    gaps.sort_by(f64::total_cmp);
    Some(gaps[gaps.len() / 2])
}

fn ac4(run800: &WavelengthRun) -> Outcome {
    let photon = au_to_ev(wavelength_to_omega(800.0).expect("wavelength"));
    let spacing = sideband_spacing(&run800.energies, &run800.forward, photon);
    let passed = spacing.is_some_and(|s| (s - SIDEBAND_SPACING_EV).abs() <= SPACING_TOLERANCE_EV);
    Outcome {
        id: "AC4",
        title: "sideband spacing at 800 nm",
        passed,
        detail: format!(
            "spacing {} (required {SIDEBAND_SPACING_EV} ± {SPACING_TOLERANCE_EV} eV)",
            spacing.map_or("n/a".into(), |s| format!("{s:.3} eV"))
        ),
    }
}

/// Field-induced modulation `∫|P_on − P_off| dE / ∫P_off dE` at one angle.
fn ac5() -> Outcome {
    let on = preset("fig1c").expect("preset");
    let mut off = on.clone();
    off.optical.enabled = false;
    let angles = [0.0, PI / 2.0];
    let a = Simulation::prepare(&on).and_then(|s| s.spectrum_at(&angles)).expect("dressed");
    let b = Simulation::prepare(&off).and_then(|s| s.spectrum_at(&angles)).expect("bare");
    let e = a.energies();
    let depth = |k: usize| {
        let diff: Vec<f64> = a.slice(k).iter().zip(b.slice(k)).map(|(x, y)| (x - y).abs()).collect();
        linear_integral(e, &diff, e[0], e[e.len() - 1]) / linear_integral(e, b.slice(k), e[0], e[e.len() - 1])
    };
    let (d0, d90) = (depth(0), depth(1));
    Outcome {
        id: "AC5",
        title: "sidebands vanish at θ = π/2",
        passed: d90 < SIDEBAND_DEPTH_RATIO * d0,
        detail: format!(
            "modulation depth θ=0 {d0:.3}, θ=π/2 {d90:.2e}, ratio {:.2e} (required < {SIDEBAND_DEPTH_RATIO})",
            d90 / d0
        ),
    }
}

/// Period of the strongest Fourier component of `a` sampled every `step`.
fn dominant_period(a: &[f64], step: f64) -> f64 {
    use rustfft::{num_complex::Complex, FftPlanner};
    let n = 1 << 14;
    let mean = a.iter().sum::<f64>() / a.len() as f64;
    let mut buf: Vec<Complex<f64>> = (0..n)
        .map(|k| Complex::new(if k < a.len() { a[k] - mean } else { 0.0 }, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let k = (1..n / 2).max_by(|&i, &j| buf[i].norm().total_cmp(&buf[j].norm())).expect("bins");
    n as f64 * step / k as f64
}

fn ac6() -> Outcome {
    let cfg = preset("fig3").expect("preset");
    let delays = cfg.scan.as_ref().expect("scan").resolve().expect("range");
    let step = delays[1] - delays[0];
    let a = scan_delay(&delays, &cfg).expect("scan").a();
    let period = dominant_period(&a, step);
    let at = |t: f64| a[((t - delays[0]) / step).round() as usize];
    let a_zero = at(ZERO_CROSSING_DELAY_FS);
    // Extremes within the first optical period.
    let first: Vec<usize> = (0..delays.len()).filter(|&k| delays[k] < delays[0] + PERIOD_FS).collect();
    let kmax = *first.iter().max_by(|&&i, &&j| a[i].total_cmp(&a[j])).expect("points");
    let kmin = *first.iter().min_by(|&&i, &&j| a[i].total_cmp(&a[j])).expect("points");
    let sep = (delays[kmax] - delays[kmin]).abs().rem_euclid(PERIOD_FS);
    let sep = sep.min(PERIOD_FS - sep);
    let period_ok = (period - PERIOD_FS).abs() <= PERIOD_TOLERANCE * PERIOD_FS;
    let zero_ok = a_zero.abs() <= A_TOLERANCE;
    let sep_ok = (sep - 0.5 * PERIOD_FS).abs() <= PERIOD_TOLERANCE * PERIOD_FS;
    Outcome {
        id: "AC6",
        title: "delay-scan periodicity",
        passed: period_ok && zero_ok && sep_ok,
        detail: format!(
            "dominant period {period:.3} fs (required {PERIOD_FS} ± {:.0}%); A({ZERO_CROSSING_DELAY_FS} fs) = {a_zero:+.3} (required 0 ± {A_TOLERANCE}); max at {:.1} fs, min at {:.1} fs, separation {sep:.2} fs (required {:.1} ± {:.2})",
            100.0 * PERIOD_TOLERANCE,
            delays[kmax],
            delays[kmin],
            0.5 * PERIOD_FS,
            PERIOD_TOLERANCE * PERIOD_FS
        ),
    }
}

fn ac7() -> Outcome {
    let cfg = with_wavelength(1500.0);
    let peak_a = forward_asymmetry(&cfg).expect("peak").0.a;
    let avg = intensity_average(&cfg, &IntensityAverage::default()).expect("average").asymmetry.a;
    let passed = (avg - AVERAGED_A).abs() <= AVERAGED_A_TOLERANCE && avg.abs() * AVERAGE_REDUCTION <= peak_a.abs();
    Outcome {
        id: "AC7",
        title: "intensity averaging",
        passed,
        detail: format!(
            "averaged A = {avg:+.3} (required {AVERAGED_A} ± {AVERAGED_A_TOLERANCE}), peak-intensity A = {peak_a:+.3}, reduction ×{:.1} (required ≥ {AVERAGE_REDUCTION})",
            peak_a.abs() / avg.abs()
        ),
    }
}

fn summarize(id: &'static str, title: &'static str, checks: Vec<OracleReport>, extra: Option<(bool, String)>) -> Outcome {
    let mut passed = checks.iter().all(|r| r.passed);
    let mut parts: Vec<String> =
        checks.iter().map(|r| format!("{} {:.2e} ({})", r.name, r.residual, if r.passed { "ok" } else { "fail" })).collect();
    if let Some((ok, text)) = extra {
        passed &= ok;
        parts.push(text);
    }
    Outcome { id, title, passed, detail: parts.join("; ") }
}

fn main() -> ExitCode {
    let clock = Instant::now();
    let runs: Vec<WavelengthRun> = WAVELENGTHS.iter().map(|&l| wavelength_run(l)).collect();
    let mut outcomes = vec![ac1(&runs), ac2(&runs), ac3(), ac4(&runs[0]), ac5(), ac6(), ac7()];
    for o in &outcomes {
        report(o);
    }

    let validation = Instant::now();
    let mut ac8 = vec![check_in_closed_form(100), check_bound_rabi()];
    ac8.extend(check_analytic_vs_numeric().expect("analytic comparison"));
    let ac8 = summarize("AC8", "oracle equivalence", ac8, None);
    report(&ac8);
    let ac9 = vec![
        check_parseval(Fault::None).expect("parseval"),
        check_dressing_norm().expect("dressing"),
        check_norm_flow_order().expect("norm flow"),
        check_grid_refinement(false).expect("refinement"),
    ];
    let seconds = validation.elapsed().as_secs_f64();
    let ac9 = summarize(
        "AC9",
        "conservation properties",
        ac9,
        Some((seconds < VALIDATION_LIMIT_S, format!("criteria 8-9 took {seconds:.0} s (required < {VALIDATION_LIMIT_S} s)"))),
    );
    report(&ac9);
    outcomes.push(ac8);
    outcomes.push(ac9);

    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} criteria, {} failed, {:.0} s", outcomes.len(), failed, clock.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
