//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `cargo test --test acceptance -- --nocapture`
//! to see them).

use std::f64::consts::PI;
use std::time::Instant;

use beamnet::capacity::{
    tc_beamwidth_maximizer, tc_gain, tc_omni, tc_sector_noside, tp_gain, tp_omni, tp_sector_noside,
    OutageConstraint,
};
use beamnet::cli::{self, Command, ExperimentSpec};
use beamnet::error_models::OrientationErrorModel;
use beamnet::link::{
    success_general, success_omni, success_sector, success_sector_noside, NetworkParams,
};
use beamnet::numeric::linear_fit;
use beamnet::patterns::RadiationPattern;
use beamnet::simulate::{simulate_success, SimConfig};

const TWO_PI: f64 = 2.0 * PI;

fn defaults(lambda: f64) -> NetworkParams {
    NetworkParams::defaults_with_lambda(lambda)
}

fn hn(mean_deg: f64) -> OrientationErrorModel {
    OrientationErrorModel::truncated_half_normal(mean_deg.to_radians()).unwrap()
}

fn texp(mean_deg: f64) -> OrientationErrorModel {
    OrientationErrorModel::truncated_exponential(mean_deg.to_radians()).unwrap()
}

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion:2} ({name}): {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_closed_form_consistency() {
    let start = Instant::now();
    let patterns = [
        RadiationPattern::omni(),
        RadiationPattern::ideal_sector(20f64.to_radians(), 0.0).unwrap(),
        RadiationPattern::ideal_sector(20f64.to_radians(), 0.1).unwrap(),
    ];
    let errors = [
        OrientationErrorModel::zero(),
        OrientationErrorModel::uniform(PI).unwrap(),
        hn(3.0),
    ];
    let lambdas = [1e-7, 1e-6, 1e-5, 1e-4, 1e-3];
    let mut worst = 0.0f64;
    for pattern in &patterns {
        for error in &errors {
            for &lam in &lambdas {
                let params = defaults(lam);
                let general = success_general(&params, pattern, error).unwrap();
                let closed = match pattern {
                    RadiationPattern::Omni => success_omni(&params),
                    RadiationPattern::IdealSector { g2, .. } if *g2 == 0.0 => {
                        success_sector_noside(&params, pattern, error).unwrap()
                    }
                    _ => success_sector(&params, pattern, error).unwrap(),
                };
                worst = worst.max((general - closed).abs() / closed.abs().max(1e-300));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "closed-form consistency",
        worst < 1e-10 && elapsed < 10.0,
        &format!("max rel diff {worst:.2e} over 45 cells in {elapsed:.2}s"),
    );
}

#[test]
fn criterion_02_monte_carlo_agreement() {
    let start = Instant::now();
    let ideal = |omega_deg: f64, g2: f64| {
        RadiationPattern::ideal_sector(omega_deg.to_radians(), g2).unwrap()
    };
    let cases: Vec<(&str, RadiationPattern, OrientationErrorModel, f64, f64)> = vec![
        (
            "omni/zero",
            RadiationPattern::omni(),
            OrientationErrorModel::zero(),
            3e-7,
            30_000.0,
        ),
        (
            "omni/hn3",
            RadiationPattern::omni(),
            hn(3.0),
            1e-6,
            40_000.0,
        ),
        (
            "ideal20,g2=0/zero",
            ideal(20.0, 0.0),
            OrientationErrorModel::zero(),
            1e-5,
            9_000.0,
        ),
        ("ideal20,g2=0/hn3", ideal(20.0, 0.0), hn(3.0), 3e-5, 8_000.0),
        (
            "ideal120,g2=0/uniform(pi)",
            ideal(120.0, 0.0),
            OrientationErrorModel::uniform(PI).unwrap(),
            1e-5,
            8_000.0,
        ),
        (
            "ideal20,g2=0.1/hn3",
            ideal(20.0, 0.1),
            hn(3.0),
            1e-5,
            12_000.0,
        ),
        (
            "ideal60,g2=0.1/texp10",
            ideal(60.0, 0.1),
            texp(10.0),
            1.5e-6,
            26_000.0,
        ),
        (
            "transition20,g5,g2=0.1/hn3",
            RadiationPattern::transition_sector(20f64.to_radians(), 5f64.to_radians(), 0.1)
                .unwrap(),
            hn(3.0),
            3e-6,
            10_000.0,
        ),
        (
            "transition90,g20,g2=0.05/texp10",
            RadiationPattern::transition_sector(90f64.to_radians(), 20f64.to_radians(), 0.05)
                .unwrap(),
            texp(10.0),
            1e-6,
            20_000.0,
        ),
        (
            "3gpp30,g2=0.05/hn3",
            RadiationPattern::three_gpp_sector(30f64.to_radians(), 0.05).unwrap(),
            hn(3.0),
            3e-6,
            12_000.0,
        ),
    ];
    let mut hits = 0;
    let mut lines = Vec::new();
    for (i, (name, pattern, error, lam, window)) in cases.iter().enumerate() {
        let params = defaults(*lam);
        let analytic = success_general(&params, pattern, error).unwrap();
        let cfg = SimConfig::new(*window, 100_000, 4242 + i as u64);
        let est = simulate_success(&params, pattern, error, &cfg).unwrap();
        let inside = est.contains(analytic);
        if inside {
            hits += 1;
        }
        lines.push(format!(
            "{name}: analytic {analytic:.5} {} [{:.5}, {:.5}]",
            if inside { "in" } else { "OUTSIDE" },
            est.ci_low,
            est.ci_high
        ));
    }
    let elapsed = start.elapsed().as_secs_f64();
    for l in &lines {
        println!("  {l}");
    }
    report(
        2,
        "Monte Carlo agreement",
        hits >= 9 && elapsed < 300.0,
        &format!("{hits}/10 analytic values inside 95% Wilson CI (n = 1e5) in {elapsed:.1}s"),
    );
}

#[test]
fn criterion_03_tp_monotone_in_beamwidth() {
    let params = defaults(1e-5);
    let models: Vec<(&str, OrientationErrorModel)> = vec![
        ("uniform(pi)", OrientationErrorModel::uniform(PI).unwrap()),
        ("trunc-exp(70deg)", texp(70.0)),
        ("trunc-half-normal(70deg)", hn(70.0)),
        (
            "dimple",
            OrientationErrorModel::dimple(0.5, 0.5, 15.0, 1.0).unwrap(),
        ),
    ];
    let mut worst = 0.0f64;
    for (_, error) in &models {
        let mut last = f64::INFINITY;
        for i in 1..=1000 {
            let omega = TWO_PI * i as f64 / 1000.0;
            let tp = tp_sector_noside(&params, omega, error).unwrap().value;
            if tp > last {
                worst = worst.max((tp - last) / last);
            }
            last = tp;
        }
    }
    report(
        3,
        "TP monotonicity",
        worst <= 1e-12,
        &format!("worst relative increase {worst:.2e} on 1000-point grids, 4 error models"),
    );
}

#[test]
fn criterion_04_tc_unimodal_and_maximizer() {
    let params = defaults(0.0);
    let outage = OutageConstraint::new(0.15).unwrap();
    let models: Vec<(&str, OrientationErrorModel)> = vec![
        ("uniform(pi)", OrientationErrorModel::uniform(PI).unwrap()),
        ("trunc-exp(70deg)", texp(70.0)),
        ("trunc-half-normal(70deg)", hn(70.0)),
        ("trunc-half-normal(3deg)", hn(3.0)),
        ("trunc-exp(10deg)", texp(10.0)),
    ];
    let mut detail = String::new();
    let mut pass = true;
    for (name, error) in &models {
        let x_lo = error.quantile(0.85f64.sqrt()).unwrap();
        let x_hi = error.eps_max();
        let n = 4000;
        let values: Vec<f64> = (1..=n)
            .map(|i| {
                let omega = 2.0 * (x_lo + (x_hi - x_lo) * i as f64 / n as f64);
                tc_sector_noside(&params, omega, error, &outage)
                    .unwrap()
                    .value
            })
            .collect();
        let mut sign_changes = 0;
        let mut prev_sign = 0i8;
        for w in values.windows(2) {
            let d = w[1] - w[0];
            let s = if d > 0.0 {
                1
            } else if d < 0.0 {
                -1
            } else {
                0
            };
            if s != 0 {
                if prev_sign != 0 && s != prev_sign {
                    sign_changes += 1;
                }
                prev_sign = s;
            }
        }
        let argmax = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let omega_grid = 2.0 * (x_lo + (x_hi - x_lo) * (argmax + 1) as f64 / n as f64);
        let cell = 2.0 * (x_hi - x_lo) / n as f64;
        let m = tc_beamwidth_maximizer(error, &outage).unwrap();
        let ok = sign_changes <= 1
            && (m.omega_star - omega_grid).abs() <= cell
            && !m.non_concave_warning;
        if !ok {
            pass = false;
        }
        detail.push_str(&format!(
            "{name}: {} sign change(s), omega* {:.6} vs grid {:.6}; ",
            sign_changes, m.omega_star, omega_grid
        ));
    }
    report(4, "TC unimodality", pass, detail.trim_end());
}

#[test]
fn criterion_05_opposite_extremes() {
    // uniform error over [0, pi] (mean 90 deg), p_e = 0.15: TC wants the
    // widest beam while TP wants the narrowest
    let error = OrientationErrorModel::uniform(PI).unwrap();
    let outage = OutageConstraint::new(0.15).unwrap();
    let m = tc_beamwidth_maximizer(&error, &outage).unwrap();
    // boundary condition value: f(pi) = 1/pi vs log(1/0.85)/pi
    let f_end = error.pdf(PI).unwrap();
    let threshold = (1.0f64 / 0.85).ln() / PI;
    let params = defaults(1e-5);
    let mut argmax = 0usize;
    let mut best = f64::NEG_INFINITY;
    for i in 1..=1000 {
        let omega = TWO_PI * i as f64 / 1000.0;
        let tp = tp_sector_noside(&params, omega, &error).unwrap().value;
        if tp > best {
            best = tp;
            argmax = i;
        }
    }
    let pass =
        m.boundary && (m.omega_star - TWO_PI).abs() < 1e-12 && f_end >= threshold && argmax == 1;
    report(
        5,
        "opposite extremes",
        pass,
        &format!(
            "TC omega* = 2pi (boundary: f(pi) = {f_end:.4} >= {threshold:.4}); \
             TP argmax at smallest grid beamwidth (index {argmax})"
        ),
    );
}

#[test]
fn criterion_06_scaling_laws() {
    let params = defaults(0.0).with_eta(0.0);
    let error = OrientationErrorModel::zero();
    let outage = OutageConstraint::new(0.15).unwrap();
    let tp_o = tp_omni(&params).value;
    let tc_o = tc_omni(&params, &outage).value;
    let mut worst = 0.0f64;
    for k in 1..=12 {
        let omega = TWO_PI / k as f64;
        let expect = (k * k) as f64;
        let tp_ratio = tp_sector_noside(&params, omega, &error).unwrap().value / tp_o;
        let tc_ratio = tc_sector_noside(&params, omega, &error, &outage)
            .unwrap()
            .value
            / tc_o;
        worst = worst.max((tp_ratio / expect - 1.0).abs());
        worst = worst.max((tc_ratio / expect - 1.0).abs());
        // the closed-form gain expressions agree exactly as well
        worst = worst.max((tp_gain(omega, &error).unwrap() / expect - 1.0).abs());
        worst = worst.max((tc_gain(omega, &error, &outage).unwrap() / expect - 1.0).abs());
    }
    report(
        6,
        "scaling laws",
        worst < 1e-12,
        &format!("TP and TC gains equal (2pi/omega)^2 to {worst:.2e} for M = 1..12 sectors"),
    );
}

#[test]
fn criterion_07_sidelobe_crossing() {
    let error = hn(3.0);
    let omega = 20f64.to_radians();
    let with_side = RadiationPattern::ideal_sector(omega, 0.1).unwrap();
    let no_side = RadiationPattern::ideal_sector(omega, 0.0).unwrap();
    let n = 60;
    let mut flips = 0;
    let mut prev_sign = 0i8;
    let mut crossing = f64::NAN;
    for i in 0..n {
        let lam = 1e-7 * 10f64.powf(5.0 * i as f64 / (n - 1) as f64);
        let params = defaults(lam);
        let diff = success_sector(&params, &with_side, &error).unwrap()
            - success_sector_noside(&params, &no_side, &error).unwrap();
        let s = if diff > 0.0 {
            1
        } else if diff < 0.0 {
            -1
        } else {
            0
        };
        if s != 0 {
            if prev_sign != 0 && s != prev_sign {
                flips += 1;
                crossing = lam;
            }
            prev_sign = s;
        }
    }
    report(
        7,
        "sidelobe crossing",
        flips == 1,
        &format!(
            "sign of ps(g2=0.1) - ps(g2=0) flips {flips} time(s), near lambda = {crossing:.2e}"
        ),
    );
}

#[test]
fn criterion_08_near_linear_maximizer() {
    let outage = OutageConstraint::new(0.15).unwrap();
    let means_rad: Vec<f64> = (1..=10).map(|k| (k as f64).to_radians()).collect();
    let omegas: Vec<f64> = means_rad
        .iter()
        .map(|&m| {
            tc_beamwidth_maximizer(
                &OrientationErrorModel::truncated_exponential(m).unwrap(),
                &outage,
            )
            .unwrap()
            .omega_star
        })
        .collect();
    let (slope, _, r2) = linear_fit(&means_rad, &omegas);
    let ratios: Vec<f64> = omegas.iter().zip(&means_rad).map(|(o, m)| o / m).collect();
    let mean_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let max_dev = ratios
        .iter()
        .map(|r| (r / mean_ratio - 1.0).abs())
        .fold(0.0f64, f64::max);
    report(
        8,
        "near-linear maximizer",
        r2 > 0.99 && max_dev < 0.01,
        &format!(
            "omega*(mean) fit: slope {slope:.6}, R^2 = {r2:.12}; \
             omega*/mean constant to {max_dev:.2e} (ratio {mean_ratio:.6})"
        ),
    );
}

#[test]
fn criterion_09_maximizer_param_independence() {
    let outage = OutageConstraint::new(0.15).unwrap();
    let error = hn(3.0);
    let reference = tc_beamwidth_maximizer(&error, &outage).unwrap().omega_star;
    // the stationarity condition takes no network parameters; repeated
    // evaluations are identical
    let mut worst_repeat = 0.0f64;
    for _ in 0..5 {
        let again = tc_beamwidth_maximizer(&error, &outage).unwrap().omega_star;
        worst_repeat = worst_repeat.max((again - reference).abs());
    }
    // and the argmax of the full closed form stays put as alpha, beta, d,
    // lambda move
    let perturbed = [
        NetworkParams::new(1e-4, 100.0, 3.0, 4.0, 1e-12, 1.0).unwrap(),
        NetworkParams::new(1e-6, 250.0, 3.5, 2.0, 1e-12, 1.0).unwrap(),
        NetworkParams::new(1e-5, 50.0, 4.0, 8.0, 1e-12, 1.0).unwrap(),
    ];
    let x_lo = error.quantile(0.85f64.sqrt()).unwrap();
    let n = 20_000;
    let cell = 2.0 * (error.eps_max() - x_lo) / n as f64;
    let mut worst_shift = 0.0f64;
    for params in &perturbed {
        let mut best = (0.0, f64::NEG_INFINITY);
        for i in 1..=n {
            let omega = 2.0 * (x_lo + (error.eps_max() - x_lo) * i as f64 / n as f64);
            let v = tc_sector_noside(params, omega, &error, &outage)
                .unwrap()
                .value;
            if v > best.1 {
                best = (omega, v);
            }
        }
        worst_shift = worst_shift.max((best.0 - reference).abs());
    }
    report(
        9,
        "maximizer parameter independence",
        worst_repeat <= 1e-10 && worst_shift <= cell,
        &format!(
            "repeat spread {worst_repeat:.1e}; grid argmax moved {worst_shift:.2e} rad \
             (<= one {cell:.2e} rad cell) under alpha/beta/d/lambda perturbations"
        ),
    );
}

#[test]
fn criterion_10_determinism_and_validate_runtime() {
    // identical simulate specs produce byte-identical CSV artifacts
    let dir = tempfile::tempdir().unwrap();
    let overrides: Vec<(String, String)> = [
        ("sweep.points", "3"),
        ("sweep.min", "1e-6"),
        ("sweep.max", "1e-5"),
        ("sim.reps", "2000"),
        ("sim.seed", "42"),
    ]
    .iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect();
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    let spec_a =
        ExperimentSpec::resolve(Command::Simulate, None, &overrides, Some(out_a.clone())).unwrap();
    let spec_b =
        ExperimentSpec::resolve(Command::Simulate, None, &overrides, Some(out_b.clone())).unwrap();
    cli::run(&spec_a).unwrap();
    cli::run(&spec_b).unwrap();
    let bytes_a = std::fs::read(&out_a).unwrap();
    let bytes_b = std::fs::read(&out_b).unwrap();
    let identical = bytes_a == bytes_b;

    // the full validation suite finishes inside the budget
    let start = Instant::now();
    let validate_spec = ExperimentSpec::resolve(Command::Validate, None, &[], None).unwrap();
    let rendered = cli::render(&validate_spec);
    let elapsed = start.elapsed().as_secs_f64();
    let validate_ok = rendered.is_ok();
    report(
        10,
        "determinism and validate runtime",
        identical && validate_ok && elapsed < 600.0,
        &format!(
            "simulate CSVs byte-identical ({} bytes); validate suite {} in {elapsed:.1}s",
            bytes_a.len(),
            if validate_ok { "passed" } else { "FAILED" }
        ),
    );
}
