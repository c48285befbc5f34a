//! Simulator-vs-analytics coverage over an intensity grid: across 3
//! pattern/error configurations and a 10-point lambda grid each, the
//! analytic success probability must land inside the 95% Wilson interval in
//! at least 27 of 30 cells (binomial slack on nominal coverage).

use beamnet::error_models::OrientationErrorModel;
use beamnet::link::{success_general, NetworkParams};
use beamnet::patterns::RadiationPattern;
use beamnet::simulate::{simulate_success, SimConfig};

#[test]
fn analytic_inside_wilson_interval_on_lambda_grid() {
    let hn3 = OrientationErrorModel::truncated_half_normal(3f64.to_radians()).unwrap();
    // (pattern, error, lambda range, window): windows sized so the torus
    // truncation bias stays well under the interval half-width at n = 2e4
    let configs: Vec<(&str, RadiationPattern, OrientationErrorModel, f64, f64, f64)> = vec![
        (
            "omni/zero",
            RadiationPattern::omni(),
            OrientationErrorModel::zero(),
            1e-7,
            1e-6,
            30_000.0,
        ),
        (
            "ideal20,g2=0/hn3",
            RadiationPattern::ideal_sector(20f64.to_radians(), 0.0).unwrap(),
            hn3.clone(),
            1e-6,
            3e-5,
            8_000.0,
        ),
        (
            "ideal20,g2=0.1/hn3",
            RadiationPattern::ideal_sector(20f64.to_radians(), 0.1).unwrap(),
            hn3,
            1e-6,
            1e-5,
            12_000.0,
        ),
    ];
    let mut hits = 0;
    let mut total = 0;
    for (ci, (name, pattern, error, lam_min, lam_max, window)) in configs.iter().enumerate() {
        for i in 0..10 {
            let t = i as f64 / 9.0;
            let lam = (lam_min.ln() + t * (lam_max.ln() - lam_min.ln())).exp();
            let params = NetworkParams::defaults_with_lambda(lam);
            let analytic = success_general(&params, pattern, error).unwrap();
            let cfg = SimConfig::new(*window, 20_000, 7_000 + (ci * 10 + i) as u64);
            let est = simulate_success(&params, pattern, error, &cfg).unwrap();
            total += 1;
            if est.contains(analytic) {
                hits += 1;
            } else {
                println!(
                    "miss: {name} lambda={lam:.3e}: analytic {analytic:.5} vs [{:.5}, {:.5}]",
                    est.ci_low, est.ci_high
                );
            }
        }
    }
    assert_eq!(total, 30);
    assert!(hits >= 27, "analytic inside CI in only {hits}/30 cells");
}
