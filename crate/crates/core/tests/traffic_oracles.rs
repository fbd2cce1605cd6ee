//! Traffic-model fits and samplers checked against independent oracles.

mod common;

use common::{bisect_alpha, normal_quantile, truncated_pareto_mean_numeric};
use plcfront::seed::rng_for;
use plcfront::simulator::offered_average;
use plcfront::traffic::{
    fit_duration_distribution, fit_size_distribution, generate_cell_sessions, sample_interarrival, DurationQuantiles,
    SessionClass, SizeQuantiles, TrafficModel,
};
use plcfront::SimulationConfig;

fn model() -> TrafficModel {
    TrafficModel::from_config(&SimulationConfig::default()).unwrap()
}

// Frozen from the oracles in `common` (bisection on the Lorenz share,
// quadrature-based normal quantile).
const ALPHA: f64 = 1.047_951_637_144_692;
const XM_BITS: f64 = 2_152.846_716_730_986;
const Z_080: f64 = 0.841_621_233_572_914_3;
const Z_0999: f64 = 3.090_232_306_167_813;

#[test]
fn size_fit_matches_bisection_oracle() {
    let alpha = bisect_alpha(0.1, 0.9);
    assert!((alpha - ALPHA).abs() < 1e-10, "{alpha}");
    let xm = 10_000.0 * 0.2f64.powf(1.0 / alpha);
    assert!((xm - XM_BITS).abs() < 1e-6, "{xm}");

    let (a, x) = fit_size_distribution(SizeQuantiles::default()).unwrap();
    assert!((a - ALPHA).abs() < 1e-10);
    assert!((x - XM_BITS).abs() < 1e-6);
    assert!((a - 1.0480).abs() < 0.0005 && (x - 2153.0).abs() < 2.0);
}

#[test]
fn duration_fit_matches_quantile_oracle() {
    let z_short = normal_quantile(0.8);
    let z_long = normal_quantile(0.999);
    assert!((z_short - Z_080).abs() < 1e-9, "{z_short}");
    assert!((z_long - Z_0999).abs() < 1e-9, "{z_long}");

    let sigma = (200f64.ln() - 11f64.ln()) / (Z_0999 - Z_080);
    let mu = 11f64.ln() - Z_080 * sigma;
    let (m, s) = fit_duration_distribution(DurationQuantiles::default()).unwrap();
    assert!((m - mu).abs() < 1e-9 && (s - sigma).abs() < 1e-9);
    assert!((m - 1.3123).abs() < 0.001 && (s - 1.2899).abs() < 0.001, "{m} {s}");
}

#[test]
fn truncated_mean_closed_form_matches_quadrature() {
    let m = model();
    let numeric = truncated_pareto_mean_numeric(m.pareto_alpha, m.pareto_xm_bits, m.volume_cap_bits);
    let closed = m.truncated_volume_mean();
    assert!((closed - numeric).abs() / numeric < 1e-8, "{closed} vs {numeric}");
    // untruncated mean alpha·xm/(alpha-1) ≈ 47.0 kb; the cap removes over half of it
    let untruncated = m.pareto_alpha * m.pareto_xm_bits / (m.pareto_alpha - 1.0);
    assert!((untruncated - 47_000.0).abs() < 100.0, "{untruncated}");
    assert!(closed < 0.5 * untruncated);
}

#[test]
fn sampled_volumes_and_durations_reproduce_quantiles() {
    let m = model();
    let mut rng = rng_for(2024, &[1]);
    let n = 10_000_000usize;
    let (mut small, mut sum) = (0usize, 0.0);
    let (mut short, mut long) = (0usize, 0usize);
    let mut durations = Vec::with_capacity(n);
    for _ in 0..n {
        let v = m.sample_volume(&mut rng);
        sum += v;
        if v < 10_000.0 {
            small += 1;
        }
        let d = m.sample_data_duration(&mut rng);
        if d < 11.0 {
            short += 1;
        }
        if d > 200.0 {
            long += 1;
        }
        durations.push(d);
    }
    let n_f = n as f64;
    assert!((small as f64 / n_f - 0.8).abs() < 0.01);
    assert!((short as f64 / n_f - 0.8).abs() < 0.005);
    assert!((long as f64 / n_f - 0.001).abs() < 0.0005);

    let mean = sum / n_f;
    let analytic = m.truncated_volume_mean();
    assert!((mean - analytic).abs() / analytic < 0.10, "{mean} vs {analytic}");

    durations.sort_by(f64::total_cmp);
    let median = durations[n / 2];
    assert!((median - m.lognorm_mu.exp()).abs() < 0.02, "{median}");
}

#[test]
fn interarrival_mean() {
    let mut rng = rng_for(31, &[]);
    let n = 1_000_000;
    let mean = (0..n).map(|_| sample_interarrival(&mut rng, 10.0)).sum::<f64>() / n as f64;
    assert!((mean - 10.0).abs() < 0.05, "{mean}");
}

#[test]
fn voice_duration_mean() {
    let m = model();
    let mut rng = rng_for(32, &[]);
    let n = 1_000_000;
    let mean = (0..n)
        .map(|_| m.sample_voice_session(&mut rng, 0, 0.0).duration_s)
        .sum::<f64>()
        / n as f64;
    assert!((mean - 100.0).abs() < 0.5, "{mean}");
}

#[test]
fn class_mix_follows_data_fraction() {
    let m = model();
    let mut rng = rng_for(33, &[]);
    let sessions = generate_cell_sessions(&mut rng, &m, 0, 1e6);
    let data = sessions.iter().filter(|s| s.class == SessionClass::Data).count();
    let frac = data as f64 / sessions.len() as f64;
    // ~10^5 draws, sd ≈ 0.0005
    assert!((frac - 0.97).abs() < 0.003, "{frac}");
}

#[test]
fn session_counts_follow_poisson_mean() {
    let m = model();
    let total: usize = (0..1000)
        .map(|c| generate_cell_sessions(&mut rng_for(34, &[c]), &m, c as usize, 3600.0).len())
        .sum();
    let mean = total as f64 / 1000.0;
    // sd of the mean = sqrt(360/1000) ≈ 0.6
    assert!((mean - 360.0).abs() < 2.0, "{mean}");
}

#[test]
fn long_run_offered_rate_per_cell() {
    let m = model();
    let horizon = 1e5;
    let cells = 20;
    let per_cell: f64 = (0..cells)
        .map(|c| {
            let s = generate_cell_sessions(&mut rng_for(35, &[c]), &m, c as usize, horizon);
            offered_average(&s, 1.0, horizon)
        })
        .sum::<f64>()
        / cells as f64;
    let expected = m.offered_rate_per_cell();
    assert!((per_cell - expected).abs() / expected < 0.15, "{per_cell} vs {expected}");
}
