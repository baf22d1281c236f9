//! End-to-end acceptance checks, one test per criterion.
//!
//! Each test prints a single `PASS`/`FAIL` line (visible with
//! `cargo test --test acceptance -- --nocapture`) and then asserts, so a
//! failing criterion is both reported and fatal.  All randomness is seeded;
//! every run reproduces the same numbers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ewa_core::aggregation::{exp_tilt, gibbs_weights, variational_gap, WeightVector};
use ewa_core::estimators::{EstimatorCollection, TraceStats};
use ewa_core::harness::{exp_moment_check, run_experiment, ExperimentReport};
use ewa_core::linalg::{dist_sq, Basis};
use ewa_core::noise::{mgf_check, random_unit_directions, trial_rng, NoiseKind, NoiseModel};
use ewa_core::risk::{gamma, gaussian_epsilon, sure, AggregationConfig};
use ewa_core::signal::{SignalKind, SignalSpec};
use ewa_core::EwaError;

fn report(criterion: u32, title: &str, pass: bool) {
    println!(
        "acceptance {criterion:2} ({title}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance criterion {criterion} failed: {title}");
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1.0_f64.max(a.abs()).max(b.abs())
}

/// The seven-rank nested-projection collection shared by the oracle
/// criteria: cosine basis, uniform prior, V = 1.
fn oracle_collection(n: usize) -> EstimatorCollection {
    EstimatorCollection::nested_projections(Basis::cosine(n), &[1, 2, 4, 8, 16, 32, 64]).unwrap()
}

fn oracle_signal(n: usize) -> SignalSpec {
    SignalSpec::new(
        SignalKind::Sinusoid {
            amplitude: 3.0,
            frequency: 4,
        },
        n,
    )
    .unwrap()
}

fn oracle_run(cfg: &AggregationConfig, master_seed: u64) -> ExperimentReport {
    let n = 64;
    let noise = NoiseModel::new(NoiseKind::Gaussian, 1.0).unwrap();
    run_experiment(
        &oracle_signal(n),
        &oracle_collection(n),
        &noise,
        cfg,
        1000,
        master_seed,
    )
    .unwrap()
}

#[test]
fn criterion_01_gamma_closed_form_at_the_weak_floor() {
    let mut pass = true;
    for sigma_sq in [0.25, 1.0, 4.0] {
        for v in [0.5, 1.0, 2.0] {
            let g = gamma(20.0 * sigma_sq * v, 1.0, sigma_sq, v).unwrap();
            pass &= close(g, 1.0 / (2.0 * v), 1e-12);
        }
    }
    report(1, "gamma(20σ²V, δ=1) = 1/(2V)", pass);
}

#[test]
fn criterion_02_delta_endpoints_match_the_specialised_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut pass = true;
    for _ in 0..100 {
        let sigma_sq = rng.random_range(0.25..4.0);
        let v: f64 = rng.random_range(0.5..2.0);
        let c = rng.random_range(0.0..2.0);
        let stats = TraceStats {
            trace: rng.random_range(0.0..10.0),
            trace_sq: rng.random_range(0.0..10.0),
            spec_norm: v.min(1.0),
        };

        // Sharp endpoint: pen = 4σ⁴/(β−4σ²V)·(1+C̃²/σ²)·tr(P²) and
        // price = 2σ²(tr(P) + 2C̃²·tr(P²)/(β−4σ²V)).
        let beta = 4.0 * sigma_sq * v * rng.random_range(1.1..5.0);
        let cfg = AggregationConfig::subgaussian(beta, 0.0, 0.05, sigma_sq, v).unwrap();
        let base = beta - 4.0 * sigma_sq * v;
        pass &= close(
            cfg.rule().min_penalty(stats, &cfg, c),
            4.0 * sigma_sq * sigma_sq / base * (1.0 + c * c / sigma_sq) * stats.trace_sq,
            1e-12,
        );
        pass &= close(
            cfg.rule().price(stats, &cfg, c),
            2.0 * sigma_sq * (stats.trace + 2.0 / base * c * c * stats.trace_sq),
            1e-12,
        );

        // Weak endpoint: pen = 4σ⁴/(β−4σ²V)·tr(P²) and price = 2σ²·tr(P).
        let beta = 20.0 * sigma_sq * v * rng.random_range(1.0..3.0);
        let cfg = AggregationConfig::subgaussian(beta, 1.0, 0.05, sigma_sq, v).unwrap();
        let base = beta - 4.0 * sigma_sq * v;
        pass &= close(
            cfg.rule().min_penalty(stats, &cfg, c),
            4.0 * sigma_sq * sigma_sq / base * stats.trace_sq,
            1e-12,
        );
        pass &= close(
            cfg.rule().price(stats, &cfg, c),
            2.0 * sigma_sq * stats.trace,
            1e-12,
        );
    }
    report(2, "δ-endpoint penalties and prices", pass);
}

#[test]
fn criterion_03_gibbs_measure_attains_the_variational_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut pass = true;
    for _ in 0..100 {
        let h: Vec<f64> = (0..20).map(|_| rng.random_range(-5.0..5.0)).collect();
        let raw: Vec<f64> = (0..20).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let pi: Vec<f64> = raw.iter().map(|x| x / total).collect();

        let tilt = exp_tilt(&pi, &h).unwrap();
        let at_tilt = variational_gap(&h, &pi, tilt.weights()).unwrap();
        pass &= at_tilt.abs() <= 1e-10;

        let raw: Vec<f64> = (0..20).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let candidate: Vec<f64> = raw.iter().map(|x| x / total).collect();
        pass &= variational_gap(&h, &pi, &candidate).unwrap() >= -1e-12;
    }
    report(3, "Gibbs exactness of the variational gap", pass);
}

#[test]
fn criterion_04_risk_estimate_is_unbiased_under_gaussian_noise() {
    let n = 64;
    let collection = EstimatorCollection::nested_projections(Basis::cosine(n), &[8]).unwrap();
    let est = &collection.items()[0];
    let f0 = oracle_signal(n).generate();
    let noise = NoiseModel::new(NoiseKind::Gaussian, 1.0).unwrap();
    let trials: u64 = 100_000;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 1..=trials {
        let w = noise.sample(n, &mut trial_rng(1004, i));
        let y: Vec<f64> = f0.iter().zip(&w).map(|(a, b)| a + b).collect();
        let d = sure(&y, est, 1.0).unwrap() - dist_sq(&f0, &est.apply(&y).unwrap());
        let shift = d - mean;
        mean += shift / i as f64;
        m2 += shift * (d - mean);
    }
    let stderr = (m2 / (trials as f64 * (trials - 1) as f64)).sqrt();
    report(
        4,
        "SURE unbiasedness over 1e5 trials",
        mean.abs() <= 3.0 * stderr,
    );
}

#[test]
fn criterion_05_weak_regime_oracle_coverage() {
    let cfg = AggregationConfig::subgaussian(20.0, 1.0, 0.05, 1.0, 1.0).unwrap();
    let rep = oracle_run(&cfg, 1005);
    report(
        5,
        "weak-regime coverage ≥ 0.99 over 1000 trials",
        rep.empirical_coverage >= 0.99,
    );
}

#[test]
fn criterion_06_sharp_regime_oracle_coverage_with_unit_leading_constant() {
    let cfg = AggregationConfig::subgaussian(8.0, 0.0, 0.05, 1.0, 1.0).unwrap();
    let rep = oracle_run(&cfg, 1006);
    let mut pass = rep.empirical_coverage >= 0.99;
    // γ = 0: the winning bound must be exactly best-Dirac loss plus the
    // additive terms, with no inflation of the leading constant.
    for trial in &rep.trials {
        let b = &trial.per_t[trial.best_t];
        pass &= trial.gamma == 0.0
            && trial.nu_star.is_none()
            && close(trial.rhs, b.loss + b.penalty + b.price + b.kl_term, 1e-12);
    }
    report(6, "sharp-regime coverage with leading constant 1", pass);
}

#[test]
fn criterion_07_gaussian_projection_regime_coverage_and_epsilon() {
    let mut pass = true;

    // δ = 1 at β = 8σ² sits exactly on the boundary β = 4σ²(δ+1) and must
    // be rejected; the δ = 1 run uses the next admissible example
    // temperature β = 9σ² instead.
    pass &= matches!(
        AggregationConfig::gaussian_projection(8.0, 1.0, 0.05, 1.0, 1.0),
        Err(EwaError::TemperatureNotAboveGaussian { .. })
    );

    for (beta, delta, seed) in [(8.0, 0.0, 1007), (8.0, 0.5, 1008), (9.0, 1.0, 1009)] {
        let cfg = AggregationConfig::gaussian_projection(beta, delta, 0.05, 1.0, 1.0).unwrap();
        let eps = gaussian_epsilon(beta, delta, 1.0).unwrap();
        pass &= close(eps, 4.0 * delta / (beta - 4.0 * (delta + 1.0)), 1e-12);
        let rep = oracle_run(&cfg, seed);
        pass &= rep.empirical_coverage >= 0.99;
    }
    report(7, "Gaussian-projection coverage and ε formula", pass);
}

#[test]
fn criterion_08_mean_loss_stays_under_the_expectation_bound() {
    let configs = [
        AggregationConfig::subgaussian(20.0, 1.0, 0.05, 1.0, 1.0).unwrap(),
        AggregationConfig::subgaussian(8.0, 0.0, 0.05, 1.0, 1.0).unwrap(),
        AggregationConfig::gaussian_projection(8.0, 0.0, 0.05, 1.0, 1.0).unwrap(),
        AggregationConfig::gaussian_projection(8.0, 0.5, 0.05, 1.0, 1.0).unwrap(),
        AggregationConfig::gaussian_projection(9.0, 1.0, 0.05, 1.0, 1.0).unwrap(),
    ];
    let mut pass = true;
    for (i, cfg) in configs.iter().enumerate() {
        let rep = oracle_run(cfg, 1010 + i as u64);
        pass &= rep.mean_lhs <= rep.expectation_rhs;
    }
    report(8, "mean loss ≤ expectation-display bound", pass);
}

#[test]
fn criterion_09_exponential_moment_bounds() {
    let n = 16;
    let samples = 1_000_000;
    let signal = SignalSpec::new(
        SignalKind::Sinusoid {
            amplitude: 2.0,
            frequency: 2,
        },
        n,
    )
    .unwrap();
    let mut pass = true;

    // Projection form: orthogonal projections under Gaussian noise.
    let projections =
        EstimatorCollection::nested_projections(Basis::cosine(n), &[0, 1, 2, 4, 8, 16]).unwrap();
    let gaussian = NoiseModel::new(NoiseKind::Gaussian, 1.0).unwrap();
    let cfg = AggregationConfig::gaussian_projection(8.0, 0.0, 0.05, 1.0, 1.0).unwrap();
    for (i, pair) in [(2, 3), (3, 4), (2, 4), (0, 5), (4, 1)]
        .into_iter()
        .enumerate()
    {
        let rep = exp_moment_check(
            pair,
            &signal,
            &projections,
            &gaussian,
            &cfg,
            samples,
            2000 + i as u64,
        )
        .unwrap();
        pass &= rep.ok;
    }

    // General form: shrinkage smoothers under Rademacher noise, with the
    // γ-corrected statistic.
    let tents = EstimatorCollection::shrinkage_family(Basis::cosine(n), &[1, 2, 4, 8, 16]).unwrap();
    let rademacher = NoiseModel::new(NoiseKind::Rademacher, 1.0).unwrap();
    let cfg = AggregationConfig::subgaussian(20.0, 1.0, 0.05, 1.0, 1.0).unwrap();
    for (i, pair) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]
        .into_iter()
        .enumerate()
    {
        let rep = exp_moment_check(
            pair,
            &signal,
            &tents,
            &rademacher,
            &cfg,
            samples,
            2100 + i as u64,
        )
        .unwrap();
        pass &= rep.ok;
    }
    report(9, "exponential-moment bounds over 1e6 samples", pass);
}

#[test]
fn criterion_10_moment_generating_function_of_the_noise_models() {
    let n = 8;
    let samples = 1_000_000;
    let directions = random_unit_directions(n, 20, 3001);
    let mut pass = true;
    for kind in [
        NoiseKind::Gaussian,
        NoiseKind::Rademacher,
        NoiseKind::UniformBounded,
    ] {
        let model = NoiseModel::new(kind, 1.0).unwrap();
        let reports = mgf_check(&model, n, &directions, samples, 3002).unwrap();
        pass &= reports.iter().all(|r| r.ok);
    }

    // Rademacher along a coordinate axis: the empirical MGF concentrates at
    // cosh(1) ≈ 1.5431, visibly below the certified exp(1/2) ≈ 1.6487.
    let mut e1 = vec![0.0; n];
    e1[0] = 1.0;
    let model = NoiseModel::new(NoiseKind::Rademacher, 1.0).unwrap();
    let rep = mgf_check(&model, n, &[e1], samples, 3003).unwrap()[0];
    pass &= (rep.empirical - 1.0_f64.cosh()).abs() <= 0.01;
    pass &= rep.empirical < rep.bound && close(rep.bound, 0.5_f64.exp(), 1e-12);
    report(10, "sub-Gaussian MGF certificates", pass);
}

#[test]
fn criterion_11_temperature_limits_of_the_weights() {
    let risks = [3.0, 1.0, 2.0];
    let prior = [0.5, 0.3, 0.2];
    let cold = gibbs_weights(&risks, 1e-9, &prior).unwrap();
    let mut pass = cold.weights()[1] > 1.0 - 1e-6;
    let hot = gibbs_weights(&risks, 1e12, &prior).unwrap();
    let prior_vec = WeightVector::from_weights(&prior).unwrap();
    pass &= hot.total_variation(&prior_vec) <= 1e-6;
    report(11, "β → 0 and β → ∞ weight limits", pass);
}
