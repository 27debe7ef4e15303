//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the pinned tolerance it ran at. Run with `--nocapture` to see the lines.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use truncprice::dist::{ContinuousDensity, Outcome, PayoutDistribution};
use truncprice::options::{divergence_table, truncated_price, BoundMode, OptionSide, OptionSpec};
use truncprice::pricing::{
    buyer_max_price, find_n_epsilon, truncated_expectation, BuyerProfile, Price,
};
use truncprice::stp::{
    feller_fair_fee, median_session_mean, verify_decomposition, SimulationConfig,
};
use truncprice::{quad, Error};

fn pass(criterion: u32, detail: &str) {
    println!("acceptance criterion {criterion}: PASS ({detail})");
}

#[test]
fn criterion_1_st_petersburg_truncation_exact() {
    let dist = PayoutDistribution::st_petersburg();
    let epsilon = 2f64.powi(-28);
    let started = Instant::now();
    let t = truncated_expectation(&dist, epsilon).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(t.n_epsilon, 28);
    assert_eq!(t.e_epsilon, 28.0);
    assert!(
        elapsed.as_micros() < 1000,
        "took {elapsed:?}, budget is 1 ms"
    );
    pass(1, &format!("N = 28, E = 28 exact in {elapsed:?}"));
}

fn finite_test_distributions() -> Vec<PayoutDistribution> {
    let p6 = 1.0 / 6.0;
    let mut dists = vec![
        PayoutDistribution::finite(&[(1.0, 0.5), (2.0, 0.5)]).unwrap(),
        PayoutDistribution::finite(&[(1.0, 0.3), (1.0, 0.2), (4.0, 0.5)]).unwrap(),
        PayoutDistribution::finite(&[
            (1.0, p6),
            (2.0, p6),
            (3.0, p6),
            (4.0, p6),
            (5.0, p6),
            (6.0, p6),
        ])
        .unwrap(),
        // jackpot-style: tiny win probability, large prize
        PayoutDistribution::finite(&[(0.0, 1.0 - 1.0 / 292.2e6), (171e6, 1.0 / 292.2e6)]).unwrap(),
    ];
    for k in 1..=8 {
        dists.push(PayoutDistribution::lottery(k).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(802);
    for _ in 0..50 {
        dists.push(random_finite_dist(&mut rng));
    }
    dists
}

fn random_finite_dist(rng: &mut ChaCha8Rng) -> PayoutDistribution {
    let len = rng.random_range(1..=12usize);
    let weights: Vec<f64> = (0..len).map(|_| rng.random_range(1e-3..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let pairs: Vec<(f64, f64)> = weights
        .iter()
        .map(|w| (rng.random_range(0.0..1000.0), w / total))
        .collect();
    PayoutDistribution::finite(&pairs).unwrap()
}

#[test]
fn criterion_2_rule_degenerates_to_fair_price() {
    let profile = BuyerProfile::new(0.0, 1.0).unwrap();
    let dists = finite_test_distributions();
    for (i, dist) in dists.iter().enumerate() {
        let expected = dist.expectation().finite().expect("finite support");
        let max = match buyer_max_price(dist, &profile) {
            Price::Finite(v) => v,
            Price::Unbounded => panic!("finite distribution priced unbounded"),
        };
        assert!(
            (max - expected).abs() <= 1e-12 * expected.abs().max(1.0),
            "dist #{i}: buyer max {max} vs expectation {expected}"
        );
    }
    pass(
        2,
        &format!(
            "epsilon = 0, k = 1 reproduces E(X) to 1e-12 relative on {} distributions",
            dists.len()
        ),
    );
}

#[test]
fn criterion_3_lottery_fairness_and_decomposition() {
    let started = Instant::now();
    for k in 1..=50 {
        let e = PayoutDistribution::lottery(k).unwrap().expectation();
        assert_eq!(e, Price::Finite(1.0), "lottery {k}");
    }
    let report = verify_decomposition(50).unwrap();
    assert_eq!(report.mismatches, 0);
    assert_eq!(report.sequences_checked, 50);
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    pass(
        3,
        &format!("50 exact lottery expectations, depth-50 decomposition clean in {elapsed:?}"),
    );
}

#[test]
fn criterion_4_feller_fee_and_median_session_mean() {
    assert_eq!(feller_fair_fee(1024), 10.0);
    assert_eq!(feller_fair_fee(2048), 11.0);
    let started = Instant::now();
    let base = SimulationConfig::new(1770, 1024).unwrap();
    let median = median_session_mean(&base, 200);
    let elapsed = started.elapsed();
    assert!(
        (7.0..=14.0).contains(&median),
        "median session mean {median} outside [7, 14]"
    );
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "took {elapsed:?}, budget 30 s"
    );
    pass(
        4,
        &format!("fees exact; median of 200 session means = {median} in {elapsed:?}"),
    );
}

#[test]
fn criterion_5_unbounded_price_theorem() {
    let dist = PayoutDistribution::st_petersburg();
    assert_eq!(dist.expectation(), Price::Unbounded);
    assert!(matches!(
        find_n_epsilon(&dist, 0.0),
        Err(Error::NoFiniteTruncation { .. })
    ));
    pass(
        5,
        "expectation unbounded and epsilon = 0 has no finite truncation",
    );
}

/// Antiderivative of (x - K)/(pi (1 + x^2)) between K and U.
fn cauchy_call_closed_form(k: f64, u: f64) -> f64 {
    use std::f64::consts::PI;
    ((1.0 + u * u).ln() - (1.0 + k * k).ln()) / (2.0 * PI) - (k / PI) * (u.atan() - k.atan())
}

#[test]
fn criterion_6_cauchy_option_oracle_grid() {
    let density = ContinuousDensity::standard_cauchy();
    let started = Instant::now();
    let mut checked = 0;
    for &strike in &[0.5, 1.0, 2.0] {
        for &upper in &[10.0, 100.0, 1000.0] {
            for &(rate, maturity) in &[(0.0, 0.0), (0.05, 1.0)] {
                let spec = OptionSpec::new(1.0, strike, rate, maturity, OptionSide::Call).unwrap();
                let mode = BoundMode::epsilon_quantile(density.survival(upper)).unwrap();
                let priced = truncated_price(&density, &spec, &mode).unwrap();
                let truth =
                    (-rate * maturity).exp() * cauchy_call_closed_form(strike, priced.bounds.1);
                let rel = (priced.price - truth).abs() / truth.abs();
                assert!(
                    rel < 1e-8,
                    "K = {strike}, U = {upper}, rT = {}: relative error {rel}",
                    rate * maturity
                );
                checked += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    pass(
        6,
        &format!("{checked} grid points within 1e-8 relative of the antiderivative in {elapsed:?}"),
    );
}

#[test]
fn criterion_7_divergence_dichotomy() {
    use std::f64::consts::PI;
    let cauchy = ContinuousDensity::standard_cauchy();
    let table = divergence_table(&cauchy, 0.0, &[1e3, 1e6, 1e9]).unwrap();
    let expected_gap = 1e3f64.ln() / PI;
    for pair in table.windows(2) {
        let gap = pair[1].partial_price - pair[0].partial_price;
        assert!(
            (gap - expected_gap).abs() / expected_gap < 0.01,
            "Cauchy gap {gap} vs {expected_gap}"
        );
    }

    let gaussian = ContinuousDensity::standard_gaussian();
    let gtable = divergence_table(&gaussian, 0.0, &[10.0, 20.0, 40.0]).unwrap();
    for pair in gtable.windows(2) {
        let delta = (pair[1].partial_price - pair[0].partial_price).abs();
        assert!(delta < 1e-12, "Gaussian table still moving by {delta}");
    }
    pass(
        7,
        &format!(
            "Cauchy gaps track {expected_gap:.4} within 1%; Gaussian entries frozen past M = 10"
        ),
    );
}

/// Brute-force truncation oracle, independent of the library path: scans
/// every truncation point with left-to-right tail sums.
fn oracle_truncation(outcomes: &[Outcome], epsilon: f64) -> (u64, f64) {
    let len = outcomes.len();
    let mut n_eps = len;
    for n in 1..=len {
        let tail: f64 = outcomes[n..].iter().map(|o| o.probability).sum();
        if tail <= epsilon {
            n_eps = n;
            break;
        }
    }
    let e_eps: f64 = outcomes[..n_eps]
        .iter()
        .map(|o| o.payout * o.probability)
        .sum();
    (n_eps as u64, e_eps)
}

#[test]
fn criterion_8a_truncation_properties_against_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4188);
    for case in 0..1000 {
        let dist = random_finite_dist(&mut rng);
        let outcomes = dist.outcomes().unwrap().to_vec();
        let eps: f64 = match case % 4 {
            0 => 0.0,
            1 => rng.random_range(0.0..1.0),
            2 => rng.random_range(1e-9..1e-3),
            _ => 1.0,
        };
        let (oracle_n, oracle_e) = oracle_truncation(&outcomes, eps);
        let n = find_n_epsilon(&dist, eps).unwrap();
        assert_eq!(n, oracle_n, "case {case}");
        let t = truncated_expectation(&dist, eps).unwrap();
        assert!(
            (t.e_epsilon - oracle_e).abs() <= 1e-12 * oracle_e.abs().max(1.0),
            "case {case}: {} vs oracle {oracle_e}",
            t.e_epsilon
        );

        // minimality
        assert!(dist.tail_mass(n as usize).unwrap() <= eps);
        if n > 1 {
            assert!(dist.tail_mass(n as usize - 1).unwrap() > eps);
        }

        // monotonicity against a second epsilon
        let eps2: f64 = rng.random_range(0.0..1.0);
        let (lo, hi) = if eps <= eps2 {
            (eps, eps2)
        } else {
            (eps2, eps)
        };
        let t_lo = truncated_expectation(&dist, lo).unwrap();
        let t_hi = truncated_expectation(&dist, hi).unwrap();
        assert!(t_lo.n_epsilon >= t_hi.n_epsilon, "case {case}");
        assert!(t_lo.e_epsilon >= t_hi.e_epsilon, "case {case}");
    }
    pass(
        8,
        "1000 randomized truncations match the brute-force oracle",
    );
}

#[test]
fn criterion_8b_quadrature_error_estimates_bound_true_error() {
    let tol = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(90210);
    for case in 0..100 {
        let a: f64 = rng.random_range(-3.0..0.0);
        let b: f64 = a + rng.random_range(0.2..5.0);
        let (value, estimate, truth) = match case % 4 {
            0 => {
                // quintic polynomial
                let c: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
                let r = quad::integrate(
                    |x| c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * (c[4] + x * c[5])))),
                    a,
                    b,
                    tol,
                )
                .unwrap();
                let anti = |x: f64| {
                    x * (c[0]
                        + x * (c[1] / 2.0
                            + x * (c[2] / 3.0
                                + x * (c[3] / 4.0 + x * (c[4] / 5.0 + x * c[5] / 6.0)))))
                };
                (r.value, r.error_estimate, anti(b) - anti(a))
            }
            1 => {
                let amp: f64 = rng.random_range(0.1..2.0);
                let freq: f64 = rng.random_range(0.1..6.0);
                let r = quad::integrate(|x| amp * (freq * x).sin(), a, b, tol).unwrap();
                let anti = |x: f64| -amp / freq * (freq * x).cos();
                (r.value, r.error_estimate, anti(b) - anti(a))
            }
            2 => {
                let c: f64 = rng.random_range(-2.0..2.0);
                let c = if c.abs() < 1e-3 { 1.0 } else { c };
                let r = quad::integrate(|x| (c * x).exp(), a, b, tol).unwrap();
                let anti = |x: f64| (c * x).exp() / c;
                (r.value, r.error_estimate, anti(b) - anti(a))
            }
            _ => {
                let scale: f64 = rng.random_range(0.2..3.0);
                let center: f64 = rng.random_range(-2.0..2.0);
                let r = quad::integrate(|x| scale / (1.0 + (x - center) * (x - center)), a, b, tol)
                    .unwrap();
                let anti = |x: f64| scale * (x - center).atan();
                (r.value, r.error_estimate, anti(b) - anti(a))
            }
        };
        let error = (value - truth).abs();
        assert!(
            error <= tol.max(estimate) + 1e-13,
            "case {case}: true error {error}, estimate {estimate}"
        );
    }
    pass(
        8,
        "100 analytic integrals stay within max(tol, error estimate)",
    );
}
