//! St. Petersburg game laboratory: seeded simulation, the per-play fair fee
//! for a fixed number of plays, the two-banker inconsistency demo, and an
//! exhaustive check that one game play decomposes into the infinite lottery
//! set.
//!
//! All randomness comes from a ChaCha8 stream seeded explicitly, so every
//! report is reproducible from the (seed, generator) pair it embeds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dist::PayoutDistribution;
use crate::error::{Error, Result};

/// Name of the PRNG stream embedded in every report.
pub const GENERATOR_NAME: &str = "chacha8";

/// Hard ceiling on tosses per play; payout `2^62` stays exact in `u64`.
pub const MAX_TOSS_CAP: u32 = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimulationConfig {
    pub seed: u64,
    pub num_plays: u64,
    pub max_tosses: u32,
}

impl SimulationConfig {
    /// Config with the default toss cap of [`MAX_TOSS_CAP`].
    pub fn new(seed: u64, num_plays: u64) -> Result<Self> {
        Self::with_max_tosses(seed, num_plays, MAX_TOSS_CAP)
    }

    pub fn with_max_tosses(seed: u64, num_plays: u64, max_tosses: u32) -> Result<Self> {
        if num_plays == 0 {
            return Err(Error::InvalidParameter(
                "num_plays must be at least 1".into(),
            ));
        }
        if max_tosses == 0 || max_tosses > MAX_TOSS_CAP {
            return Err(Error::InvalidParameter(format!(
                "max_tosses = {max_tosses} must be in 1..={MAX_TOSS_CAP}"
            )));
        }
        Ok(Self {
            seed,
            num_plays,
            max_tosses,
        })
    }
}

/// Outcome of a single play.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Play {
    pub payout: u64,
    pub tosses: u32,
    /// True when no head appeared within `max_tosses`; the payout is then
    /// pinned at `2^max_tosses` and the hit is counted, not discarded.
    pub capped: bool,
}

/// Tosses a fair coin until the first head (or the cap) and pays `2^n`.
pub fn simulate_play<R: Rng + ?Sized>(rng: &mut R, max_tosses: u32) -> Play {
    let mut tosses = 1u32;
    loop {
        if rng.random::<bool>() {
            return Play {
                payout: 1u64 << tosses,
                tosses,
                capped: false,
            };
        }
        if tosses >= max_tosses {
            return Play {
                payout: 1u64 << max_tosses,
                tosses: max_tosses,
                capped: true,
            };
        }
        tosses += 1;
    }
}

/// Aggregate of one seeded session.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionReport {
    pub seed: u64,
    pub generator: &'static str,
    pub num_plays: u64,
    pub max_tosses: u32,
    pub total_payout: u128,
    pub mean_payout: f64,
    pub max_single_payout: u64,
    pub toss_cap_hits: u64,
}

/// Runs `num_plays` independent plays; identical configs produce identical
/// reports.
pub fn simulate_session(config: &SimulationConfig) -> SessionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut total: u128 = 0;
    let mut max_single = 0u64;
    let mut cap_hits = 0u64;
    for _ in 0..config.num_plays {
        let play = simulate_play(&mut rng, config.max_tosses);
        total += play.payout as u128;
        max_single = max_single.max(play.payout);
        cap_hits += play.capped as u64;
    }
    SessionReport {
        seed: config.seed,
        generator: GENERATOR_NAME,
        num_plays: config.num_plays,
        max_tosses: config.max_tosses,
        total_payout: total,
        mean_payout: total as f64 / config.num_plays as f64,
        max_single_payout: max_single,
        toss_cap_hits: cap_hits,
    }
}

/// Feller's empirically fair fee per play when exactly `num_plays` plays
/// happen: `log2(num_plays)`.
pub fn feller_fair_fee(num_plays: u64) -> f64 {
    (num_plays as f64).log2()
}

/// Session mean payouts across `sessions` seeds derived from `base`
/// (session `i` uses `base.seed + i`).
pub fn session_means(base: &SimulationConfig, sessions: u64) -> Vec<f64> {
    (0..sessions)
        .map(|i| {
            let config = SimulationConfig {
                seed: base.seed.wrapping_add(i),
                ..*base
            };
            simulate_session(&config).mean_payout
        })
        .collect()
}

/// Median of [`session_means`]; the session mean under heavy tails is
/// dominated by rare large payouts, so the median is the stable summary.
pub fn median_session_mean(base: &SimulationConfig, sessions: u64) -> f64 {
    let mut means = session_means(base, sessions);
    means.sort_by(f64::total_cmp);
    let n = means.len();
    if n % 2 == 1 {
        means[n / 2]
    } else {
        0.5 * (means[n / 2 - 1] + means[n / 2])
    }
}

/// Side-by-side fees for splitting plays across two bankers versus playing
/// the combined count at one banker, plus the seeded empirical winnings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoBankerReport {
    pub banker_a: SessionReport,
    pub banker_b: SessionReport,
    pub fee_per_play_a: f64,
    pub fee_per_play_b: f64,
    pub total_fee_separate: f64,
    pub combined_plays: u64,
    pub fee_per_play_combined: f64,
    pub total_fee_combined: f64,
    pub total_winnings: u128,
}

/// Prices the same plays two ways: per-banker fees at each banker's play
/// count, and the fee had all plays happened at a single banker. The two
/// disagree, which is the inconsistency in tying the fee to the play count.
pub fn two_banker_demo(a: &SimulationConfig, b: &SimulationConfig) -> TwoBankerReport {
    let banker_a = simulate_session(a);
    let banker_b = simulate_session(b);
    let fee_per_play_a = feller_fair_fee(a.num_plays);
    let fee_per_play_b = feller_fair_fee(b.num_plays);
    let combined_plays = a.num_plays + b.num_plays;
    let fee_per_play_combined = feller_fair_fee(combined_plays);
    let total_winnings = banker_a.total_payout + banker_b.total_payout;
    TwoBankerReport {
        banker_a,
        banker_b,
        fee_per_play_a,
        fee_per_play_b,
        total_fee_separate: a.num_plays as f64 * fee_per_play_a
            + b.num_plays as f64 * fee_per_play_b,
        combined_plays,
        fee_per_play_combined,
        total_fee_combined: combined_plays as f64 * fee_per_play_combined,
        total_winnings,
    }
}

/// Payout of one St. Petersburg play on an explicit toss sequence
/// (`true` = head): `2^n` for the first head at position `n`, if any.
pub fn st_petersburg_payout(bits: &[bool]) -> Option<u64> {
    bits.iter().position(|&b| b).map(|i| 1u64 << (i as u32 + 1))
}

/// Payout of lottery `k` on the same sequence: `2^k` exactly when the first
/// `k` bits are `k - 1` tails followed by a head.
pub fn lottery_payout(k: u32, bits: &[bool]) -> u64 {
    let k = k as usize;
    if k == 0 || bits.len() < k {
        return 0;
    }
    if bits[..k - 1].iter().all(|&b| !b) && bits[k - 1] {
        1u64 << k
    } else {
        0
    }
}

/// Exhaustive decomposition check up to `depth`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub depth: u32,
    pub sequences_checked: u64,
    pub mismatches: u64,
    pub lottery_expectations: Vec<f64>,
}

/// Checks, for every first-head position `n` in `1..=depth`, that the game
/// payout `2^n` equals the summed payouts of lotteries `1..=depth` on the
/// same bit prefix, and that every lottery's expectation is exactly 1.
///
/// The game result depends only on the bits up to the first head, so one
/// representative sequence per position covers all sequences; integer
/// power-of-two arithmetic keeps every comparison exact.
pub fn verify_decomposition(depth: u32) -> Result<DecompositionReport> {
    if depth == 0 || depth > 50 {
        return Err(Error::InvalidParameter(format!(
            "depth = {depth} must be in 1..=50"
        )));
    }
    let mut mismatches = 0u64;
    for head_pos in 1..=depth as usize {
        let bits: Vec<bool> = (1..=depth as usize).map(|i| i == head_pos).collect();
        let game = st_petersburg_payout(&bits).expect("sequence contains a head");
        let lotteries: u64 = (1..=depth).map(|k| lottery_payout(k, &bits)).sum();
        if lotteries != game {
            mismatches += 1;
        }
    }
    let lottery_expectations: Vec<f64> = (1..=depth)
        .map(|k| {
            PayoutDistribution::lottery(k)
                .expect("depth bounded")
                .expectation()
                .finite()
                .expect("lottery expectation is finite")
        })
        .collect();
    mismatches += lottery_expectations.iter().filter(|&&e| e != 1.0).count() as u64;

    Ok(DecompositionReport {
        depth,
        sequences_checked: depth as u64,
        mismatches,
        lottery_expectations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn play_payout_is_power_of_two_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let play = simulate_play(&mut rng, 62);
            assert!(play.payout.is_power_of_two());
            assert!(play.payout >= 2);
            assert!(play.payout <= 1u64 << 62);
            assert_eq!(play.payout, 1u64 << play.tosses);
        }
    }

    #[test]
    fn first_head_frequency_matches_fair_coin() {
        let mut rng = ChaCha8Rng::seed_from_u64(424242);
        let n = 1_000_000u64;
        let hits = (0..n)
            .filter(|_| simulate_play(&mut rng, 62).payout == 2)
            .count() as f64;
        let freq = hits / n as f64;
        assert!((0.498..=0.502).contains(&freq), "freq = {freq}");
    }

    #[test]
    fn toss_cap_pins_payout() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let play = simulate_play(&mut rng, 1);
            assert_eq!(play.payout, 2);
            assert_eq!(play.tosses, 1);
        }
    }

    #[test]
    fn session_is_deterministic() {
        let config = SimulationConfig::new(7, 1024).unwrap();
        let a = simulate_session(&config);
        let b = simulate_session(&config);
        assert_eq!(a, b);
        assert_eq!(a.mean_payout, a.total_payout as f64 / a.num_plays as f64);
    }

    #[test]
    fn single_play_session_mean_is_the_payout() {
        let config = SimulationConfig::new(99, 1).unwrap();
        let report = simulate_session(&config);
        assert_eq!(report.mean_payout, report.total_payout as f64);
        assert_eq!(report.max_single_payout as u128, report.total_payout);
    }

    #[test]
    fn config_validation() {
        assert!(SimulationConfig::new(0, 0).is_err());
        assert!(SimulationConfig::with_max_tosses(0, 1, 0).is_err());
        assert!(SimulationConfig::with_max_tosses(0, 1, 63).is_err());
        assert!(SimulationConfig::with_max_tosses(0, 1, 62).is_ok());
    }

    #[test]
    fn feller_fee_exact_values() {
        assert_eq!(feller_fair_fee(1024), 10.0);
        assert_eq!(feller_fair_fee(2048), 11.0);
        assert_eq!(feller_fair_fee(1), 0.0);
    }

    #[test]
    fn two_banker_fee_arithmetic() {
        let a = SimulationConfig::new(1, 1024).unwrap();
        let b = SimulationConfig::new(2, 1024).unwrap();
        let report = two_banker_demo(&a, &b);
        assert_eq!(report.total_fee_separate, 20480.0);
        assert_eq!(report.combined_plays, 2048);
        assert_eq!(report.total_fee_combined, 22528.0);
        assert_eq!(
            report.total_winnings,
            report.banker_a.total_payout + report.banker_b.total_payout
        );
        // same configs, same demo
        assert_eq!(two_banker_demo(&a, &b), report);
    }

    #[test]
    fn exactly_one_lottery_fires_per_sequence() {
        for head_pos in 1..=20usize {
            let bits: Vec<bool> = (1..=20).map(|i| i == head_pos).collect();
            let firing: Vec<u32> = (1..=20).filter(|&k| lottery_payout(k, &bits) > 0).collect();
            assert_eq!(firing, vec![head_pos as u32]);
            assert_eq!(
                lottery_payout(head_pos as u32, &bits),
                st_petersburg_payout(&bits).unwrap()
            );
        }
    }

    #[test]
    fn decomposition_short_prefix() {
        // head on the first toss: the game pays 2, only lottery 1 fires
        let bits = [true, false, false];
        assert_eq!(st_petersburg_payout(&bits), Some(2));
        assert_eq!(lottery_payout(1, &bits), 2);
        assert_eq!(lottery_payout(2, &bits), 0);
        assert_eq!(lottery_payout(3, &bits), 0);
    }

    #[test]
    fn decomposition_depth_20() {
        let report = verify_decomposition(20).unwrap();
        assert_eq!(report.mismatches, 0);
        assert_eq!(report.sequences_checked, 20);
        assert!(report.lottery_expectations.iter().all(|&e| e == 1.0));
    }

    #[test]
    fn decomposition_depth_50_exact() {
        let report = verify_decomposition(50).unwrap();
        assert_eq!(report.mismatches, 0);
        assert_eq!(report.lottery_expectations.len(), 50);
    }

    #[test]
    fn decomposition_rejects_bad_depth() {
        assert!(verify_decomposition(0).is_err());
        assert!(verify_decomposition(51).is_err());
    }

    #[test]
    fn all_tails_sequence_pays_nothing() {
        let bits = [false; 10];
        assert_eq!(st_petersburg_payout(&bits), None);
        for k in 1..=10 {
            assert_eq!(lottery_payout(k, &bits), 0);
        }
    }

    #[test]
    fn median_session_mean_tracks_feller_fee() {
        // convergence of the mean to log2(N) is slow, hence the wide band
        let base = SimulationConfig::new(300, 1 << 16).unwrap();
        let median = median_session_mean(&base, 64);
        let fee = feller_fair_fee(1 << 16);
        let ratio = median / fee;
        assert!(
            (0.7..=1.3).contains(&ratio),
            "median = {median}, fee = {fee}, ratio = {ratio}"
        );
    }

    #[test]
    fn report_serializes_including_wide_totals() {
        let config = SimulationConfig::new(1, 4).unwrap();
        let report = simulate_session(&config);
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"generator\":\"chacha8\""));
        assert!(json.contains("\"seed\":1"));
    }
}
