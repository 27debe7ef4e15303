//! Discrete payout distributions and continuous return densities.
//!
//! Discrete distributions come in three kinds: an explicit finite outcome
//! list, the St. Petersburg coin-toss game (payout `2^k` with probability
//! `2^-k`), and the two-outcome lottery that pays `2^k` with probability
//! `2^-k`. The analytic kinds never materialize their outcome lists; tail
//! masses and expectations come from closed forms, which keeps power-of-two
//! arithmetic exact and lets the St. Petersburg expectation report as
//! unbounded instead of overflowing.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pricing::Price;

/// Absolute tolerance on the probability-mass sum at ingestion.
pub const PROB_SUM_TOLERANCE: f64 = 1e-12;

/// One (payout, probability) pair of a discrete distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub payout: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    /// Canonical outcome list: ascending payouts, merged duplicates, no
    /// zero-probability entries, mass within [`PROB_SUM_TOLERANCE`] of 1.
    Finite(Vec<Outcome>),
    StPetersburg,
    Lottery(u32),
}

/// A discrete payout distribution in canonical form.
///
/// Outcomes are ranked 1, 2, 3, ... in ascending payout order, so truncating
/// at rank `N` always discards the highest-payout tail.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoutDistribution {
    kind: Kind,
}

/// Largest lottery exponent for which payout `2^k` and probability `2^-k`
/// are both exactly representable in an `f64`.
pub const MAX_LOTTERY_EXPONENT: u32 = 1023;

impl PayoutDistribution {
    /// Builds a finite distribution from raw (payout, probability) pairs.
    ///
    /// Canonicalizes the input: sorts ascending by payout, merges duplicate
    /// payouts by summing their probabilities, and drops zero-probability
    /// entries. Re-ingesting the canonical outcome list reproduces it
    /// unchanged.
    pub fn finite(outcomes: &[(f64, f64)]) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for &(payout, probability) in outcomes {
            if !payout.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "payout {payout} is not finite"
                )));
            }
            if payout < 0.0 {
                return Err(Error::NegativePayout(payout));
            }
            if !probability.is_finite() || probability < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "probability {probability} must be finite and >= 0"
                )));
            }
        }

        let mut sorted: Vec<(f64, f64)> = outcomes
            .iter()
            .map(|&(x, p)| (if x == 0.0 { 0.0 } else { x }, p))
            .collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut merged: Vec<Outcome> = Vec::with_capacity(sorted.len());
        for (payout, probability) in sorted {
            match merged.last_mut() {
                Some(last) if last.payout == payout => last.probability += probability,
                _ => merged.push(Outcome {
                    payout,
                    probability,
                }),
            }
        }
        merged.retain(|o| o.probability > 0.0);
        if merged.is_empty() {
            return Err(Error::EmptyDistribution);
        }

        let sum: f64 = merged.iter().map(|o| o.probability).sum();
        if (sum - 1.0).abs() > PROB_SUM_TOLERANCE {
            return Err(Error::ProbabilityMass {
                sum,
                tolerance: PROB_SUM_TOLERANCE,
            });
        }

        Ok(Self {
            kind: Kind::Finite(merged),
        })
    }

    /// The St. Petersburg game: outcome `k` pays `2^k` with probability `2^-k`.
    pub fn st_petersburg() -> Self {
        Self {
            kind: Kind::StPetersburg,
        }
    }

    /// The two-outcome lottery paying `2^k` with probability `2^-k` (and
    /// nothing otherwise).
    pub fn lottery(k: u32) -> Result<Self> {
        if k == 0 || k > MAX_LOTTERY_EXPONENT {
            return Err(Error::InvalidParameter(format!(
                "lottery exponent k = {k} must be in 1..={MAX_LOTTERY_EXPONENT}"
            )));
        }
        Ok(Self {
            kind: Kind::Lottery(k),
        })
    }

    /// Canonical outcome list, if the support is materialized (finite kind).
    pub fn outcomes(&self) -> Option<&[Outcome]> {
        match &self.kind {
            Kind::Finite(outcomes) => Some(outcomes),
            _ => None,
        }
    }

    /// Number of outcomes, or `None` for unbounded support.
    pub fn support_len(&self) -> Option<usize> {
        match &self.kind {
            Kind::Finite(outcomes) => Some(outcomes.len()),
            Kind::StPetersburg => None,
            Kind::Lottery(_) => Some(2),
        }
    }

    /// The outcome at 1-based `rank` in ascending payout order.
    ///
    /// For the St. Petersburg game this is `(2^rank, 2^-rank)`; ranks whose
    /// payout exceeds the `f64` range yield `None`.
    pub fn outcome(&self, rank: usize) -> Option<Outcome> {
        if rank == 0 {
            return None;
        }
        match &self.kind {
            Kind::Finite(outcomes) => outcomes.get(rank - 1).copied(),
            Kind::StPetersburg => {
                if rank <= 1023 {
                    Some(Outcome {
                        payout: pow2(rank as i32),
                        probability: pow2(-(rank as i32)),
                    })
                } else {
                    None
                }
            }
            Kind::Lottery(k) => match rank {
                1 => Some(Outcome {
                    payout: 0.0,
                    probability: 1.0 - pow2(-(*k as i32)),
                }),
                2 => Some(Outcome {
                    payout: pow2(*k as i32),
                    probability: pow2(-(*k as i32)),
                }),
                _ => None,
            },
        }
    }

    /// Expected payout. Diverges (is `Unbounded`) for the St. Petersburg game.
    pub fn expectation(&self) -> Price {
        match &self.kind {
            Kind::Finite(outcomes) => {
                Price::Finite(outcomes.iter().map(|o| o.payout * o.probability).sum())
            }
            Kind::StPetersburg => Price::Unbounded,
            // 2^k * 2^-k is exact in binary floating point, so this is 1.0.
            Kind::Lottery(k) => Price::Finite(pow2(*k as i32) * pow2(-(*k as i32))),
        }
    }

    /// Probability mass strictly beyond the first `n` outcomes.
    ///
    /// Exact closed form for the analytic kinds; a right-to-left suffix sum
    /// for finite lists, which makes the result nonincreasing in `n`.
    pub fn tail_mass(&self, n: usize) -> Result<f64> {
        match &self.kind {
            Kind::Finite(outcomes) => {
                if n > outcomes.len() {
                    return Err(Error::IndexOutOfRange {
                        index: n,
                        len: outcomes.len(),
                    });
                }
                Ok(outcomes[n..]
                    .iter()
                    .rev()
                    .fold(0.0, |acc, o| acc + o.probability))
            }
            Kind::StPetersburg => Ok(pow2_neg_exact(n)),
            Kind::Lottery(k) => Ok(match n {
                0 => 1.0,
                1 => pow2(-(*k as i32)),
                _ => 0.0,
            }),
        }
    }

    /// Sum of `payout * probability` over the first `n` outcomes.
    pub(crate) fn weighted_prefix_sum(&self, n: usize) -> f64 {
        match &self.kind {
            Kind::Finite(outcomes) => outcomes[..n.min(outcomes.len())]
                .iter()
                .map(|o| o.payout * o.probability)
                .sum(),
            // Every retained term 2^i * 2^-i contributes exactly 1.
            Kind::StPetersburg => n as f64,
            Kind::Lottery(k) => {
                if n >= 2 {
                    pow2(*k as i32) * pow2(-(*k as i32))
                } else {
                    0.0
                }
            }
        }
    }

    fn schema(&self) -> DistSchema {
        match &self.kind {
            Kind::Finite(outcomes) => DistSchema::Finite {
                outcomes: outcomes.clone(),
            },
            Kind::StPetersburg => DistSchema::StPetersburg,
            Kind::Lottery(k) => DistSchema::Lottery { k: *k },
        }
    }
}

/// JSON file schema: `{"kind": "finite"|"st_petersburg"|"lottery", ...}`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum DistSchema {
    Finite { outcomes: Vec<Outcome> },
    StPetersburg,
    Lottery { k: u32 },
}

impl Serialize for PayoutDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.schema().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PayoutDistribution {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let schema = DistSchema::deserialize(deserializer)?;
        let dist = match schema {
            DistSchema::Finite { outcomes } => {
                let pairs: Vec<(f64, f64)> =
                    outcomes.iter().map(|o| (o.payout, o.probability)).collect();
                PayoutDistribution::finite(&pairs)
            }
            DistSchema::StPetersburg => Ok(PayoutDistribution::st_petersburg()),
            DistSchema::Lottery { k } => PayoutDistribution::lottery(k),
        };
        dist.map_err(D::Error::custom)
    }
}

/// Exact power of two; `n` must keep the result in normal `f64` range.
fn pow2(n: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&n));
    f64::from_bits(((1023 + n as i64) as u64) << 52)
}

/// Exact `2^-n` down through the subnormal range, 0 below it.
fn pow2_neg_exact(n: usize) -> f64 {
    if n <= 1022 {
        f64::from_bits(((1022 - n as u64) + 1) << 52)
    } else if n <= 1074 {
        f64::from_bits(1u64 << (1074 - n))
    } else {
        0.0
    }
}

/// A continuous density with analytic survival function and inverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContinuousDensity {
    Cauchy { location: f64, scale: f64 },
    Gaussian { mean: f64, stddev: f64 },
}

impl ContinuousDensity {
    /// Standard Cauchy: density `1 / (pi (x^2 + 1))`.
    pub fn standard_cauchy() -> Self {
        Self::Cauchy {
            location: 0.0,
            scale: 1.0,
        }
    }

    pub fn cauchy(location: f64, scale: f64) -> Result<Self> {
        if !location.is_finite() || !scale.is_finite() || scale <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "Cauchy requires finite location and scale > 0, got ({location}, {scale})"
            )));
        }
        Ok(Self::Cauchy { location, scale })
    }

    pub fn standard_gaussian() -> Self {
        Self::Gaussian {
            mean: 0.0,
            stddev: 1.0,
        }
    }

    pub fn gaussian(mean: f64, stddev: f64) -> Result<Self> {
        if !mean.is_finite() || !stddev.is_finite() || stddev <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "Gaussian requires finite mean and stddev > 0, got ({mean}, {stddev})"
            )));
        }
        Ok(Self::Gaussian { mean, stddev })
    }

    pub fn density(&self, x: f64) -> f64 {
        match *self {
            Self::Cauchy { location, scale } => {
                let z = (x - location) / scale;
                1.0 / (std::f64::consts::PI * scale * (1.0 + z * z))
            }
            Self::Gaussian { mean, stddev } => {
                let z = (x - mean) / stddev;
                (-0.5 * z * z).exp() / (stddev * (2.0 * std::f64::consts::PI).sqrt())
            }
        }
    }

    /// Upper tail mass `P(X > u)`.
    pub fn survival(&self, u: f64) -> f64 {
        match *self {
            // atan2(1, z)/pi keeps full precision in both tails, where
            // 0.5 - atan(z)/pi would cancel.
            Self::Cauchy { location, scale } => {
                let z = (u - location) / scale;
                f64::atan2(1.0, z) / std::f64::consts::PI
            }
            Self::Gaussian { mean, stddev } => {
                let z = (u - mean) / stddev;
                0.5 * statrs::function::erf::erfc(z / std::f64::consts::SQRT_2)
            }
        }
    }

    /// The `u` with `survival(u) = epsilon`, for `epsilon` in (0, 1).
    pub fn survival_inverse(&self, epsilon: f64) -> Result<f64> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "survival_inverse needs epsilon in (0, 1), got {epsilon}"
            )));
        }
        Ok(match *self {
            Self::Cauchy { location, scale } => {
                use std::f64::consts::PI;
                // Branch choice keeps the tangent argument away from pi/2,
                // where the computed angle loses the digits that matter.
                // 0.5 - epsilon and 1 - epsilon are exact in the ranges used.
                let z = if (0.25..=0.75).contains(&epsilon) {
                    (PI * (0.5 - epsilon)).tan()
                } else if epsilon < 0.25 {
                    1.0 / (PI * epsilon).tan()
                } else {
                    -1.0 / (PI * (1.0 - epsilon)).tan()
                };
                location + scale * z
            }
            Self::Gaussian { mean, stddev } => {
                let z = std::f64::consts::SQRT_2 * statrs::function::erf::erfc_inv(2.0 * epsilon);
                mean + stddev * z
            }
        })
    }
}
