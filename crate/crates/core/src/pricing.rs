//! Buyer and seller pricing rules built on hopeless-probability truncation.
//!
//! A buyer ignores the outcome tail whose total probability is at most
//! `epsilon` (the hopeless probability) and judges a quote against `k` times
//! the truncated expectation, where `k` is the buyer's cost-effectiveness
//! factor. A seller who must hold the contract to the end quotes the full
//! expectation; a seller who can close out early may quote from the same
//! truncated expectation, with `k >= 1` (strictly above 1 when `epsilon > 0`,
//! since the seller then carries the ignored tail risk).

use serde::{Serialize, Serializer};

use crate::dist::PayoutDistribution;
use crate::error::{Error, Result};

/// A price that may be finite or unbounded.
///
/// The St. Petersburg game's committed-seller quote is the canonical
/// unbounded case: no finite quotation covers the expectation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Price {
    Finite(f64),
    Unbounded,
}

impl Price {
    pub fn is_unbounded(&self) -> bool {
        matches!(self, Price::Unbounded)
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<f64> {
        match *self {
            Price::Finite(v) => Some(v),
            Price::Unbounded => None,
        }
    }
}

impl std::fmt::Display for Price {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Price::Finite(v) => write!(f, "{v}"),
            Price::Unbounded => write!(f, "unbounded"),
        }
    }
}

impl Serialize for Price {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Price::Finite(v) => serializer.serialize_f64(v),
            Price::Unbounded => serializer.serialize_str("unbounded"),
        }
    }
}

/// Buyer parameters: hopeless probability `epsilon` and cost-effectiveness
/// factor `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BuyerProfile {
    pub epsilon: f64,
    pub k: f64,
}

impl BuyerProfile {
    /// `epsilon` must lie in [0, 1] and `k` must be positive.
    pub fn new(epsilon: f64, k: f64) -> Result<Self> {
        if !epsilon.is_finite() || !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!(
                "epsilon = {epsilon} must be in [0, 1]"
            )));
        }
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::InvalidParameter(format!("k = {k} must be > 0")));
        }
        Ok(Self { epsilon, k })
    }
}

/// Truncation point and truncated expectation for a given `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationResult {
    /// Minimal rank whose beyond-tail mass is at most `epsilon`.
    pub n_epsilon: u64,
    /// Expectation over the first `n_epsilon` outcomes.
    pub e_epsilon: f64,
    /// Probability mass retained by the truncation (at least `1 - epsilon`).
    pub retained_mass: f64,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !epsilon.is_finite() || !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!(
            "epsilon = {epsilon} must be in [0, 1]"
        )));
    }
    Ok(())
}

/// The minimal positive integer `N` with `tail_mass(N) <= epsilon`.
///
/// Fails with `NoFiniteTruncation` when `epsilon = 0` meets unbounded
/// support: every finite truncation of the St. Petersburg game leaves
/// positive tail mass behind.
pub fn find_n_epsilon(dist: &PayoutDistribution, epsilon: f64) -> Result<u64> {
    check_epsilon(epsilon)?;
    if epsilon == 0.0 && dist.support_len().is_none() {
        return Err(Error::NoFiniteTruncation { epsilon });
    }
    let mut n = 1usize;
    loop {
        if dist.tail_mass(n)? <= epsilon {
            return Ok(n as u64);
        }
        n += 1;
    }
}

/// Rule-1 truncation: `N_epsilon`, the truncated expectation, and the
/// retained mass.
pub fn truncated_expectation(dist: &PayoutDistribution, epsilon: f64) -> Result<TruncationResult> {
    let n = find_n_epsilon(dist, epsilon)?;
    let e_epsilon = dist.weighted_prefix_sum(n as usize);
    let retained_mass = 1.0 - dist.tail_mass(n as usize)?;
    Ok(TruncationResult {
        n_epsilon: n,
        e_epsilon,
        retained_mass,
    })
}

/// The largest quote the buyer accepts: `k` times the truncated expectation.
///
/// A buyer with `epsilon = 0` facing unbounded support has no finite
/// truncation, so the bound degenerates to `Unbounded`.
pub fn buyer_max_price(dist: &PayoutDistribution, profile: &BuyerProfile) -> Price {
    match truncated_expectation(dist, profile.epsilon) {
        Ok(t) => Price::Finite(profile.k * t.e_epsilon),
        Err(Error::NoFiniteTruncation { .. }) => Price::Unbounded,
        Err(e) => unreachable!("valid profile cannot produce {e}"),
    }
}

/// Whether the quote `mu` is acceptable to the buyer (`mu <= k E_epsilon`,
/// compared exactly).
pub fn buyer_accepts(dist: &PayoutDistribution, profile: &BuyerProfile, mu: f64) -> bool {
    match buyer_max_price(dist, profile) {
        Price::Finite(max) => mu <= max,
        Price::Unbounded => true,
    }
}

/// Committed-seller quote: the full expectation.
pub fn seller_min_price_committed(dist: &PayoutDistribution) -> Price {
    dist.expectation()
}

/// Closeable-seller quote `k * E_epsilon`.
///
/// Requires `k >= 1`, and strictly `k > 1` when `epsilon > 0` because the
/// seller then bears the truncated tail risk.
pub fn seller_quote_closeable(dist: &PayoutDistribution, epsilon: f64, k: f64) -> Result<Price> {
    check_epsilon(epsilon)?;
    if !k.is_finite() || k < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "seller k = {k} must be >= 1"
        )));
    }
    if epsilon > 0.0 && k <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "seller k = {k} must exceed 1 when epsilon = {epsilon} > 0"
        )));
    }
    match truncated_expectation(dist, epsilon) {
        Ok(t) => Ok(Price::Finite(k * t.e_epsilon)),
        Err(Error::NoFiniteTruncation { .. }) => Ok(Price::Unbounded),
        Err(e) => Err(e),
    }
}
