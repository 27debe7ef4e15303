//! Truncated option pricing under heavy-tailed densities.
//!
//! Under a fat tail like the Cauchy the untruncated call integral diverges,
//! so quotes cut the payoff integral at a hopeless-probability quantile or
//! at explicit spot multiples. [`divergence_table`] exhibits the dichotomy:
//! Cauchy partial integrals grow without bound while Gaussian ones settle.

use serde::Serialize;

use crate::dist::ContinuousDensity;
use crate::error::{Error, Result};
use crate::quad;

/// Absolute quadrature tolerance used for all price integrals.
pub const PRICE_QUAD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OptionSide {
    Call,
    Put,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptionSpec {
    pub spot: f64,
    pub strike: f64,
    pub rate: f64,
    pub maturity: f64,
    pub side: OptionSide,
}

impl OptionSpec {
    pub fn new(spot: f64, strike: f64, rate: f64, maturity: f64, side: OptionSide) -> Result<Self> {
        if !spot.is_finite() || spot <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "spot = {spot} must be > 0"
            )));
        }
        if !strike.is_finite() || strike <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "strike = {strike} must be > 0"
            )));
        }
        if !rate.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rate = {rate} must be finite"
            )));
        }
        if !maturity.is_finite() || maturity < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "maturity = {maturity} must be >= 0"
            )));
        }
        Ok(Self {
            spot,
            strike,
            rate,
            maturity,
            side,
        })
    }
}

/// How the truncation bound is chosen.
///
/// `EpsilonQuantile` cuts where the ignored tail carries mass `epsilon`
/// (upper tail for calls, lower tail for puts). `ExplicitMultiple` cuts at
/// fixed spot multiples, defaulting to `100 S` above and `0.01 S` below.
/// The two modes are never inferred from each other; reports record which
/// one produced a price.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundMode {
    EpsilonQuantile { epsilon: f64 },
    ExplicitMultiple { upper_mult: f64, lower_mult: f64 },
}

pub const DEFAULT_UPPER_MULT: f64 = 100.0;
pub const DEFAULT_LOWER_MULT: f64 = 0.01;

impl BoundMode {
    pub fn epsilon_quantile(epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon = {epsilon} must be in (0, 1)"
            )));
        }
        Ok(Self::EpsilonQuantile { epsilon })
    }

    pub fn explicit_multiple(upper_mult: f64, lower_mult: f64) -> Result<Self> {
        if !upper_mult.is_finite()
            || !lower_mult.is_finite()
            || !(0.0 < lower_mult && lower_mult < 1.0 && 1.0 < upper_mult)
        {
            return Err(Error::InvalidParameter(format!(
                "multiples must satisfy 0 < lower < 1 < upper, got ({upper_mult}, {lower_mult})"
            )));
        }
        Ok(Self::ExplicitMultiple {
            upper_mult,
            lower_mult,
        })
    }

    pub fn default_multiple() -> Self {
        Self::ExplicitMultiple {
            upper_mult: DEFAULT_UPPER_MULT,
            lower_mult: DEFAULT_LOWER_MULT,
        }
    }
}

/// A priced option with its truncation bounds and quadrature error.
///
/// `degenerate` flags bounds that fail to bracket the strike; the price is
/// then zero by convention rather than an error, since a strike beyond the
/// hopeless quantile genuinely has no retained value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncatedPrice {
    pub price: f64,
    pub mode: BoundMode,
    pub bounds: (f64, f64),
    pub quadrature_error: f64,
    pub degenerate: bool,
}

/// The upper cut `U` with `survival(U) = epsilon`.
pub fn quantile_upper(density: &ContinuousDensity, epsilon: f64) -> Result<f64> {
    density.survival_inverse(epsilon)
}

/// The lower cut carrying probability mass `epsilon` below it.
pub fn quantile_lower(density: &ContinuousDensity, epsilon: f64) -> Result<f64> {
    if !epsilon.is_finite() || !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon = {epsilon} must be in (0, 1)"
        )));
    }
    density.survival_inverse(1.0 - epsilon)
}

/// Discounted truncated payoff integral for `spec` under `density`.
///
/// Calls integrate `(x - K) p(x)` from the strike up to the truncation
/// bound; puts integrate `(K - x) p(x)` from the lower bound up to the
/// strike. Quadrature runs at [`PRICE_QUAD_TOL`] absolute.
pub fn truncated_price(
    density: &ContinuousDensity,
    spec: &OptionSpec,
    mode: &BoundMode,
) -> Result<TruncatedPrice> {
    let (lo, hi) = match spec.side {
        OptionSide::Call => {
            let upper = match *mode {
                BoundMode::EpsilonQuantile { epsilon } => quantile_upper(density, epsilon)?,
                BoundMode::ExplicitMultiple { upper_mult, .. } => upper_mult * spec.spot,
            };
            (spec.strike, upper)
        }
        OptionSide::Put => {
            let lower = match *mode {
                BoundMode::EpsilonQuantile { epsilon } => quantile_lower(density, epsilon)?,
                BoundMode::ExplicitMultiple { lower_mult, .. } => lower_mult * spec.spot,
            };
            (lower, spec.strike)
        }
    };

    if hi <= lo {
        return Ok(TruncatedPrice {
            price: 0.0,
            mode: *mode,
            bounds: (lo, hi),
            quadrature_error: 0.0,
            degenerate: true,
        });
    }

    let strike = spec.strike;
    let quadrature = match spec.side {
        OptionSide::Call => quad::integrate(
            |x| (x - strike) * density.density(x),
            lo,
            hi,
            PRICE_QUAD_TOL,
        )?,
        OptionSide::Put => quad::integrate(
            |x| (strike - x) * density.density(x),
            lo,
            hi,
            PRICE_QUAD_TOL,
        )?,
    };
    let discount = (-spec.rate * spec.maturity).exp();
    Ok(TruncatedPrice {
        price: (discount * quadrature.value).max(0.0),
        mode: *mode,
        bounds: (lo, hi),
        quadrature_error: discount * quadrature.error_estimate,
        degenerate: false,
    })
}

/// One row of a divergence table: the undiscounted partial call integral up
/// to `upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceEntry {
    pub upper: f64,
    pub partial_price: f64,
}

/// Partial untruncated call integrals `int_K^M (x - K) p(x) dx` for each
/// upper limit `M` in `uppers` (strictly increasing, each at least the
/// strike).
///
/// Entries accumulate segment by segment, so the difference between
/// consecutive rows is exactly the integral over the new segment. Under the
/// Cauchy the entries grow logarithmically without bound; under the Gaussian
/// they converge.
pub fn divergence_table(
    density: &ContinuousDensity,
    strike: f64,
    uppers: &[f64],
) -> Result<Vec<DivergenceEntry>> {
    if !strike.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "strike = {strike} must be finite"
        )));
    }
    for (i, &m) in uppers.iter().enumerate() {
        if !m.is_finite() || m < strike {
            return Err(Error::InvalidParameter(format!(
                "upper limit {m} must be finite and at least the strike {strike}"
            )));
        }
        if i > 0 && m <= uppers[i - 1] {
            return Err(Error::InvalidParameter(
                "upper limits must be strictly increasing".into(),
            ));
        }
    }

    let mut table = Vec::with_capacity(uppers.len());
    let mut partial = 0.0;
    let mut prev = strike;
    for &m in uppers {
        if m > prev {
            let q = quad::integrate(
                |x| (x - strike) * density.density(x),
                prev,
                m,
                PRICE_QUAD_TOL,
            )?;
            partial += q.value;
            prev = m;
        }
        table.push(DivergenceEntry {
            upper: m,
            partial_price: partial,
        });
    }
    Ok(table)
}
