//! A pricing toolkit built around truncated expectations.
//!
//! The buyer's side of a quote drops the outcome tail whose probability it
//! deems hopeless (at most `epsilon`) and pays at most `k` times the
//! expectation of what remains; the seller's side quotes the full
//! expectation when committed, or the same truncated form when the position
//! can be closed early. The same truncation makes heavy-tailed option
//! integrals finite.
//!
//! Modules:
//! - [`dist`]: discrete payout distributions (finite lists, the
//!   St. Petersburg game, two-outcome lotteries) and continuous densities
//!   (Cauchy, Gaussian) with exact tail queries.
//! - [`pricing`]: the truncation point `N_epsilon`, truncated expectation
//!   `E_epsilon`, buyer acceptance, and both seller quoting modes.
//! - [`stp`]: seeded St. Petersburg simulation, the `log2 N` per-play fee,
//!   the two-banker comparison, and the exhaustive lottery-decomposition
//!   check.
//! - [`quad`]: adaptive Simpson quadrature with an error estimate.
//! - [`options`]: truncated call/put pricing and divergence tables under
//!   fat-tailed densities.
//!
//! All types are immutable after construction and every operation is pure,
//! so values can be shared freely across threads.

pub mod dist;
pub mod error;
pub mod options;
pub mod pricing;
pub mod quad;
pub mod stp;

pub use dist::{ContinuousDensity, Outcome, PayoutDistribution};
pub use error::{Error, Result};
pub use options::{BoundMode, DivergenceEntry, OptionSide, OptionSpec, TruncatedPrice};
pub use pricing::{BuyerProfile, Price, TruncationResult};
pub use quad::QuadratureResult;
pub use stp::{DecompositionReport, SessionReport, SimulationConfig, TwoBankerReport};
