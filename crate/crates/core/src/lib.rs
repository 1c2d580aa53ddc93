//! Numerical toolkit for selling one item to `n` buyers who arrive in
//! sequence and face take-it-or-leave-it prices.
//!
//! The crate computes optimal anonymous and discriminatory price
//! schedules, the ex-ante relaxation that caps both, the worst-case
//! gaps between them (with the matching extremal constructions), the
//! welfare-optimal thresholds and their one-step shift relation to
//! revenue prices, and Monte Carlo estimates for cross-checking.
//!
//! Modules:
//!
//! * [`dist`]: value distribution families and their revenue curves.
//! * [`pricing`]: anonymous and discriminatory schedules by backward
//!   induction.
//! * [`exante`]: the ex-ante relaxation, exact for discrete supports.
//! * [`gaps`]: gap reports, worst-case caps and tightness constructions.
//! * [`welfare`]: welfare recursions, the price shift check and gap
//!   tables over buyer counts.
//! * [`sim`]: deterministic Monte Carlo estimates.

pub mod dist;
pub mod exante;
pub mod gaps;
pub mod pricing;
pub mod sim;
pub mod welfare;

mod error;
mod search;

pub use error::{Error, Result};
