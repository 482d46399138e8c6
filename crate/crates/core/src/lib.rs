//! Phase-count laws of elimination-round leader election.
//!
//! A round takes `n` players to `Y_n` survivors; the number of rounds `X_n`
//! until a single winner remains satisfies `X_n = X_{Y_n} + 1`. This crate
//! computes the law of `X_n` exactly (arbitrary-precision rationals for small
//! `n`, floats above a configurable cutoff), checks the hypotheses under which
//! `X_n - log_{1/alpha} n` settles into a log-periodic regime, extracts that
//! periodic behaviour numerically, and simulates Franklin's ring election.

pub mod condition;
pub mod error;
pub mod franklin;
pub mod law;
pub mod metrics;
pub mod peaks;
pub mod phase;
pub mod rational;
pub mod survivor;

pub use error::{Error, Result};
pub use law::{Pmf, RationalDist, Value};
pub use peaks::{PeakTable, PeakVariant};
pub use phase::{Init, PhaseConfig, PhaseTable};
pub use survivor::{ModelKind, SurvivorModel, TransitionMatrix};
