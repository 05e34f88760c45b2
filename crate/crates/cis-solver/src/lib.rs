//! Divergence minimization onto the conditional-independence split
//! constraint set: candidates whose per-node present conditionals given the
//! full past coincide with their conditionals given only the node's own
//! past.
//!
//! The set is not an exponential family, so the minimizer is found
//! numerically: free logits over the joint, a quadratic penalty on the
//! constraint deviations driven through an increasing weight schedule, and
//! multiple starts to guard against local minima.

mod error;
mod objective;
mod sample;
mod solver;

pub use error::{CisError, Result};
pub use objective::{cis_residual, PenalizedObjective};
pub use sample::sample_ncis;
pub use solver::{phi_cis, CisConfig, CisOutcome, CisRun, CisStart, StageRecord};
