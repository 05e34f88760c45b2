//! Divergence minimization onto latent split models by alternating
//! projections.
//!
//! A latent split model couples a visible past/present system with a hidden
//! mixture axis: members factor as `Q(x) Q(w) prod_i Q(y_i | x_parents(i), w)`.
//! The distance of a system joint to such a model is found by alternating two
//! closed-form steps: [`e_projection`] matches the visible marginal to the
//! target, [`m_projection`] re-factorizes per the family. Each step is the
//! exact divergence minimizer of its side, so the in-family divergence
//! decreases every half-cycle.
//!
//! [`phi_cii`] wraps the loop with multi-start search: random in-family
//! starts, a deterministic independent-latent start that caps the value at
//! the stochastic-interaction divergence, and warm starts lifted across
//! latent sizes via [`lift_latent`].

mod em;
mod error;
mod family;
mod projections;

pub use em::{
    em_run, independent_start, lift_latent, phi_cii, CiiOutcome, EmConfig, EmRun, EmTrace,
    RunSummary, StartKind,
};
pub use error::{EmError, Result};
pub use family::SplitFamily;
pub use projections::{e_projection, m_projection, visible_marginal};
