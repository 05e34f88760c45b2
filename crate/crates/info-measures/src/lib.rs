//! Closed-form integrated-information measures on past/present system joints.
//!
//! [`phi_i`] measures total past/present dependence, [`phi_si`] the
//! stochastic-interaction divergence to the model that cuts every
//! cross-connection between nodes, and [`phi_t`] the causal cross-connection
//! sum on joints extended by a latent axis. Each returns a [`MeasureReport`]
//! carrying the value in nats, the minimizing distribution of its model, and
//! solver diagnostics. Iterative measures in other crates reuse the same
//! report type.

mod error;
mod measures;
mod report;
mod system;

pub use error::{MeasureError, Result};
pub use measures::{phi_i, phi_si, phi_t, project_si};
pub use report::{clamp_value, Measure, MeasureReport, VALUE_CLAMP};
pub use system::SystemJoint;
