//! Exact arithmetic on strictly positive discrete distributions over labeled
//! product spaces.
//!
//! The crate provides the substrate the rest of the workspace builds on:
//! [`ProductSpace`] fixes a canonical row-major enumeration of joint states,
//! [`JointDistribution`] stores a dense probability vector over it, and
//! [`ConditionalKernel`] stores row-normalized conditionals. On top of these
//! sit marginalization, conditioning, factor composition, KL divergence,
//! entropies, mutual and conditional mutual information, seeded sampling, and
//! a plain-text serialization format.
//!
//! All logarithms are natural, so every information quantity is in nats.
//! Values are immutable after construction and every operation is pure.

mod compose;
mod dist;
mod error;
mod info;
mod kernel;
mod space;

pub mod sampling;
pub mod text;

pub use compose::{compose, Factor};
pub use dist::JointDistribution;
pub use error::{DistError, Result};
pub use info::kl_divergence;
pub use kernel::ConditionalKernel;
pub use space::{Axis, ProductSpace, Role, SystemLayout};
