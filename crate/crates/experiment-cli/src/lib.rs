//! Configuration-driven experiment harness over the measure crates: β-grid
//! sweeps with CSV emission, latent-cardinality divergence tables,
//! local-minimum traces, and graph separation queries.
//!
//! Runs are deterministic: a configuration plus a seed fixes every random
//! start, and repeated runs emit byte-identical CSV. Grid points and restarts
//! execute concurrently; rows are emitted in grid order.

mod config;
mod error;
mod queries;
mod sweep;
mod table1;
mod trace;

pub use config::{ExperimentConfig, MeasureTag, SystemSpec};
pub use error::{CliError, Result};
pub use queries::run_graph_queries;
pub use sweep::{run_sweep, SweepOutput};
pub use table1::run_table1;
pub use trace::run_localmin_trace;
