use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Graph(#[from] chain_graphs::GraphError),
    #[error(transparent)]
    Dist(#[from] dist_core::DistError),
    #[error(transparent)]
    Measure(#[from] info_measures::MeasureError),
    #[error(transparent)]
    Em(#[from] em_projection::EmError),
    #[error(transparent)]
    Ips(#[from] ips_projection::IpsError),
    #[error(transparent)]
    Ising(#[from] ising_gen::IsingError),
    #[error(transparent)]
    Cis(#[from] cis_solver::CisError),
}

impl CliError {
    /// Process exit status: 2 for unusable input, 1 for solver failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Graph(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
