use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use experiment_cli::{
    run_graph_queries, run_localmin_trace, run_sweep, run_table1, ExperimentConfig, Result,
};

#[derive(Parser)]
#[command(
    name = "phi",
    about = "Complexity-measure sweeps, divergence tables, local-minimum traces and graph queries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the requested measures over a β grid, one CSV row per point.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output file; defaults to the config's output_path, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Run the conditional-split measure even past three nodes.
        #[arg(long)]
        force: bool,
        /// Exit with status 3 when any solver fails to converge.
        #[arg(long)]
        strict: bool,
    },
    /// Divergence statistics from sampled constraint-set members into the
    /// latent-split family, per latent size.
    Table1 {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Per-restart divergences and latent weights across a β grid.
    Trace {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Answer separation and marginalization queries from a script file.
    Graph { query_file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sweep {
            config,
            out,
            seed,
            force,
            strict,
        } => {
            let cfg = load(&config, seed)?;
            let sweep = run_sweep(&cfg, force)?;
            emit(out.as_deref(), cfg.output_path.as_deref(), &sweep.csv)?;
            if strict && !sweep.non_converged.is_empty() {
                for note in &sweep.non_converged {
                    eprintln!("non-convergence: {note}");
                }
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Table1 { config, out, seed } => {
            let cfg = load(&config, seed)?;
            let csv = run_table1(&cfg)?;
            emit(out.as_deref(), cfg.output_path.as_deref(), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Trace { config, out, seed } => {
            let cfg = load(&config, seed)?;
            let csv = run_localmin_trace(&cfg)?;
            emit(out.as_deref(), cfg.output_path.as_deref(), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Graph { query_file } => {
            let text = fs::read_to_string(&query_file).map_err(|e| {
                experiment_cli::CliError::Config(format!("{}: {e}", query_file.display()))
            })?;
            print!("{}", run_graph_queries(&text)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::from_file(path)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    Ok(config)
}

fn emit(out: Option<&Path>, configured: Option<&str>, csv: &str) -> Result<()> {
    let target = out.map(Path::to_path_buf).or_else(|| configured.map(PathBuf::from));
    match target {
        Some(path) => fs::write(&path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
