use dist_core::sampling::stream_rng;
use dist_core::{kl_divergence, JointDistribution};
use em_projection::{em_run, visible_marginal, EmConfig, SplitFamily};
use ising_gen::{IsingSystem, StationaryConfig};
use rayon::prelude::*;

use crate::config::{format_value, mix_seed, ExperimentConfig};
use crate::error::{CliError, Result};

struct PointTrace {
    beta: f64,
    /// (divergence, latent marginal) per restart.
    runs: Vec<(f64, Vec<f64>)>,
    best_visible: JointDistribution,
}

/// Per-restart descent results across the grid, one CSV row per
/// (grid point, restart). Restarts are independent random family members, so
/// the divergence column exposes the local minima the descent can land in.
/// The `segment_boundary` column marks grid steps where the best projection
/// jumps: 1 when its divergence from the previous best projection exceeds
/// 0.2, else 0.
pub fn run_localmin_trace(config: &ExperimentConfig) -> Result<String> {
    let weights = config.system_weights()?;
    let n = weights.len();
    if config.beta_grid.is_empty() {
        return Err(CliError::Config(
            "a grid is required: beta_grid or beta_start/beta_stop/beta_count".into(),
        ));
    }
    if config.w_sizes.len() != 1 {
        return Err(CliError::Config(
            "w_sizes: exactly one latent size for a trace".into(),
        ));
    }
    if config.restarts == 0 {
        return Err(CliError::Config("restarts: at least 1".into()));
    }
    let m = config.w_sizes[0];
    let family = SplitFamily::standard(n, m)?;
    let cards = vec![2usize; n];

    let points = config
        .beta_grid
        .par_iter()
        .enumerate()
        .map(|(index, &beta)| {
            let system = IsingSystem::new(&weights, beta)?;
            let joint = system.stationary_joint(&StationaryConfig {
                tolerance: config.stationary_tolerance,
                max_iterations: config.stationary_max_iterations,
                seed: config.seed,
            })?;
            let em = EmConfig {
                tolerance: config.em_tolerance,
                max_iterations: config.em_max_iterations,
                restarts: 1,
                seed: 0,
                include_independent_start: false,
            };
            let mut runs = Vec::with_capacity(config.restarts);
            let mut best: Option<(f64, JointDistribution)> = None;
            for r in 0..config.restarts {
                let mut rng = stream_rng(mix_seed(config.seed, 7, index as u64), r as u64);
                let start = family.sample_member(&cards, &mut rng)?;
                let run = em_run(&joint, &family, &start, &em)?;
                runs.push((run.divergence, run.trace.w_marginal.clone()));
                if best.as_ref().map_or(true, |(d, _)| run.divergence < *d) {
                    best = Some((run.divergence, run.minimizer));
                }
            }
            let (_, minimizer) = best.expect("restarts >= 1");
            let best_visible = visible_marginal(&minimizer)?.into_dist();
            Ok(PointTrace {
                beta,
                runs,
                best_visible,
            })
        })
        .collect::<Result<Vec<PointTrace>>>()?;

    let mut marks = vec![0u8; points.len()];
    for t in 1..points.len() {
        let step = kl_divergence(&points[t - 1].best_visible, &points[t].best_visible)?;
        if step > 0.2 {
            marks[t] = 1;
        }
    }

    let mut csv = String::from("beta,restart,divergence");
    for k in 0..m {
        csv.push_str(&format!(",w_{k}"));
    }
    csv.push_str(",segment_boundary\n");
    for (t, point) in points.iter().enumerate() {
        for (r, (divergence, marginal)) in point.runs.iter().enumerate() {
            csv.push_str(&format_value(point.beta));
            csv.push_str(&format!(",{r}"));
            csv.push(',');
            csv.push_str(&format_value(*divergence));
            for &w in marginal {
                csv.push(',');
                csv.push_str(&format_value(w));
            }
            csv.push_str(&format!(",{}\n", marks[t]));
        }
    }
    Ok(csv)
}
