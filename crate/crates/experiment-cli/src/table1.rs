use cis_solver::sample_ncis;
use em_projection::{phi_cii, EmConfig, SplitFamily};
use rayon::prelude::*;

use crate::config::{format_value, mix_seed, ExperimentConfig};
use crate::error::{CliError, Result};

/// Divergence statistics from sampled members of the conditional-split
/// constraint set into the matching latent family, one CSV row per latent
/// size. The family mirrors the sampled graph: the past axes factorize,
/// the first output listens to its own input and the latent axis, the
/// second to the latent axis alone. Always a two-node study; pure random
/// restarts, so each reported value is the best of `config.restarts`
/// descents.
pub fn run_table1(config: &ExperimentConfig) -> Result<String> {
    if config.w_sizes.is_empty() {
        return Err(CliError::Config("w_sizes: at least one latent size".into()));
    }
    if config.restarts == 0 {
        return Err(CliError::Config("restarts: at least 1".into()));
    }
    if config.samples == 0 {
        return Err(CliError::Config("samples: at least 1".into()));
    }

    let per_sample = (0..config.samples)
        .into_par_iter()
        .map(|s| {
            let target = sample_ncis(mix_seed(config.seed, 4, s as u64));
            config
                .w_sizes
                .iter()
                .enumerate()
                .map(|(k, &m)| {
                    let family = SplitFamily::custom(vec![vec![0], vec![]], true, m)?;
                    let em = EmConfig {
                        tolerance: config.em_tolerance,
                        max_iterations: config.em_max_iterations,
                        restarts: config.restarts,
                        seed: mix_seed(mix_seed(config.seed, 5, s as u64), 6, k as u64),
                        include_independent_start: false,
                    };
                    Ok(phi_cii(&target, &family, &em, None)?.report.value)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;

    let mut csv = String::from("w,samples,min,max,mean\n");
    for (k, &m) in config.w_sizes.iter().enumerate() {
        let column: Vec<f64> = per_sample.iter().map(|row| row[k]).collect();
        let min = column.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = column.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mean = column.iter().sum::<f64>() / column.len() as f64;
        csv.push_str(&format!(
            "{m},{},{},{},{}\n",
            config.samples,
            format_value(min),
            format_value(max),
            format_value(mean)
        ));
    }
    Ok(csv)
}
