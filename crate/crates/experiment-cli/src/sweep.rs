use std::fs;

use cis_solver::{phi_cis, CisConfig};
use dist_core::text::{parse_distribution, ParseMode};
use dist_core::JointDistribution;
use em_projection::{lift_latent, phi_cii, EmConfig, SplitFamily};
use info_measures::{phi_i, phi_si, phi_t};
use ips_projection::{phi_g_with, IpsConfig};
use ising_gen::{IsingSystem, StationaryConfig};
use rayon::prelude::*;

use crate::config::{format_value, mix_seed, ExperimentConfig, MeasureTag};
use crate::error::{CliError, Result};

/// A finished sweep: the CSV text plus every non-convergence note, so strict
/// callers can fail the run after the artifact is written.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub csv: String,
    pub non_converged: Vec<String>,
}

struct Row {
    beta: f64,
    i: Option<f64>,
    si: Option<f64>,
    g: Option<f64>,
    cii: Vec<Option<f64>>,
    cis: Option<f64>,
    t: Option<f64>,
    flags: Vec<String>,
}

/// One CSV row per grid point, columns in a fixed order, values only for the
/// requested measures. Grid points run concurrently; rows are emitted in grid
/// order.
pub fn run_sweep(config: &ExperimentConfig, force: bool) -> Result<SweepOutput> {
    let weights = config.system_weights()?;
    let n = weights.len();
    if config.beta_grid.is_empty() {
        return Err(CliError::Config(
            "a grid is required: beta_grid or beta_start/beta_stop/beta_count".into(),
        ));
    }
    if config.measures.is_empty() {
        return Err(CliError::Config(
            "measures: at least one of I, SI, G, CII, CIS, T".into(),
        ));
    }
    if config.measures.contains(&MeasureTag::Cii) && config.w_sizes.is_empty() {
        return Err(CliError::Config("w_sizes: required when CII is requested".into()));
    }
    if config.measures.contains(&MeasureTag::Cis) && n > 3 && !force {
        return Err(CliError::Config(format!(
            "phi_CIS over {n} nodes means a {}-state penalized search per grid point, \
             which grows very expensive past 3 nodes; pass --force to run it anyway",
            4usize.pow(n as u32)
        )));
    }
    let ground = match &config.ground_truth {
        Some(path) => Some(ground_truth_value(path, n)?),
        None => None,
    };

    let rows = config
        .beta_grid
        .par_iter()
        .enumerate()
        .map(|(index, &beta)| compute_row(config, &weights, beta, index, ground))
        .collect::<Result<Vec<Row>>>()?;

    let mut csv = String::from("beta,phi_I,phi_SI,phi_G");
    for &m in &config.w_sizes {
        csv.push_str(&format!(",phi_CII_w{m}"));
    }
    csv.push_str(",phi_CIS,phi_T,flags\n");
    let mut non_converged = Vec::new();
    for row in &rows {
        csv.push_str(&format_value(row.beta));
        push_cell(&mut csv, row.i);
        push_cell(&mut csv, row.si);
        push_cell(&mut csv, row.g);
        for &v in &row.cii {
            push_cell(&mut csv, v);
        }
        push_cell(&mut csv, row.cis);
        push_cell(&mut csv, row.t);
        csv.push(',');
        csv.push_str(&row.flags.join(";"));
        csv.push('\n');
        for flag in &row.flags {
            if flag != "T=SI" && flag != "T=ground_truth" {
                non_converged.push(format!("beta {}: {flag}", format_value(row.beta)));
            }
        }
    }
    Ok(SweepOutput { csv, non_converged })
}

fn push_cell(csv: &mut String, value: Option<f64>) {
    csv.push(',');
    if let Some(v) = value {
        csv.push_str(&format_value(v));
    }
}

/// The exterior-influence column needs a full joint over inputs, outputs and
/// the influence axis; without one the column falls back to the
/// interaction-split value, flagged as derived.
fn ground_truth_value(path: &str, n: usize) -> Result<f64> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Config(format!("ground_truth {path}: {e}")))?;
    let dist = parse_distribution(&text, ParseMode::Strict)
        .map_err(|e| CliError::Config(format!("ground_truth {path}: {e}")))?;
    let layout = dist
        .space()
        .system_layout()
        .map_err(|e| CliError::Config(format!("ground_truth {path}: {e}")))?;
    if layout.latent.is_none() {
        return Err(CliError::Config(format!(
            "ground_truth {path}: needs a latent axis carrying the exterior influence"
        )));
    }
    if layout.n != n {
        return Err(CliError::Config(format!(
            "ground_truth {path}: {} node pairs, the configured system has {n}",
            layout.n
        )));
    }
    Ok(phi_t(&dist)?.value)
}

fn compute_row(
    config: &ExperimentConfig,
    weights: &[Vec<f64>],
    beta: f64,
    index: usize,
    ground: Option<f64>,
) -> Result<Row> {
    let point_seed = mix_seed(config.seed, 1, index as u64);
    let system = IsingSystem::new(weights, beta)?;
    let joint = system.stationary_joint(&StationaryConfig {
        tolerance: config.stationary_tolerance,
        max_iterations: config.stationary_max_iterations,
        seed: config.seed,
    })?;
    let n = joint.n();
    let want = |tag: MeasureTag| config.measures.contains(&tag);
    let mut flags: Vec<String> = Vec::new();

    let i = if want(MeasureTag::I) {
        Some(phi_i(&joint)?.value)
    } else {
        None
    };
    let si_needed = want(MeasureTag::Si) || (want(MeasureTag::T) && ground.is_none());
    let si_raw = if si_needed {
        Some(phi_si(&joint)?.value)
    } else {
        None
    };
    let si = if want(MeasureTag::Si) { si_raw } else { None };

    let g = if want(MeasureTag::G) {
        let report = phi_g_with(
            &joint,
            &IpsConfig {
                tolerance: config.ips_tolerance,
                max_cycles: config.ips_max_cycles,
            },
        )?;
        if report.diagnostics.get("converged").copied() == Some(0.0) {
            flags.push("phi_G".into());
        }
        Some(report.value)
    } else {
        None
    };

    let mut cii: Vec<Option<f64>> = vec![None; config.w_sizes.len()];
    if want(MeasureTag::Cii) {
        let mut warm: Option<(usize, JointDistribution)> = None;
        for (k, &m) in config.w_sizes.iter().enumerate() {
            let family = SplitFamily::standard(n, m)?;
            // The previous minimizer grows one latent state at a time until it
            // fits this family; carrying it over keeps the columns
            // non-increasing in m.
            let warm_start = match &mut warm {
                Some((size, q)) => {
                    while *size < m {
                        *size += 1;
                        let step = SplitFamily::standard(n, *size)?;
                        *q = lift_latent(q, &step)?;
                    }
                    Some(&*q)
                }
                None => None,
            };
            let em = EmConfig {
                tolerance: config.em_tolerance,
                max_iterations: config.em_max_iterations,
                restarts: config.restarts,
                seed: mix_seed(point_seed, 2, k as u64),
                include_independent_start: true,
            };
            let outcome = phi_cii(&joint, &family, &em, warm_start)?;
            if outcome.report.diagnostics.get("best_converged").copied() == Some(0.0) {
                flags.push(format!("phi_CII_w{m}"));
            }
            cii[k] = Some(outcome.report.value);
            warm = Some((m, outcome.minimizer().clone()));
        }
    }

    let cis = if want(MeasureTag::Cis) {
        let outcome = phi_cis(
            &joint,
            &CisConfig {
                inner_tolerance: config.cis_inner_tolerance,
                max_inner_iterations: config.cis_max_inner_iterations,
                multi_starts: config.cis_multi_starts,
                seed: mix_seed(point_seed, 3, 0),
                residual_tolerance: config.cis_residual_tolerance,
                ..CisConfig::default()
            },
        )?;
        if outcome.report.diagnostics.get("best_converged").copied() == Some(0.0) {
            flags.push("phi_CIS".into());
        }
        Some(outcome.report.value)
    } else {
        None
    };

    let t = if want(MeasureTag::T) {
        match ground {
            Some(v) => {
                flags.push("T=ground_truth".into());
                Some(v)
            }
            None => {
                flags.push("T=SI".into());
                si_raw
            }
        }
    } else {
        None
    };

    Ok(Row {
        beta,
        i,
        si,
        g,
        cii,
        cis,
        t,
        flags,
    })
}
