use dist_core::sampling::stream_rng;
use dist_core::{kl_divergence, JointDistribution, ProductSpace};
use info_measures::{Measure, MeasureReport, SystemJoint};

use crate::error::{EmError, Result};
use crate::family::SplitFamily;
use crate::projections::{e_projection, m_projection_floored};

/// Latent-marginal entries below this are raised during iteration; a latent
/// state that collapses numerically would leave conditional rows undefined.
const W_FLOOR: f64 = 1e-14;

/// Stop rule and restart budget for the alternating minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct EmConfig {
    /// Stop once the divergence decrease of a full cycle falls below this.
    pub tolerance: f64,
    /// Hard cap on cycles for one start.
    pub max_iterations: usize,
    /// Number of random starts.
    pub restarts: usize,
    /// Seed for the start sampler; restart r draws from stream (seed, r).
    pub seed: u64,
    /// Also run the deterministic start with the latent axis independent of
    /// the visible block. That start lands on the per-node split projection,
    /// capping the reported value by the stochastic-interaction divergence.
    pub include_independent_start: bool,
}

impl Default for EmConfig {
    fn default() -> EmConfig {
        EmConfig {
            tolerance: 1e-10,
            max_iterations: 10_000,
            restarts: 1,
            seed: 0,
            include_independent_start: true,
        }
    }
}

/// Per-iteration record of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct EmTrace {
    /// Divergences after each half-step, alternating between the
    /// visible-match step and the factorization step, ending with a closing
    /// visible-match value. Non-increasing throughout.
    pub divergences: Vec<f64>,
    /// Latent marginal of the final iterate.
    pub w_marginal: Vec<f64>,
    /// Whether the stop rule fired before the iteration cap.
    pub converged: bool,
    /// Full cycles used.
    pub iterations: usize,
}

/// Result of one start.
#[derive(Debug, Clone, PartialEq)]
pub struct EmRun {
    /// Divergence of the target to the minimizer's visible marginal.
    pub divergence: f64,
    /// Final family member.
    pub minimizer: JointDistribution,
    pub trace: EmTrace,
}

/// Alternates the two projections from `start` until the decrease of the
/// in-family divergence falls below `config.tolerance` or the iteration cap
/// is hit. The start may be any strictly positive extended joint; it is
/// projected into the family first.
///
/// The reported divergence is evaluated as the divergence of `target` to the
/// final iterate's visible marginal, which the final visible-match step makes
/// consistent with the extended-space divergence by construction.
pub fn em_run(
    target: &SystemJoint,
    family: &SplitFamily,
    start: &JointDistribution,
    config: &EmConfig,
) -> Result<EmRun> {
    let mut q = m_projection_floored(start, family, Some(W_FLOOR))?;
    let mut divergences = Vec::new();
    let mut prev_b: Option<f64> = None;
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..config.max_iterations {
        iterations += 1;
        let p = e_projection(&q, target)?;
        // Divergence of the visible-match step: equals the divergence of the
        // target to q's visible marginal.
        let a = kl_divergence(&p, &q)?;
        divergences.push(a);
        q = m_projection_floored(&p, family, Some(W_FLOOR))?;
        let b = kl_divergence(&p, &q)?;
        divergences.push(b);
        if let Some(pb) = prev_b {
            if pb - b < config.tolerance {
                converged = true;
                break;
            }
        }
        prev_b = Some(b);
    }
    // Closing visible-match step: the value the caller compares across
    // methods, exact for the returned minimizer.
    let closing = e_projection(&q, target)?;
    let divergence = kl_divergence(&closing, &q)?;
    divergences.push(divergence);
    let layout = q.space().system_layout()?;
    let w_marginal = q
        .marginalize(&[layout.latent.expect("family member")])?
        .probs()
        .to_vec();
    Ok(EmRun {
        divergence,
        minimizer: q,
        trace: EmTrace {
            divergences,
            w_marginal,
            converged,
            iterations,
        },
    })
}

/// The deterministic start that couples the target with a uniform independent
/// latent axis.
pub fn independent_start(
    target: &SystemJoint,
    latent_size: usize,
) -> Result<JointDistribution> {
    let mut axes = target.dist().space().axes().to_vec();
    axes.push(dist_core::Axis::new("W", dist_core::Role::Latent, latent_size));
    let sp = ProductSpace::new(axes)?;
    let mut probs = Vec::with_capacity(sp.len());
    for &p in target.dist().probs() {
        for _ in 0..latent_size {
            probs.push(p / latent_size as f64);
        }
    }
    Ok(JointDistribution::new_normalized(sp, probs)?)
}

/// Grows the latent axis by one state. The new state receives exactly 1e-6
/// of the total mass, shaped like the conditional of the last existing state,
/// and the result is projected back into `family`, which must be the grown
/// family. Giving the new state a fixed absolute share keeps repeated lifts
/// from stacking vanishing states on top of each other.
pub fn lift_latent(
    minimizer: &JointDistribution,
    family: &SplitFamily,
) -> Result<JointDistribution> {
    let layout = minimizer.space().system_layout().map_err(EmError::Dist)?;
    let w = layout
        .latent
        .ok_or_else(|| EmError::FamilyMismatch("joint has no latent axis".into()))?;
    let old_m = minimizer.space().axis(w).card;
    if family.latent_size() != old_m + 1 {
        return Err(EmError::FamilyMismatch(format!(
            "family wants {} latent states, lifting {} gives {}",
            family.latent_size(),
            old_m,
            old_m + 1
        )));
    }
    let mut axes = minimizer.space().axes().to_vec();
    axes[w].card = old_m + 1;
    let sp = ProductSpace::new(axes)?;
    const SLIVER: f64 = 1e-6;
    let last_share: f64 = minimizer
        .probs()
        .iter()
        .skip(old_m - 1)
        .step_by(old_m)
        .sum();
    let mut probs = Vec::with_capacity(sp.len());
    for z in 0..minimizer.len() / old_m {
        let row = &minimizer.probs()[z * old_m..(z + 1) * old_m];
        for &v in row {
            probs.push(v * (1.0 - SLIVER));
        }
        probs.push(row[old_m - 1] / last_share * SLIVER);
    }
    let grown = JointDistribution::new_normalized(sp, probs)?;
    m_projection_floored(&grown, family, Some(W_FLOOR))
}

/// Where a run started.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StartKind {
    /// Deterministic independent-latent start.
    Independent,
    /// Random in-family start from the given stream.
    Random(u64),
    /// Lifted best minimizer from the next-smaller latent size.
    Warm,
}

/// Outcome of one start within a multi-start search.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub start: StartKind,
    pub divergence: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Multi-start outcome: the winning report plus every run's summary, kept for
/// local-minimum analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct CiiOutcome {
    pub report: MeasureReport,
    pub runs: Vec<RunSummary>,
}

impl CiiOutcome {
    /// The winning family member.
    pub fn minimizer(&self) -> &JointDistribution {
        self.report.projection.as_ref().expect("set by phi_cii")
    }
}

/// Minimum divergence from the target into the family, over
/// `config.restarts` random starts, the independent start when configured,
/// and an optional warm start carried over from a smaller latent size.
///
/// `warm` must be a family member with latent size `family.latent_size() - 1`
/// or equal to it; a smaller one is lifted, an equal one is reused as-is.
pub fn phi_cii(
    target: &SystemJoint,
    family: &SplitFamily,
    config: &EmConfig,
    warm: Option<&JointDistribution>,
) -> Result<CiiOutcome> {
    let cards: Vec<usize> = target
        .layout()
        .past
        .iter()
        .map(|&a| target.dist().space().axis(a).card)
        .collect();
    let mut starts: Vec<(StartKind, JointDistribution)> = Vec::new();
    if config.include_independent_start {
        starts.push((
            StartKind::Independent,
            independent_start(target, family.latent_size())?,
        ));
    }
    if let Some(w) = warm {
        let w_layout = w.space().system_layout().map_err(EmError::Dist)?;
        let w_axis = w_layout
            .latent
            .ok_or_else(|| EmError::FamilyMismatch("warm start has no latent axis".into()))?;
        let got_m = w.space().axis(w_axis).card;
        let start = if got_m == family.latent_size() {
            w.clone()
        } else if got_m + 1 == family.latent_size() {
            lift_latent(w, family)?
        } else {
            return Err(EmError::FamilyMismatch(format!(
                "warm start has {} latent states, family wants {}",
                got_m,
                family.latent_size()
            )));
        };
        starts.push((StartKind::Warm, start));
    }
    for r in 0..config.restarts {
        let mut rng = stream_rng(config.seed, r as u64);
        starts.push((
            StartKind::Random(r as u64),
            family.sample_member(&cards, &mut rng)?,
        ));
    }
    let mut runs = Vec::with_capacity(starts.len());
    let mut best: Option<(f64, JointDistribution, bool)> = None;
    for (kind, start) in starts {
        let run = em_run(target, family, &start, config)?;
        runs.push(RunSummary {
            start: kind,
            divergence: run.divergence,
            converged: run.trace.converged,
            iterations: run.trace.iterations,
        });
        let better = match &best {
            None => true,
            Some((d, _, _)) => run.divergence < *d,
        };
        if better {
            best = Some((run.divergence, run.minimizer, run.trace.converged));
        }
    }
    let (value, minimizer, best_converged) = best.expect("at least one start");
    let mut report = MeasureReport::new(
        Measure::PhiCii {
            m: family.latent_size(),
        },
        value,
    )
    .with_projection(minimizer);
    report
        .diagnostics
        .insert("runs".into(), runs.len() as f64);
    report.diagnostics.insert(
        "converged_runs".into(),
        runs.iter().filter(|r| r.converged).count() as f64,
    );
    report
        .diagnostics
        .insert("best_converged".into(), best_converged as u8 as f64);
    for (k, r) in runs.iter().enumerate() {
        report
            .diagnostics
            .insert(format!("run_{k:02}_value"), r.divergence);
    }
    Ok(CiiOutcome { report, runs })
}
