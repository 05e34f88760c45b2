//! Penalty-schedule minimization with multi-start.
//!
//! Each start runs the schedule's stages in order, warm-starting every stage
//! from the previous one, with a limited-memory quasi-Newton descent and
//! backtracking line search inside each stage. The returned value is the
//! plain divergence at the best feasible iterate.

use std::collections::VecDeque;

use dist_core::sampling::{flat_simplex, stream_rng};
use dist_core::JointDistribution;
use info_measures::{project_si, Measure, MeasureReport, SystemJoint};

use crate::error::{CisError, Result};
use crate::objective::PenalizedObjective;

#[derive(Debug, Clone, PartialEq)]
pub struct CisConfig {
    /// Strictly increasing penalty weights; the last stage must be at least
    /// 1e6 so the constraint deviation it tolerates sits below the residual
    /// tolerance.
    pub penalty_schedule: Vec<f64>,
    /// Sup-norm of the gradient at which a stage stops early.
    pub inner_tolerance: f64,
    pub max_inner_iterations: usize,
    /// Number of random starts beside the target and split-projection
    /// starts.
    pub multi_starts: usize,
    pub seed: u64,
    /// Largest constraint deviation accepted as feasible.
    pub residual_tolerance: f64,
}

impl Default for CisConfig {
    fn default() -> CisConfig {
        CisConfig {
            penalty_schedule: vec![1e1, 1e3, 1e5, 1e7],
            inner_tolerance: 1e-9,
            max_inner_iterations: 4000,
            multi_starts: 20,
            seed: 0,
            residual_tolerance: 1e-7,
        }
    }
}

impl CisConfig {
    fn validate(&self) -> Result<()> {
        if self.penalty_schedule.is_empty() {
            return Err(CisError::BadSchedule("empty schedule".to_string()));
        }
        for pair in self.penalty_schedule.windows(2) {
            if !(pair[1] > pair[0]) {
                return Err(CisError::BadSchedule(format!(
                    "not strictly increasing at {} -> {}",
                    pair[0], pair[1]
                )));
            }
        }
        let last = *self.penalty_schedule.last().expect("nonempty");
        if !(last >= 1e6) {
            return Err(CisError::BadSchedule(format!(
                "final weight {last} below 1e6"
            )));
        }
        if !self.penalty_schedule.iter().all(|l| l.is_finite() && *l > 0.0) {
            return Err(CisError::BadSchedule("non-finite or nonpositive weight".to_string()));
        }
        Ok(())
    }
}

/// Where a run began.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CisStart {
    /// Logits of the target itself.
    Target,
    /// Logits of the target's split projection, a feasible point.
    SplitProjection,
    Random(u64),
}

/// End-of-stage bookkeeping: divergence, constraint deviation, and the
/// penalized objective evaluated at the final stage's weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageRecord {
    pub lambda: f64,
    pub divergence: f64,
    pub residual: f64,
    pub final_weight_objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CisRun {
    pub start: CisStart,
    pub divergence: f64,
    pub residual: f64,
    pub converged: bool,
    pub stages: Vec<StageRecord>,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CisOutcome {
    pub report: MeasureReport,
    pub runs: Vec<CisRun>,
}

impl CisOutcome {
    pub fn minimizer(&self) -> &JointDistribution {
        self.report
            .projection
            .as_ref()
            .expect("outcome always carries its minimizer")
    }
}

/// Limited-memory quasi-Newton descent with backtracking line search.
/// Returns the iteration count; `theta` holds the final point.
fn minimize(
    objective: &PenalizedObjective,
    theta: &mut [f64],
    max_iterations: usize,
    gradient_tolerance: f64,
) -> usize {
    const MEMORY: usize = 10;
    const ARMIJO: f64 = 1e-4;
    let dim = theta.len();
    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(MEMORY);
    let (mut value, mut grad) = objective.value_and_gradient(theta);
    let mut iterations = 0usize;
    let mut stagnant = 0usize;
    while iterations < max_iterations {
        let sup = grad.iter().cloned().fold(0.0f64, |m, g| m.max(g.abs()));
        if sup < gradient_tolerance {
            break;
        }
        iterations += 1;

        // Two-loop recursion over the stored curvature pairs.
        let mut direction: Vec<f64> = grad.iter().map(|g| -g).collect();
        let mut alphas = Vec::with_capacity(pairs.len());
        for (s, y, rho) in pairs.iter().rev() {
            let alpha = rho * dot(s, &direction);
            for k in 0..dim {
                direction[k] -= alpha * y[k];
            }
            alphas.push(alpha);
        }
        if let Some((s, y, _)) = pairs.back() {
            let scale = dot(s, y) / dot(y, y);
            for d in &mut direction {
                *d *= scale;
            }
        }
        for ((s, y, rho), alpha) in pairs.iter().zip(alphas.iter().rev()) {
            let beta = rho * dot(y, &direction);
            for k in 0..dim {
                direction[k] += (alpha - beta) * s[k];
            }
        }
        let mut slope = dot(&grad, &direction);
        if !(slope < 0.0) {
            direction.clear();
            direction.extend(grad.iter().map(|g| -g));
            slope = dot(&grad, &direction);
        }

        let mut step = 1.0f64;
        let mut candidate = vec![0.0f64; dim];
        let mut accepted = false;
        while step > 1e-20 {
            for k in 0..dim {
                candidate[k] = theta[k] + step * direction[k];
            }
            let trial = objective.value(&candidate);
            if trial <= value + ARMIJO * step * slope {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }

        let (new_value, new_grad) = objective.value_and_gradient(&candidate);
        let s: Vec<f64> = (0..dim).map(|k| candidate[k] - theta[k]).collect();
        let y: Vec<f64> = (0..dim).map(|k| new_grad[k] - grad[k]).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) {
            if pairs.len() == MEMORY {
                pairs.pop_front();
            }
            let rho = 1.0 / sy;
            pairs.push_back((s, y, rho));
        }
        theta.copy_from_slice(&candidate);
        // Progress below rounding noise for a few consecutive steps means
        // the stage has converged as far as f64 can express.
        if value - new_value < 1e-15 * (1.0 + value.abs()) {
            stagnant += 1;
            if stagnant >= 3 {
                break;
            }
        } else {
            stagnant = 0;
        }
        value = new_value;
        grad = new_grad;
    }
    iterations
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn run_schedule(
    objective: &mut PenalizedObjective,
    config: &CisConfig,
    start: CisStart,
    mut theta: Vec<f64>,
) -> (CisRun, Vec<f64>) {
    let final_lambda = *config.penalty_schedule.last().expect("validated nonempty");
    let mut stages = Vec::with_capacity(config.penalty_schedule.len());
    let mut iterations = 0usize;
    let mut q = objective.probabilities(&theta);
    let last_stage = config.penalty_schedule.len() - 1;
    for (stage, &lambda) in config.penalty_schedule.iter().enumerate() {
        objective.set_lambda(lambda);
        // Early stages only need to hand the next one a good warm start;
        // full gradient accuracy is only required at the final weight.
        let tolerance = if stage == last_stage {
            config.inner_tolerance
        } else {
            config.inner_tolerance.max(1e-6)
        };
        iterations += minimize(objective, &mut theta, config.max_inner_iterations, tolerance);
        q = objective.probabilities(&theta);
        let divergence = objective.divergence(&q);
        let residual = objective.max_residual_of(&q);
        objective.set_lambda(final_lambda);
        let final_weight_objective = objective.value(&theta);
        stages.push(StageRecord {
            lambda,
            divergence,
            residual,
            final_weight_objective,
        });
    }
    let last = stages.last().expect("schedule validated nonempty");
    let run = CisRun {
        start,
        divergence: last.divergence,
        residual: last.residual,
        converged: last.residual < config.residual_tolerance,
        stages,
        iterations,
    };
    (run, q)
}

/// Divergence to the conditional-independence constraint set.
///
/// Runs the penalty schedule from the target's own logits, from the split
/// projection (always feasible), and from seeded random logits, then keeps
/// the best feasible run: lowest divergence, ties broken by start order.
/// When no run reaches feasibility the best infeasible run is reported with
/// `converged` 0 in the diagnostics.
pub fn phi_cis(system: &SystemJoint, config: &CisConfig) -> Result<CisOutcome> {
    config.validate()?;
    let mut objective = PenalizedObjective::new(system, config.penalty_schedule[0]);
    let dim = objective.dimension();

    let mut starts: Vec<(CisStart, Vec<f64>)> = Vec::with_capacity(2 + config.multi_starts);
    let target_logits: Vec<f64> = system.dist().probs().iter().map(|&p| p.ln()).collect();
    starts.push((CisStart::Target, target_logits));
    let split = project_si(system)?;
    let split_logits: Vec<f64> = split.probs().iter().map(|&p| p.ln()).collect();
    starts.push((CisStart::SplitProjection, split_logits));
    for k in 0..config.multi_starts {
        let mut rng = stream_rng(config.seed, k as u64);
        let probs = flat_simplex(&mut rng, dim);
        let logits = probs.iter().map(|&p| p.ln()).collect();
        starts.push((CisStart::Random(k as u64), logits));
    }

    let mut runs = Vec::with_capacity(starts.len());
    let mut candidates = Vec::with_capacity(starts.len());
    for (start, theta) in starts {
        let (run, q) = run_schedule(&mut objective, config, start, theta);
        runs.push(run);
        candidates.push(q);
    }

    let pick = |feasible_only: bool| -> Option<usize> {
        let mut best: Option<usize> = None;
        for (k, run) in runs.iter().enumerate() {
            if feasible_only && !run.converged {
                continue;
            }
            match best {
                None => best = Some(k),
                Some(b) => {
                    if run.divergence < runs[b].divergence {
                        best = Some(k)
                    }
                }
            }
        }
        best
    };
    let best_index = pick(true).or_else(|| pick(false)).expect("at least one start");
    let best = &runs[best_index];

    // Underflowed entries would break strict positivity; the floor is far
    // below anything the divergence can distinguish.
    let floored: Vec<f64> = candidates[best_index].iter().map(|&v| v.max(1e-300)).collect();
    let minimizer =
        JointDistribution::new_normalized(system.dist().space().clone(), floored)?;

    let mut report = MeasureReport::new(Measure::PhiCis, best.divergence)
        .with_projection(minimizer)
        .with_diagnostic("runs", runs.len() as f64)
        .with_diagnostic(
            "converged_runs",
            runs.iter().filter(|r| r.converged).count() as f64,
        )
        .with_diagnostic("best_converged", best.converged as u8 as f64)
        .with_diagnostic("residual", best.residual)
        .with_diagnostic("iterations", runs.iter().map(|r| r.iterations).sum::<usize>() as f64);
    for (k, run) in runs.iter().enumerate() {
        report = report.with_diagnostic(&format!("run_{k:02}_value"), run.divergence);
    }
    Ok(CisOutcome { report, runs })
}
