//! Iterative proportional scaling onto clique-marginal models.
//!
//! A clique system lists subsets of axes; the model it induces contains every
//! distribution that factors into positive functions over those subsets. The
//! scaling loop starts at the uniform distribution, which lies in the model,
//! and repeatedly rescales so one clique marginal at a time matches the
//! target. Each rescale stays inside the model, so the limit is the
//! divergence minimizer with all clique marginals fitted.
//!
//! [`phi_g`] applies this with the diagonal split cliques: the whole past
//! block, the whole present block, and each past/present pair.

use std::collections::BTreeMap;

use dist_core::sampling::Rng;
use dist_core::{kl_divergence, DistError, JointDistribution, ProductSpace};
use info_measures::{Measure, MeasureReport, SystemJoint};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IpsError {
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Measure(#[from] info_measures::MeasureError),
}

pub type Result<T> = std::result::Result<T, IpsError>;

/// Axis subsets whose marginals define a hierarchical model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSystem {
    cliques: Vec<Vec<usize>>,
}

impl CliqueSystem {
    pub fn new(space: &ProductSpace, cliques: Vec<Vec<usize>>) -> Result<CliqueSystem> {
        for c in &cliques {
            space.check_subset(c)?;
        }
        Ok(CliqueSystem { cliques })
    }

    /// The diagonal split cliques of an n-node system: past block, present
    /// block, and one {X_i, Y_i} pair per node.
    pub fn diagonal_split(system: &SystemJoint) -> CliqueSystem {
        let layout = system.layout();
        let mut cliques = vec![layout.past.clone(), layout.present.clone()];
        for i in 0..layout.n {
            cliques.push(vec![layout.past[i], layout.present[i]]);
        }
        CliqueSystem { cliques }
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IpsConfig {
    /// Largest clique-marginal deviation accepted as converged.
    pub tolerance: f64,
    pub max_cycles: usize,
}

impl Default for IpsConfig {
    fn default() -> IpsConfig {
        IpsConfig {
            tolerance: 1e-12,
            max_cycles: 50_000,
        }
    }
}

/// Outcome of a scaling run.
#[derive(Debug, Clone, PartialEq)]
pub struct IpsRun {
    pub result: JointDistribution,
    /// Divergence of the target to the iterate after each full cycle.
    pub divergences: Vec<f64>,
    pub cycles: usize,
    pub converged: bool,
    /// Largest clique-marginal deviation at return.
    pub marginal_gap: f64,
}

struct CliquePlan {
    /// (space stride, cardinality, marginal stride) per clique axis.
    plan: Vec<(usize, usize, usize)>,
    size: usize,
    target_marginal: Vec<f64>,
}

impl CliquePlan {
    fn build(p: &JointDistribution, clique: &[usize]) -> CliquePlan {
        let space = p.space();
        let mut size = 1usize;
        let mut plan = Vec::with_capacity(clique.len());
        for &a in clique.iter().rev() {
            plan.push((space.stride(a), space.axis(a).card, size));
            size *= space.axis(a).card;
        }
        let mut target_marginal = vec![0.0f64; size];
        for (state, &v) in p.probs().iter().enumerate() {
            target_marginal[Self::index_with(&plan, state)] += v;
        }
        CliquePlan {
            plan,
            size,
            target_marginal,
        }
    }

    #[inline]
    fn index_with(plan: &[(usize, usize, usize)], state: usize) -> usize {
        let mut idx = 0usize;
        for &(stride, card, local) in plan {
            idx += state / stride % card * local;
        }
        idx
    }

    #[inline]
    fn index(&self, state: usize) -> usize {
        Self::index_with(&self.plan, state)
    }

    fn current_marginal(&self, probs: &[f64]) -> Vec<f64> {
        let mut m = vec![0.0f64; self.size];
        for (state, &v) in probs.iter().enumerate() {
            m[self.index(state)] += v;
        }
        m
    }

    fn deviation(&self, probs: &[f64]) -> f64 {
        self.current_marginal(probs)
            .iter()
            .zip(&self.target_marginal)
            .map(|(q, p)| (q - p).abs())
            .fold(0.0, f64::max)
    }
}

/// Fits all clique marginals of the target by cyclic rescaling from the
/// uniform start. Convergence is judged by the largest marginal deviation.
pub fn ips_project(
    target: &JointDistribution,
    cliques: &CliqueSystem,
    config: &IpsConfig,
) -> Result<IpsRun> {
    let plans: Vec<CliquePlan> = cliques
        .cliques()
        .iter()
        .map(|c| CliquePlan::build(target, c))
        .collect();
    let len = target.len();
    let mut probs = vec![1.0 / len as f64; len];
    let mut divergences = Vec::new();
    let mut cycles = 0;
    let mut converged = false;
    let mut gap = f64::INFINITY;
    while cycles < config.max_cycles {
        cycles += 1;
        for plan in &plans {
            let current = plan.current_marginal(&probs);
            for (state, v) in probs.iter_mut().enumerate() {
                let idx = plan.index(state);
                *v *= plan.target_marginal[idx] / current[idx];
            }
        }
        let mass: f64 = probs.iter().sum();
        for v in &mut probs {
            *v /= mass;
        }
        let q = JointDistribution::new_normalized(target.space().clone(), probs.clone())?;
        divergences.push(kl_divergence(target, &q)?);
        gap = plans
            .iter()
            .map(|pl| pl.deviation(&probs))
            .fold(0.0, f64::max);
        if gap < config.tolerance {
            converged = true;
            break;
        }
    }
    let result = JointDistribution::new_normalized(target.space().clone(), probs)?;
    Ok(IpsRun {
        result,
        divergences,
        cycles,
        converged,
        marginal_gap: gap,
    })
}

/// Divergence to the diagonally split clique model.
pub fn phi_g(system: &SystemJoint) -> Result<MeasureReport> {
    phi_g_with(system, &IpsConfig::default())
}

pub fn phi_g_with(system: &SystemJoint, config: &IpsConfig) -> Result<MeasureReport> {
    let cliques = CliqueSystem::diagonal_split(system);
    let run = ips_project(system.dist(), &cliques, config)?;
    let value = kl_divergence(system.dist(), &run.result)?;
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("cycles".to_string(), run.cycles as f64);
    diagnostics.insert("marginal_gap".to_string(), run.marginal_gap);
    diagnostics.insert("converged".to_string(), run.converged as u8 as f64);
    let mut report = MeasureReport::new(Measure::PhiG, value).with_projection(run.result);
    report.diagnostics = diagnostics;
    Ok(report)
}

/// Samples a member of the clique model by drawing each clique factor's
/// entries from independent exponentials and multiplying them together.
pub fn sample_clique_member<R: Rng + ?Sized>(
    space: &ProductSpace,
    cliques: &CliqueSystem,
    rng: &mut R,
) -> Result<JointDistribution> {
    let mut probs = vec![1.0f64; space.len()];
    for clique in cliques.cliques() {
        let mut size = 1usize;
        let mut plan = Vec::with_capacity(clique.len());
        for &a in clique.iter().rev() {
            plan.push((space.stride(a), space.axis(a).card, size));
            size *= space.axis(a).card;
        }
        let factor: Vec<f64> = (0..size)
            .map(|_| {
                let u: f64 = rng.gen();
                -(1.0 - u).ln() + 1e-6
            })
            .collect();
        for (state, v) in probs.iter_mut().enumerate() {
            *v *= factor[CliquePlan::index_with(&plan, state)];
        }
    }
    Ok(JointDistribution::new_normalized(space.clone(), probs)?)
}
