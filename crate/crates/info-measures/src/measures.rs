use dist_core::{compose, Factor, JointDistribution};

use crate::error::{MeasureError, Result};
use crate::report::{Measure, MeasureReport};
use crate::system::SystemJoint;

/// Mutual information between the past and present blocks. The attached
/// projection is the product of the two block marginals, the closest
/// distribution with independent past and present.
pub fn phi_i(system: &SystemJoint) -> Result<MeasureReport> {
    let dist = system.dist();
    let layout = system.layout();
    let value = dist.mutual_information(&layout.past, &layout.present)?;
    let mx = dist.marginalize(&layout.past)?;
    let my = dist.marginalize(&layout.present)?;
    let projection = compose(
        dist.space(),
        &[Factor::Marginal(mx), Factor::Marginal(my)],
    )?;
    Ok(MeasureReport::new(Measure::PhiI, value).with_projection(projection))
}

/// The split distribution P(x) * prod_i P(y_i | x_i), assembled from the
/// system's own marginal and per-node conditionals. This is the divergence
/// minimizer over the split model, so kl(P, project_si(P)) gives the
/// stochastic-interaction value.
pub fn project_si(system: &SystemJoint) -> Result<JointDistribution> {
    let dist = system.dist();
    let layout = system.layout();
    let mut factors = vec![Factor::Marginal(dist.marginalize(&layout.past)?)];
    for i in 0..layout.n {
        let k = dist.condition(&[layout.present[i]], &[layout.past[i]])?;
        factors.push(Factor::Kernel(k));
    }
    Ok(compose(dist.space(), &factors)?)
}

/// Stochastic interaction: sum_i H(Y_i | X_i) - H(Y | X), evaluated in closed
/// form. The attached projection is [`project_si`], and the closed form equals
/// the divergence to it.
pub fn phi_si(system: &SystemJoint) -> Result<MeasureReport> {
    let dist = system.dist();
    let layout = system.layout();
    let mut value = -dist.conditional_entropy(&layout.present, &layout.past)?;
    for i in 0..layout.n {
        value += dist.conditional_entropy(&[layout.present[i]], &[layout.past[i]])?;
    }
    let projection = project_si(system)?;
    Ok(MeasureReport::new(Measure::PhiSi, value).with_projection(projection))
}

/// Causal cross-connection strength of an extended joint: the sum over nodes
/// of the conditional mutual information between Y_i and the other past axes,
/// given X_i and the latent axis. Zero exactly when every present node is cut
/// off from the rest of the past once its own past and the latent state are
/// known.
///
/// The attached projection composes P(x) * prod_i P(y_i | x_i, w) * P(w) from
/// the joint's own factors; the value equals the divergence to it when the
/// latent axis is independent of the past block, which holds for the model
/// this measure is read against.
pub fn phi_t(extended: &JointDistribution) -> Result<MeasureReport> {
    let layout = extended.space().system_layout()?;
    let w = layout.latent.ok_or(MeasureError::MissingLatent)?;
    let n = layout.n;
    let mut value = 0.0;
    let mut report = MeasureReport::new(Measure::PhiT, 0.0);
    for i in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&j| j != i).map(|j| layout.past[j]).collect();
        let term = if rest.is_empty() {
            0.0
        } else {
            extended.conditional_mutual_information(
                &[layout.present[i]],
                &rest,
                &[layout.past[i], w],
            )?
        };
        report
            .diagnostics
            .insert(format!("node_{}", i + 1), term);
        value += term;
    }
    let mut factors = vec![
        Factor::Marginal(extended.marginalize(&layout.past)?),
        Factor::Marginal(extended.marginalize(&[w])?),
    ];
    for i in 0..n {
        let k = extended.condition(&[layout.present[i]], &[layout.past[i], w])?;
        factors.push(Factor::Kernel(k));
    }
    let projection = compose(extended.space(), &factors)?;
    report.value = crate::report::clamp_value(value);
    report.projection = Some(projection);
    Ok(report)
}
