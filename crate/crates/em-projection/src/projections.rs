use dist_core::{compose, ConditionalKernel, Factor, JointDistribution};
use info_measures::SystemJoint;

use crate::error::{EmError, Result};
use crate::family::SplitFamily;

/// Entries below this are raised to it. The quantities built here are
/// products of strictly positive numbers, so an exact zero can only be
/// floating-point underflow; near-deterministic targets (strong coupling)
/// drive responsibilities below the subnormal range within a few cycles.
/// The floor sits far below every resolvable tolerance yet high enough that
/// a product over all factors of a family stays representable.
const MASS_FLOOR: f64 = 1e-30;

/// Replaces the visible-block marginal of `q_ext` with `target` while keeping
/// the conditional of the latent axis given the visible block:
///
/// ```text
/// result(z, w) = target(z) * q_ext(w | z)
/// ```
///
/// Among all extended joints whose visible marginal equals the target, this
/// one is the divergence minimizer toward `q_ext`, and its divergence to
/// `q_ext` equals the divergence of the target to `q_ext`'s visible marginal.
pub fn e_projection(q_ext: &JointDistribution, target: &SystemJoint) -> Result<JointDistribution> {
    let layout = q_ext.space().system_layout().map_err(EmError::Dist)?;
    let w = layout
        .latent
        .ok_or_else(|| EmError::FamilyMismatch("joint has no latent axis".into()))?;
    let visible_axes = &q_ext.space().axes()[..w];
    if visible_axes != target.dist().space().axes() {
        return Err(EmError::FamilyMismatch(
            "target axes differ from the joint's visible axes".into(),
        ));
    }
    let w_card = q_ext.space().axis(w).card;
    let vis_len = target.dist().len();
    let mut out = vec![0.0f64; q_ext.len()];
    for z in 0..vis_len {
        let row = &q_ext.probs()[z * w_card..(z + 1) * w_card];
        let mass: f64 = row.iter().sum();
        let t = target.dist().prob(z);
        for (wi, &qv) in row.iter().enumerate() {
            out[z * w_card + wi] = (t * qv / mass).max(MASS_FLOOR);
        }
    }
    Ok(JointDistribution::new_normalized(
        q_ext.space().clone(),
        out,
    )?)
}

/// Composes the family's factorization from the joint's own marginals and
/// conditionals:
///
/// ```text
/// Q(x) * Q(w) * prod_i Q(y_i | x_parents(i), w)
/// ```
///
/// each factor read off `p_ext`. The result is the divergence minimizer from
/// `p_ext` into the family.
pub fn m_projection(p_ext: &JointDistribution, family: &SplitFamily) -> Result<JointDistribution> {
    m_projection_floored(p_ext, family, None)
}

/// Like [`m_projection`], but raises latent-marginal entries below `floor` so
/// the fixed-point loop cannot round a latent state down to nothing. A floored
/// result is still a family member exactly.
pub(crate) fn m_projection_floored(
    p_ext: &JointDistribution,
    family: &SplitFamily,
    floor: Option<f64>,
) -> Result<JointDistribution> {
    let layout = family.check_layout(p_ext)?;
    let w = layout.latent.expect("checked by the family");
    let mut factors = Vec::new();
    if family.x_factorized() {
        for &xi in &layout.past {
            factors.push(Factor::Marginal(p_ext.marginalize(&[xi])?));
        }
    } else {
        factors.push(Factor::Marginal(p_ext.marginalize(&layout.past)?));
    }
    let mut w_marg = p_ext.marginalize(&[w])?;
    if let Some(eps) = floor {
        if w_marg.probs().iter().any(|&v| v < eps) {
            let raised: Vec<f64> = w_marg.probs().iter().map(|&v| v.max(eps)).collect();
            w_marg = JointDistribution::new_normalized(w_marg.space().clone(), raised)?;
        }
    }
    factors.push(Factor::Marginal(w_marg));
    for i in 0..family.n() {
        let mut given: Vec<usize> = family
            .parent_of(i)
            .iter()
            .map(|&p| layout.past[p])
            .collect();
        given.push(w);
        let k = p_ext.condition(&[layout.present[i]], &given)?;
        factors.push(Factor::Kernel(raise_row_floor(k)?));
    }
    Ok(compose(p_ext.space(), &factors)?)
}

/// Raises kernel entries below [`MASS_FLOOR`] and renormalizes the touched
/// rows, so the composed product cannot underflow to an exact zero.
fn raise_row_floor(k: ConditionalKernel) -> Result<ConditionalKernel> {
    let tiny = (0..k.given_size()).any(|g| k.row(g).iter().any(|&v| v < MASS_FLOOR));
    if !tiny {
        return Ok(k);
    }
    let mut table = Vec::with_capacity(k.given_size() * k.target_size());
    for g in 0..k.given_size() {
        let mass: f64 = k.row(g).iter().map(|&v| v.max(MASS_FLOOR)).sum();
        table.extend(k.row(g).iter().map(|&v| v.max(MASS_FLOOR) / mass));
    }
    Ok(ConditionalKernel::new(
        k.given_axes().to_vec(),
        k.target_axes().to_vec(),
        table,
    )?)
}

/// Marginal over the visible block of an extended joint, as a system joint.
pub fn visible_marginal(p_ext: &JointDistribution) -> Result<SystemJoint> {
    let layout = p_ext.space().system_layout().map_err(EmError::Dist)?;
    if layout.latent.is_none() {
        return Err(EmError::FamilyMismatch("joint has no latent axis".into()));
    }
    let visible = layout.visible();
    Ok(SystemJoint::new(p_ext.marginalize(&visible)?)?)
}
