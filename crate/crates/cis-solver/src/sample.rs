//! Sampler for two-node joints that satisfy the conditional-independence
//! constraints without any latent-mixture structure: the first present node
//! depends on its own past and on the other present node, which itself is
//! exogenous.

use dist_core::sampling::{flat_simplex, random_kernel, stream_rng};
use dist_core::{compose, Factor, JointDistribution, ProductSpace};
use info_measures::SystemJoint;

/// Draws P(x1) P(x2) P(y2) P(y1 | x1, y2) on the two-node binary system.
///
/// Y2 ignores the past entirely, so its conditional given any past is its
/// marginal; Y1's conditional given the full past marginalizes Y2 out and
/// depends on x1 alone. Both constraint families hold exactly, while the
/// Y1-Y2 coupling keeps the joint outside the latent-split models.
pub fn sample_ncis(seed: u64) -> SystemJoint {
    let space = ProductSpace::system(&[2, 2]).expect("two-node system");
    let mut rng = stream_rng(seed, 0);
    let x1 = space.subspace(&[0]).expect("axis 0");
    let x2 = space.subspace(&[1]).expect("axis 1");
    let y2 = space.subspace(&[3]).expect("axis 3");
    let m_x1 = JointDistribution::new_normalized(x1, flat_simplex(&mut rng, 2))
        .expect("positive simplex draw");
    let m_x2 = JointDistribution::new_normalized(x2, flat_simplex(&mut rng, 2))
        .expect("positive simplex draw");
    let m_y2 = JointDistribution::new_normalized(y2, flat_simplex(&mut rng, 2))
        .expect("positive simplex draw");
    let k_y1 = random_kernel(
        vec![space.axis(0).clone(), space.axis(3).clone()],
        vec![space.axis(2).clone()],
        &mut rng,
    );
    let joint = compose(
        &space,
        &[
            Factor::Marginal(m_x1),
            Factor::Marginal(m_x2),
            Factor::Marginal(m_y2),
            Factor::Kernel(k_y1),
        ],
    )
    .expect("factorization covers the space");
    SystemJoint::new(joint).expect("system-shaped by construction")
}
