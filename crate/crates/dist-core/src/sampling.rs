//! Seeded random generation of strictly positive distributions and kernels.
//!
//! Everything here is deterministic given (seed, stream), which is what the
//! reproducibility contract of the experiment layer rests on.

use crate::dist::JointDistribution;
use crate::kernel::ConditionalKernel;
use crate::space::{Axis, ProductSpace};

pub use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

/// Keeps sampled entries bounded away from zero before normalization.
const SAMPLE_FLOOR: f64 = 1e-12;

/// A counter-based generator for (seed, stream) pairs. Distinct streams under
/// the same seed are independent, so callers can hand out one stream per
/// parallel work item without coordinating draw order.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Samples a strictly positive point on the simplex of dimension `n`, flat
/// with respect to Lebesgue measure, by normalizing i.i.d. exponentials.
pub fn flat_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    assert!(n > 0, "simplex dimension must be positive");
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen::<f64>();
            -(1.0 - u).ln() + SAMPLE_FLOOR
        })
        .collect();
    let sum: f64 = v.iter().sum();
    for x in &mut v {
        *x /= sum;
    }
    v
}

/// Samples a strictly positive joint distribution on `space`, flat on the
/// simplex.
pub fn random_joint<R: Rng + ?Sized>(space: &ProductSpace, rng: &mut R) -> JointDistribution {
    let probs = flat_simplex(rng, space.len());
    JointDistribution::new_normalized(space.clone(), probs)
        .expect("simplex sample is positive and normalized")
}

/// Samples a conditional kernel whose rows are independent flat-simplex draws.
pub fn random_kernel<R: Rng + ?Sized>(
    given: Vec<Axis>,
    target: Vec<Axis>,
    rng: &mut R,
) -> ConditionalKernel {
    let given_size: usize = given.iter().map(|a| a.card).product();
    let target_size: usize = target.iter().map(|a| a.card).product();
    let mut table = Vec::with_capacity(given_size * target_size);
    for _ in 0..given_size {
        table.extend(flat_simplex(rng, target_size));
    }
    ConditionalKernel::new(given, target, table).expect("simplex rows are valid")
}
