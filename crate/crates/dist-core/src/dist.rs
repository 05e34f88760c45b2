use crate::error::{DistError, Result};
use crate::space::ProductSpace;

/// Tolerance on the total mass accepted by the strict constructor.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Floor applied to user-supplied entries by [`JointDistribution::with_floor`].
pub const PROB_FLOOR: f64 = 1e-12;

/// A strictly positive probability vector over a [`ProductSpace`].
///
/// Entries are stored in the space's row-major order. The strict constructor
/// rejects nonpositive entries and total mass off 1 by more than 1e-12;
/// [`JointDistribution::with_floor`] accepts zeros in user-supplied data by
/// flooring them at 1e-12 and renormalizing. All operations are pure and the
/// value is immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    space: ProductSpace,
    probs: Vec<f64>,
}

impl JointDistribution {
    /// Strict constructor: entries must be positive and sum to 1 within 1e-12.
    pub fn new(space: ProductSpace, probs: Vec<f64>) -> Result<JointDistribution> {
        if probs.len() != space.len() {
            return Err(DistError::LengthMismatch {
                got: probs.len(),
                want: space.len(),
            });
        }
        for (i, &v) in probs.iter().enumerate() {
            if !(v > 0.0) {
                return Err(DistError::NonPositiveEntry { index: i, value: v });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(DistError::NotNormalized { sum });
        }
        Ok(JointDistribution { space, probs })
    }

    /// Accepts any positive vector with positive total mass and rescales it
    /// to sum to 1. Solvers use this to turn intermediate products into
    /// distributions without accumulating normalization drift.
    pub fn new_normalized(space: ProductSpace, mut probs: Vec<f64>) -> Result<JointDistribution> {
        if probs.len() != space.len() {
            return Err(DistError::LengthMismatch {
                got: probs.len(),
                want: space.len(),
            });
        }
        for (i, &v) in probs.iter().enumerate() {
            if !(v > 0.0) {
                return Err(DistError::NonPositiveEntry { index: i, value: v });
            }
        }
        let sum: f64 = probs.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(DistError::NotNormalized { sum });
        }
        for v in &mut probs {
            *v /= sum;
        }
        Ok(JointDistribution { space, probs })
    }

    /// Floor mode for user-supplied data: entries must be nonnegative and are
    /// raised to at least 1e-12, then the vector is renormalized.
    pub fn with_floor(space: ProductSpace, mut probs: Vec<f64>) -> Result<JointDistribution> {
        if probs.len() != space.len() {
            return Err(DistError::LengthMismatch {
                got: probs.len(),
                want: space.len(),
            });
        }
        for (i, &v) in probs.iter().enumerate() {
            if !(v >= 0.0) {
                return Err(DistError::NegativeEntry { index: i, value: v });
            }
        }
        for v in &mut probs {
            if *v < PROB_FLOOR {
                *v = PROB_FLOOR;
            }
        }
        Self::new_normalized(space, probs)
    }

    /// The uniform distribution over `space`.
    pub fn uniform(space: ProductSpace) -> JointDistribution {
        let n = space.len();
        JointDistribution {
            space,
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub(crate) fn from_raw(space: ProductSpace, probs: Vec<f64>) -> JointDistribution {
        debug_assert_eq!(space.len(), probs.len());
        debug_assert!({
            let s: f64 = probs.iter().sum();
            (s - 1.0).abs() < 1e-9
        });
        JointDistribution { space, probs }
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn prob(&self, state: usize) -> f64 {
        self.probs[state]
    }

    /// Sums out every axis not listed in `keep`. The result's axes appear in
    /// the order given. Passing every axis in space order returns the
    /// distribution unchanged.
    pub fn marginalize(&self, keep: &[usize]) -> Result<JointDistribution> {
        self.space.check_subset(keep)?;
        let sub = self.space.subspace(keep)?;
        let mut out = vec![0.0f64; sub.len()];
        // Destination index of a source state is the dot product of its kept
        // coordinates with the subspace strides.
        let plan: Vec<(usize, usize, usize)> = keep
            .iter()
            .enumerate()
            .map(|(k, &a)| (self.space.stride(a), self.space.axis(a).card, sub.stride(k)))
            .collect();
        for (state, &p) in self.probs.iter().enumerate() {
            let mut dst = 0usize;
            for &(src_stride, card, dst_stride) in &plan {
                dst += state / src_stride % card * dst_stride;
            }
            out[dst] += p;
        }
        Ok(JointDistribution::from_raw(sub, out))
    }

    /// Largest absolute entrywise difference to another distribution on the
    /// same space.
    pub fn max_abs_diff(&self, other: &JointDistribution) -> Result<f64> {
        if self.space != other.space {
            return Err(DistError::SpaceMismatch);
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// L1 distance to another distribution on the same space.
    pub fn l1_distance(&self, other: &JointDistribution) -> Result<f64> {
        if self.space != other.space {
            return Err(DistError::SpaceMismatch);
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .sum())
    }

    /// Relabels the states of one axis: state `s` of `axis` becomes state
    /// `perm[s]` in the result.
    pub fn permute_axis_states(&self, axis: usize, perm: &[usize]) -> Result<JointDistribution> {
        if axis >= self.space.n_axes() {
            return Err(DistError::AxisOutOfRange(axis));
        }
        let card = self.space.axis(axis).card;
        if perm.len() != card {
            return Err(DistError::BadPermutation(card));
        }
        let mut seen = vec![false; card];
        for &t in perm {
            if t >= card || seen[t] {
                return Err(DistError::BadPermutation(card));
            }
            seen[t] = true;
        }
        let stride = self.space.stride(axis);
        let mut out = vec![0.0f64; self.probs.len()];
        for (state, &p) in self.probs.iter().enumerate() {
            let c = state / stride % card;
            let dst = state - c * stride + perm[c] * stride;
            out[dst] = p;
        }
        Ok(JointDistribution {
            space: self.space.clone(),
            probs: out,
        })
    }
}
