use crate::dist::{JointDistribution, NORMALIZATION_TOL};
use crate::error::{DistError, Result};
use crate::space::Axis;

/// A conditional probability table: one row per given-state, each row a
/// distribution over the target states.
///
/// Rows and columns use the same row-major convention as [`ProductSpace`],
/// applied to the kernel's own `given` and `target` axis orders.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalKernel {
    given: Vec<Axis>,
    target: Vec<Axis>,
    given_size: usize,
    target_size: usize,
    table: Vec<f64>,
}

impl ConditionalKernel {
    /// `table` holds the rows concatenated: entry `g * target_size + t`.
    /// Each row must be nonnegative and sum to 1 within 1e-12.
    pub fn new(given: Vec<Axis>, target: Vec<Axis>, table: Vec<f64>) -> Result<ConditionalKernel> {
        if target.is_empty() {
            return Err(DistError::EmptyAxisSet);
        }
        for t in &target {
            if given.iter().any(|g| g.label == t.label) {
                return Err(DistError::DuplicateLabel(t.label.clone()));
            }
        }
        let given_size: usize = given.iter().map(|a| a.card).product();
        let target_size: usize = target.iter().map(|a| a.card).product();
        if table.len() != given_size * target_size {
            return Err(DistError::LengthMismatch {
                got: table.len(),
                want: given_size * target_size,
            });
        }
        for (i, &v) in table.iter().enumerate() {
            if !(v >= 0.0) {
                return Err(DistError::NegativeEntry { index: i, value: v });
            }
        }
        for g in 0..given_size {
            let sum: f64 = table[g * target_size..(g + 1) * target_size].iter().sum();
            if (sum - 1.0).abs() > NORMALIZATION_TOL {
                return Err(DistError::RowNotNormalized { row: g, sum });
            }
        }
        Ok(ConditionalKernel {
            given,
            target,
            given_size,
            target_size,
            table,
        })
    }

    pub fn given_axes(&self) -> &[Axis] {
        &self.given
    }

    pub fn target_axes(&self) -> &[Axis] {
        &self.target
    }

    pub fn given_size(&self) -> usize {
        self.given_size
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn row(&self, g: usize) -> &[f64] {
        &self.table[g * self.target_size..(g + 1) * self.target_size]
    }

    #[inline]
    pub fn prob(&self, g: usize, t: usize) -> f64 {
        self.table[g * self.target_size + t]
    }
}

impl JointDistribution {
    /// Conditional kernel of `target` given `given`, both subsets of this
    /// distribution's axes in the order passed.
    ///
    /// Row `g` is the restriction of the `target + given` marginal to the
    /// given-state `g`, divided by the given-marginal at `g`. A zero
    /// given-marginal is an error; it cannot occur for strictly positive
    /// distributions.
    pub fn condition(&self, target: &[usize], given: &[usize]) -> Result<ConditionalKernel> {
        self.space().check_subset(target)?;
        if !given.is_empty() {
            self.space().check_subset(given)?;
        }
        for &g in given {
            if target.contains(&g) {
                return Err(DistError::AxisOverlap(g));
            }
        }
        // Joint marginal with target axes first, then given axes.
        let mut both: Vec<usize> = target.to_vec();
        both.extend_from_slice(given);
        let joint = self.marginalize(&both)?;
        let target_axes: Vec<Axis> = target
            .iter()
            .map(|&a| self.space().axis(a).clone())
            .collect();
        let given_axes: Vec<Axis> = given
            .iter()
            .map(|&a| self.space().axis(a).clone())
            .collect();
        let t_size: usize = target_axes.iter().map(|a| a.card).product();
        let g_size: usize = given_axes.iter().map(|a| a.card).product::<usize>().max(1);
        // In `joint`, the target block varies fastest within each given-state
        // only if given axes come first; they come last, so reorder by
        // explicit index arithmetic instead: joint index = t * g_size + g is
        // wrong in general, compute from strides.
        let mut table = vec![0.0f64; g_size * t_size];
        let jspace = joint.space().clone();
        for state in 0..jspace.len() {
            let mut t_idx = 0usize;
            let mut g_idx = 0usize;
            let mut t_stride = 1usize;
            let mut g_stride = 1usize;
            for k in (0..both.len()).rev() {
                let c = jspace.coord(state, k);
                if k < target.len() {
                    t_idx += c * t_stride;
                    t_stride *= jspace.axis(k).card;
                } else {
                    g_idx += c * g_stride;
                    g_stride *= jspace.axis(k).card;
                }
            }
            table[g_idx * t_size + t_idx] += joint.prob(state);
        }
        for g in 0..g_size {
            let row = &mut table[g * t_size..(g + 1) * t_size];
            let mass: f64 = row.iter().sum();
            if !(mass > 0.0) {
                return Err(DistError::ZeroMarginal(g));
            }
            for v in row.iter_mut() {
                *v /= mass;
            }
        }
        ConditionalKernel::new(given_axes, target_axes, table)
    }
}
