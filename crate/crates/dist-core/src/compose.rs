use crate::dist::JointDistribution;
use crate::error::{DistError, Result};
use crate::kernel::ConditionalKernel;
use crate::space::{Axis, ProductSpace};

/// One multiplicative factor of a product-form distribution.
///
/// A `Marginal` contributes its own probability at the projected state; a
/// `Kernel` contributes the conditional probability of its target block given
/// its given block. Axes are matched to the composition space by label.
#[derive(Debug, Clone)]
pub enum Factor {
    Marginal(JointDistribution),
    Kernel(ConditionalKernel),
}

struct Lookup {
    /// (space stride, cardinality, factor-local stride) per factor axis.
    plan: Vec<(usize, usize, usize)>,
}

impl Lookup {
    fn build(space: &ProductSpace, axes: &[Axis], what: &str) -> Result<Lookup> {
        let mut plan = Vec::with_capacity(axes.len());
        let mut local_stride = 1usize;
        let mut rev = Vec::with_capacity(axes.len());
        for a in axes.iter().rev() {
            let idx = space.axis_index(&a.label).ok_or_else(|| {
                DistError::FactorMismatch(format!("{} axis `{}` not in space", what, a.label))
            })?;
            if space.axis(idx) != a {
                return Err(DistError::FactorMismatch(format!(
                    "{} axis `{}` differs from the space's axis",
                    what, a.label
                )));
            }
            rev.push((space.stride(idx), a.card, local_stride));
            local_stride *= a.card;
        }
        rev.reverse();
        plan.extend(rev);
        Ok(Lookup { plan })
    }

    #[inline]
    fn index(&self, state: usize) -> usize {
        let mut idx = 0usize;
        for &(stride, card, local) in &self.plan {
            idx += state / stride % card * local;
        }
        idx
    }
}

/// Multiplies the factors into a joint distribution over `space`.
///
/// Every axis of the space must be produced by exactly one factor: either as
/// an axis of a `Marginal` or as a target axis of a `Kernel`. Kernel given
/// axes may be any other axes of the space. The product of a well-formed
/// factorization is normalized up to rounding; the result is rescaled exactly
/// and a total mass off 1 by more than 1e-9 is reported as an error, since it
/// means the factors do not form a factorization of the space.
pub fn compose(space: &ProductSpace, factors: &[Factor]) -> Result<JointDistribution> {
    let mut cover = vec![0usize; space.n_axes()];
    for f in factors {
        let produced: &[Axis] = match f {
            Factor::Marginal(m) => m.space().axes(),
            Factor::Kernel(k) => k.target_axes(),
        };
        for a in produced {
            let idx = space.axis_index(&a.label).ok_or_else(|| {
                DistError::FactorMismatch(format!("axis `{}` not in space", a.label))
            })?;
            cover[idx] += 1;
        }
    }
    for (i, &c) in cover.iter().enumerate() {
        if c != 1 {
            return Err(DistError::BadFactorCover {
                axis: space.axis(i).label.clone(),
                count: c,
            });
        }
    }

    enum Prepared {
        Marginal(Lookup, Vec<f64>),
        Kernel(Lookup, Lookup, usize, Vec<f64>),
    }
    let mut prepared = Vec::with_capacity(factors.len());
    for f in factors {
        match f {
            Factor::Marginal(m) => {
                let lk = Lookup::build(space, m.space().axes(), "marginal")?;
                prepared.push(Prepared::Marginal(lk, m.probs().to_vec()));
            }
            Factor::Kernel(k) => {
                let gl = Lookup::build(space, k.given_axes(), "kernel given")?;
                let tl = Lookup::build(space, k.target_axes(), "kernel target")?;
                let rows: Vec<f64> = (0..k.given_size())
                    .flat_map(|g| k.row(g).iter().copied())
                    .collect();
                prepared.push(Prepared::Kernel(gl, tl, k.target_size(), rows));
            }
        }
    }

    let mut probs = vec![1.0f64; space.len()];
    for p in &prepared {
        match p {
            Prepared::Marginal(lk, vals) => {
                for (state, v) in probs.iter_mut().enumerate() {
                    *v *= vals[lk.index(state)];
                }
            }
            Prepared::Kernel(gl, tl, t_size, rows) => {
                for (state, v) in probs.iter_mut().enumerate() {
                    *v *= rows[gl.index(state) * t_size + tl.index(state)];
                }
            }
        }
    }

    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(DistError::NotNormalized { sum });
    }
    JointDistribution::new_normalized(space.clone(), probs)
}
