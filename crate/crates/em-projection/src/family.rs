use dist_core::sampling::{random_joint, random_kernel, Rng};
use dist_core::{compose, Factor, JointDistribution, ProductSpace, SystemLayout};

use crate::error::{EmError, Result};

/// Descriptor of a latent split model over an extended space.
///
/// A member factorizes as
///
/// ```text
/// Q(x) * Q(w) * prod_i Q(y_i | x_parents(i), w)
/// ```
///
/// where `parent_of[i]` lists the past nodes feeding present node `i`. The
/// default has `parent_of[i] = {i}`, the per-node channel structure. With
/// `x_factorized` the past block itself splits into independent per-axis
/// marginals, which generalized variants use to forbid any shared cause on
/// the past side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitFamily {
    n: usize,
    parent_of: Vec<Vec<usize>>,
    x_factorized: bool,
    latent_size: usize,
}

impl SplitFamily {
    /// The default family: each present node keeps only its own past node as
    /// a parent, the past block stays one joint factor.
    pub fn standard(n: usize, latent_size: usize) -> Result<SplitFamily> {
        SplitFamily::custom((0..n).map(|i| vec![i]).collect(), false, latent_size)
    }

    /// Family with explicit per-node parent sets over the past nodes.
    pub fn custom(
        parent_of: Vec<Vec<usize>>,
        x_factorized: bool,
        latent_size: usize,
    ) -> Result<SplitFamily> {
        let n = parent_of.len();
        if n == 0 {
            return Err(EmError::BadFamily("no nodes".into()));
        }
        if latent_size == 0 {
            return Err(EmError::BadFamily("latent size must be positive".into()));
        }
        for (i, parents) in parent_of.iter().enumerate() {
            for (k, &p) in parents.iter().enumerate() {
                if p >= n {
                    return Err(EmError::BadFamily(format!(
                        "node {i} lists parent {p}, but there are only {n} nodes"
                    )));
                }
                if parents[..k].contains(&p) {
                    return Err(EmError::BadFamily(format!(
                        "node {i} lists parent {p} twice"
                    )));
                }
            }
        }
        Ok(SplitFamily {
            n,
            parent_of,
            x_factorized,
            latent_size,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parent_of(&self, i: usize) -> &[usize] {
        &self.parent_of[i]
    }

    pub fn x_factorized(&self) -> bool {
        self.x_factorized
    }

    pub fn latent_size(&self) -> usize {
        self.latent_size
    }

    /// Same parent structure with a different latent cardinality.
    pub fn with_latent_size(&self, latent_size: usize) -> Result<SplitFamily> {
        SplitFamily::custom(self.parent_of.clone(), self.x_factorized, latent_size)
    }

    /// Checks an extended joint's layout against this family and returns it.
    pub fn check_layout(&self, p: &JointDistribution) -> Result<SystemLayout> {
        let layout = p.space().system_layout().map_err(EmError::Dist)?;
        if layout.n != self.n {
            return Err(EmError::FamilyMismatch(format!(
                "family has {} nodes, joint has {}",
                self.n, layout.n
            )));
        }
        match layout.latent {
            None => Err(EmError::FamilyMismatch("joint has no latent axis".into())),
            Some(w) if p.space().axis(w).card != self.latent_size => {
                Err(EmError::FamilyMismatch(format!(
                    "family wants {} latent states, joint has {}",
                    self.latent_size,
                    p.space().axis(w).card
                )))
            }
            Some(_) => Ok(layout),
        }
    }

    /// The extended space this family lives on for the given per-node
    /// cardinalities.
    pub fn space(&self, cards: &[usize]) -> Result<ProductSpace> {
        if cards.len() != self.n {
            return Err(EmError::FamilyMismatch(format!(
                "family has {} nodes, got {} cardinalities",
                self.n,
                cards.len()
            )));
        }
        Ok(ProductSpace::extended(cards, self.latent_size)?)
    }

    /// Samples a member of the family by drawing every factor fresh: the past
    /// marginal (jointly, or per axis when `x_factorized`), the latent
    /// marginal, and each conditional kernel row from a flat simplex.
    pub fn sample_member<R: Rng + ?Sized>(
        &self,
        cards: &[usize],
        rng: &mut R,
    ) -> Result<JointDistribution> {
        let sp = self.space(cards)?;
        let layout = sp.system_layout()?;
        let w = layout.latent.expect("extended space has a latent axis");
        let w_axis = sp.axis(w).clone();
        let mut factors = Vec::new();
        if self.x_factorized {
            for &xi in &layout.past {
                let ax = ProductSpace::new(vec![sp.axis(xi).clone()])?;
                factors.push(Factor::Marginal(random_joint(&ax, rng)));
            }
        } else {
            let x_space = sp.subspace(&layout.past)?;
            factors.push(Factor::Marginal(random_joint(&x_space, rng)));
        }
        factors.push(Factor::Marginal(random_joint(
            &ProductSpace::new(vec![w_axis.clone()])?,
            rng,
        )));
        for i in 0..self.n {
            let mut given: Vec<_> = self.parent_of[i]
                .iter()
                .map(|&p| sp.axis(layout.past[p]).clone())
                .collect();
            given.push(w_axis.clone());
            let target = vec![sp.axis(layout.present[i]).clone()];
            factors.push(Factor::Kernel(random_kernel(given, target, rng)));
        }
        Ok(compose(&sp, &factors)?)
    }
}
