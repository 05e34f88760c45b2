use dist_core::{JointDistribution, SystemLayout};

use crate::error::{MeasureError, Result};

/// A joint distribution over a canonical past/present system: axes
/// X1..Xn, Y1..Yn with |Xi| = |Yi|, no latent axis.
///
/// The wrapper pins the layout once at construction so measure code can
/// address past and present blocks by index without re-validating.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemJoint {
    dist: JointDistribution,
    layout: SystemLayout,
}

impl SystemJoint {
    pub fn new(dist: JointDistribution) -> Result<SystemJoint> {
        let layout = dist.space().system_layout()?;
        if layout.latent.is_some() {
            return Err(MeasureError::UnexpectedLatent);
        }
        Ok(SystemJoint { dist, layout })
    }

    pub fn dist(&self) -> &JointDistribution {
        &self.dist
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    /// Node count.
    pub fn n(&self) -> usize {
        self.layout.n
    }

    pub fn into_dist(self) -> JointDistribution {
        self.dist
    }
}
