use std::collections::BTreeMap;
use std::fmt;

use dist_core::JointDistribution;

/// Identifier of an integrated-information measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Measure {
    /// Mutual information between past and present.
    PhiI,
    /// Stochastic-interaction divergence.
    PhiSi,
    /// Divergence to the graphical split model.
    PhiG,
    /// Divergence to the conditional-independence split constraint set.
    PhiCis,
    /// Divergence to the latent-mixture split model with `m` latent states.
    PhiCii { m: usize },
    /// Causal cross-connection sum on an extended joint.
    PhiT,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::PhiI => write!(f, "phi_I"),
            Measure::PhiSi => write!(f, "phi_SI"),
            Measure::PhiG => write!(f, "phi_G"),
            Measure::PhiCis => write!(f, "phi_CIS"),
            Measure::PhiCii { m } => write!(f, "phi_CII_m{m}"),
            Measure::PhiT => write!(f, "phi_T"),
        }
    }
}

/// Negative values larger than this magnitude are genuine errors and are left
/// visible; anything closer to zero is floating-point cancellation.
pub const VALUE_CLAMP: f64 = 1e-12;

/// Result of evaluating a measure: the value in nats, the minimizing
/// distribution when one is available, and solver metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub measure: Measure,
    pub value: f64,
    /// The minimizer over the measure's model, on the space the solver worked
    /// in (extended for latent-variable measures).
    pub projection: Option<JointDistribution>,
    /// Iteration counts, restart values, residuals and the like.
    pub diagnostics: BTreeMap<String, f64>,
}

impl MeasureReport {
    /// Builds a report, snapping cancellation noise in (-1e-12, 0) to 0.
    pub fn new(measure: Measure, value: f64) -> MeasureReport {
        MeasureReport {
            measure,
            value: clamp_value(value),
            projection: None,
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn with_projection(mut self, projection: JointDistribution) -> MeasureReport {
        self.projection = Some(projection);
        self
    }

    pub fn with_diagnostic(mut self, key: &str, value: f64) -> MeasureReport {
        self.diagnostics.insert(key.to_string(), value);
        self
    }
}

/// Snaps values in (-1e-12, 0) to 0; larger negatives pass through untouched
/// so a broken solver cannot hide behind the clamp.
pub fn clamp_value(value: f64) -> f64 {
    if value < 0.0 && value > -VALUE_CLAMP {
        0.0
    } else {
        value
    }
}
