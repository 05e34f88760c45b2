//! Binary auto-logistic (weighted Ising) dynamics on n nodes.
//!
//! Each node holds a spin in {-1, +1}, encoded as states 0 and 1. Given the
//! past configuration x, the present spins update independently:
//!
//! ```text
//! P(y_j = s | x) = 1 / (1 + exp(-2 beta s sum_i v_ij spin(x_i)))
//! ```
//!
//! with `v_ij` the weight from node i's past to node j's present. The
//! stationary marginal is found by power iteration, and pairing it with the
//! kernel yields the stationary joint every experiment consumes.

mod error;

pub use error::{IsingError, Result};

use dist_core::sampling::{flat_simplex, stream_rng};
use dist_core::{ConditionalKernel, JointDistribution, ProductSpace};
use info_measures::SystemJoint;

/// Weight matrices used in the published sweep figures.
pub const PRESET_NAMES: [&str; 3] = ["paper-n2", "paper-n3", "paper-n5"];

const PAPER_N2: [[f64; 2]; 2] = [[0.0084181, -0.2401545], [0.39270161, 0.37198751]];

const PAPER_N3: [[f64; 3]; 3] = [
    [-0.43478388, 0.47448218, 0.36808313],
    [0.52117467, 0.00672578, -0.7387737],
    [-0.56114795, -0.96941243, -0.76408711],
];

const PAPER_N5: [[f64; 5]; 5] = [
    [-0.35615839, -0.09775903, 0.89743801, -0.00604247, -0.03897772],
    [-0.2260056, 0.47769717, -0.4302256, 0.18692707, 0.25140741],
    [-0.86081159, -0.18348132, -0.71528754, -0.08100602, -0.64364176],
    [-0.13967234, -0.03233011, -0.81057654, -0.33327558, -0.57447322],
    [0.18920264, -0.99054716, 0.32088358, 0.69100397, -0.69206604],
];

pub fn preset_weights(name: &str) -> Result<Vec<Vec<f64>>> {
    let rows: Vec<Vec<f64>> = match name {
        "paper-n2" => PAPER_N2.iter().map(|r| r.to_vec()).collect(),
        "paper-n3" => PAPER_N3.iter().map(|r| r.to_vec()).collect(),
        "paper-n5" => PAPER_N5.iter().map(|r| r.to_vec()).collect(),
        other => return Err(IsingError::UnknownPreset(other.to_string())),
    };
    Ok(rows)
}

/// An n-node system: weights plus a coupling strength.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingSystem {
    n: usize,
    /// Row-major n-by-n, entry (i, j) weighting node i's past on node j's
    /// present.
    weights: Vec<f64>,
    beta: f64,
}

impl IsingSystem {
    pub fn new(weights: &[Vec<f64>], beta: f64) -> Result<IsingSystem> {
        let n = weights.len();
        if n == 0 {
            return Err(IsingError::BadWeights("empty matrix".to_string()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in weights {
            if row.len() != n {
                return Err(IsingError::BadWeights(format!(
                    "row of length {} in a {n}-node matrix",
                    row.len()
                )));
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(IsingError::BadWeights(format!("non-finite entry {v}")));
                }
                flat.push(v);
            }
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(IsingError::BadBeta(beta));
        }
        Ok(IsingSystem {
            n,
            weights: flat,
            beta,
        })
    }

    pub fn preset(name: &str, beta: f64) -> Result<IsingSystem> {
        IsingSystem::new(&preset_weights(name)?, beta)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    pub fn with_beta(&self, beta: f64) -> Result<IsingSystem> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(IsingError::BadBeta(beta));
        }
        Ok(IsingSystem {
            beta,
            ..self.clone()
        })
    }

    /// The one-step kernel over all present nodes given all past nodes.
    /// Present spins are conditionally independent, so each row is a product
    /// of per-node logistic factors and sums to 1 analytically.
    pub fn transition_kernel(&self) -> Result<ConditionalKernel> {
        let n = self.n;
        let states = 1usize << n;
        let mut table = vec![0.0f64; states * states];
        let mut fields = vec![0.0f64; n];
        for x in 0..states {
            for j in 0..n {
                let mut sum = 0.0;
                for i in 0..n {
                    sum += self.weight(i, j) * spin(x, i, n);
                }
                fields[j] = 2.0 * self.beta * sum;
            }
            for y in 0..states {
                let mut p = 1.0f64;
                for (j, &field) in fields.iter().enumerate() {
                    p *= sigmoid(spin(y, j, n) * field);
                }
                table[x * states + y] = p;
            }
        }
        let space = ProductSpace::system(&vec![2usize; n])?;
        let given = space.axes()[..n].to_vec();
        let target = space.axes()[n..].to_vec();
        Ok(ConditionalKernel::new(given, target, table)?)
    }

    /// Power iteration from a seeded random start.
    pub fn stationary(&self, config: &StationaryConfig) -> Result<StationaryRun> {
        let states = 1usize << self.n;
        let mut rng = stream_rng(config.seed, 0);
        let start = flat_simplex(&mut rng, states);
        self.stationary_from(&start, config)
    }

    /// Power iteration from an explicit start; exposed so distinct starts can
    /// be compared against each other.
    pub fn stationary_from(&self, start: &[f64], config: &StationaryConfig) -> Result<StationaryRun> {
        let states = 1usize << self.n;
        if start.len() != states {
            return Err(IsingError::BadWeights(format!(
                "start of length {} for {states} states",
                start.len()
            )));
        }
        let kernel = self.transition_kernel()?;
        let mut current = start.to_vec();
        let mass: f64 = current.iter().sum();
        for v in &mut current {
            *v /= mass;
        }
        const RATE_WINDOW: usize = 50;
        const STALE_LIMIT: usize = 200;
        let mut next = vec![0.0f64; states];
        let mut residual = f64::INFINITY;
        let mut history = std::collections::VecDeque::with_capacity(RATE_WINDOW + 1);
        let mut best_change = f64::INFINITY;
        let mut stale = 0usize;
        for iteration in 0..config.max_iterations {
            for v in &mut next {
                *v = 0.0;
            }
            for x in 0..states {
                let px = current[x];
                let row = kernel.row(x);
                for (y, &k) in row.iter().enumerate() {
                    next[y] += px * k;
                }
            }
            let mass: f64 = next.iter().sum();
            for v in &mut next {
                *v /= mass;
            }
            residual = current
                .iter()
                .zip(&next)
                .map(|(a, b)| (a - b).abs())
                .sum();
            // The change underestimates the distance to the fixed point by
            // the contraction factor's tail, which matters for slow-mixing
            // chains; project the tail from the contraction rate, smoothed
            // over a window because single-step ratios fluctuate. Once
            // rounding noise stops the change from improving, no further
            // progress is possible and the current iterate is as converged
            // as f64 allows.
            history.push_back(residual);
            let rate = if history.len() > RATE_WINDOW {
                let oldest = history.pop_front().expect("nonempty");
                (residual / oldest)
                    .powf(1.0 / RATE_WINDOW as f64)
                    .min(1.0 - 1e-6)
            } else {
                1.0 - 1e-6
            };
            let tail = residual * rate / (1.0 - rate);
            if residual < best_change {
                best_change = residual;
                stale = 0;
            } else {
                stale += 1;
            }
            let at_float_floor = residual < config.tolerance && stale >= STALE_LIMIT;
            if at_float_floor || (residual < config.tolerance && tail < config.tolerance) {
                return Ok(StationaryRun {
                    probabilities: current,
                    iterations: iteration + 1,
                    residual,
                    converged: true,
                });
            }
            std::mem::swap(&mut current, &mut next);
        }
        Ok(StationaryRun {
            probabilities: current,
            iterations: config.max_iterations,
            residual,
            converged: false,
        })
    }

    /// The stationary marginal paired with the kernel as one joint over past
    /// and present.
    pub fn stationary_joint(&self, config: &StationaryConfig) -> Result<SystemJoint> {
        let run = self.stationary(config)?;
        if !run.converged {
            return Err(IsingError::NotConverged {
                iterations: run.iterations,
                residual: run.residual,
            });
        }
        let n = self.n;
        let states = 1usize << n;
        let kernel = self.transition_kernel()?;
        let space = ProductSpace::system(&vec![2usize; n])?;
        let mut probs = vec![0.0f64; states * states];
        for x in 0..states {
            let px = run.probabilities[x];
            let row = kernel.row(x);
            for (y, &k) in row.iter().enumerate() {
                probs[x * states + y] = px * k;
            }
        }
        let joint = JointDistribution::new_normalized(space, probs)?;
        Ok(SystemJoint::new(joint).expect("system-shaped by construction"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryConfig {
    /// L1 change between successive iterates accepted as converged; equals
    /// the fixed-point residual of the returned iterate.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for StationaryConfig {
    fn default() -> StationaryConfig {
        StationaryConfig {
            tolerance: 1e-12,
            max_iterations: 1_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryRun {
    pub probabilities: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

/// Spin of node `i` in configuration `state`: axis i varies slowest, states
/// 0 and 1 map to -1.0 and +1.0.
#[inline]
fn spin(state: usize, i: usize, n: usize) -> f64 {
    let bit = state >> (n - 1 - i) & 1;
    2.0 * bit as f64 - 1.0
}

#[inline]
fn sigmoid(a: f64) -> f64 {
    if a >= 0.0 {
        1.0 / (1.0 + (-a).exp())
    } else {
        let e = a.exp();
        e / (1.0 + e)
    }
}
