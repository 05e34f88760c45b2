//! The penalized objective whose minimizers approach the constraint set
//! where each present node's conditional given the full past depends only on
//! its own past.
//!
//! Candidates live in logit space and are mapped to the simplex interior by
//! exponential normalization, so every iterate is a strictly positive
//! distribution and the constraint terms stay differentiable.

use info_measures::SystemJoint;

/// Precomputed index arithmetic tying each joint state to its full-past
/// index and its per-node past and present coordinates.
pub(crate) struct StateMaps {
    n: usize,
    x_size: usize,
    x_of: Vec<usize>,
    xi_of: Vec<Vec<usize>>,
    yi_of: Vec<Vec<usize>>,
    xi_card: Vec<usize>,
    yi_card: Vec<usize>,
    /// Per node, the node's past coordinate as a function of the full-past
    /// index.
    xi_of_x: Vec<Vec<usize>>,
}

impl StateMaps {
    pub(crate) fn build(system: &SystemJoint) -> StateMaps {
        let layout = system.layout();
        let space = system.dist().space();
        let n = layout.n;
        let len = space.len();
        let xi_card: Vec<usize> = layout.past.iter().map(|&a| space.axis(a).card).collect();
        let yi_card: Vec<usize> = layout.present.iter().map(|&a| space.axis(a).card).collect();
        let y_size: usize = yi_card.iter().product();
        let x_size: usize = xi_card.iter().product();
        let x_of: Vec<usize> = (0..len).map(|z| z / y_size).collect();
        let xi_of: Vec<Vec<usize>> = layout
            .past
            .iter()
            .map(|&a| (0..len).map(|z| space.coord(z, a)).collect())
            .collect();
        let yi_of: Vec<Vec<usize>> = layout
            .present
            .iter()
            .map(|&a| (0..len).map(|z| space.coord(z, a)).collect())
            .collect();
        let mut xi_of_x: Vec<Vec<usize>> = Vec::with_capacity(n);
        let mut stride = x_size;
        for &card in &xi_card {
            stride /= card;
            let s = stride;
            xi_of_x.push((0..x_size).map(|x| x / s % card).collect());
        }
        StateMaps {
            n,
            x_size,
            x_of,
            xi_of,
            yi_of,
            xi_card,
            yi_card,
            xi_of_x,
        }
    }

}

/// Per-evaluation sums over the candidate: full-past masses, per-node
/// (past, present) masses, and their per-node coarsenings.
struct Groups {
    b: Vec<f64>,
    a: Vec<Vec<f64>>,
    d: Vec<Vec<f64>>,
    c: Vec<Vec<f64>>,
}

impl Groups {
    fn compute(maps: &StateMaps, q: &[f64]) -> Groups {
        let mut b = vec![0.0f64; maps.x_size];
        let mut a: Vec<Vec<f64>> = (0..maps.n)
            .map(|i| vec![0.0f64; maps.x_size * maps.yi_card[i]])
            .collect();
        let mut d: Vec<Vec<f64>> = (0..maps.n).map(|i| vec![0.0f64; maps.xi_card[i]]).collect();
        let mut c: Vec<Vec<f64>> = (0..maps.n)
            .map(|i| vec![0.0f64; maps.xi_card[i] * maps.yi_card[i]])
            .collect();
        for (z, &v) in q.iter().enumerate() {
            let x = maps.x_of[z];
            b[x] += v;
            for i in 0..maps.n {
                let yi = maps.yi_of[i][z];
                let xi = maps.xi_of[i][z];
                a[i][x * maps.yi_card[i] + yi] += v;
                d[i][xi] += v;
                c[i][xi * maps.yi_card[i] + yi] += v;
            }
        }
        Groups { b, a, d, c }
    }
}

/// Largest deviation, over nodes, present values, and full-past states,
/// between the node's conditional given the full past and its conditional
/// given only the node's own past. Zero exactly on the constraint set.
pub fn cis_residual(system: &SystemJoint) -> f64 {
    let maps = StateMaps::build(system);
    let groups = Groups::compute(&maps, system.dist().probs());
    let mut worst = 0.0f64;
    for i in 0..maps.n {
        for x in 0..maps.x_size {
            let xi = maps.xi_of_x[i][x];
            for yi in 0..maps.yi_card[i] {
                let lhs = groups.a[i][x * maps.yi_card[i] + yi] / groups.b[x];
                let rhs = groups.c[i][xi * maps.yi_card[i] + yi] / groups.d[i][xi];
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    worst
}

/// Divergence to the target plus `lambda` times the sum of squared
/// constraint deviations, as a function of free logits.
pub struct PenalizedObjective {
    maps: StateMaps,
    target: Vec<f64>,
    log_target: Vec<f64>,
    lambda: f64,
}

impl PenalizedObjective {
    pub fn new(system: &SystemJoint, lambda: f64) -> PenalizedObjective {
        let maps = StateMaps::build(system);
        let target = system.dist().probs().to_vec();
        let log_target = target.iter().map(|&p| p.ln()).collect();
        PenalizedObjective {
            maps,
            target,
            log_target,
            lambda,
        }
    }

    pub fn dimension(&self) -> usize {
        self.target.len()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn set_lambda(&mut self, lambda: f64) {
        self.lambda = lambda;
    }

    /// Exponential normalization of the logits; strictly positive up to f64
    /// underflow at extreme spreads.
    pub fn probabilities(&self, theta: &[f64]) -> Vec<f64> {
        let (q, _) = self.softmax(theta);
        q
    }

    fn softmax(&self, theta: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let max = theta.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut q: Vec<f64> = theta.iter().map(|&t| (t - max).exp()).collect();
        let sum: f64 = q.iter().sum();
        let log_sum = sum.ln();
        let log_q: Vec<f64> = theta.iter().map(|&t| t - max - log_sum).collect();
        for v in &mut q {
            *v /= sum;
        }
        (q, log_q)
    }

    fn divergence_from_logs(&self, log_q: &[f64]) -> f64 {
        self.target
            .iter()
            .zip(&self.log_target)
            .zip(log_q)
            .map(|((&p, &lp), &lq)| p * (lp - lq))
            .sum()
    }

    /// Divergence of the target to an explicit candidate.
    pub fn divergence(&self, q: &[f64]) -> f64 {
        self.target
            .iter()
            .zip(&self.log_target)
            .zip(q)
            .map(|((&p, &lp), &qv)| p * (lp - qv.ln()))
            .sum()
    }

    pub fn max_residual_of(&self, q: &[f64]) -> f64 {
        let groups = Groups::compute(&self.maps, q);
        let mut worst = 0.0f64;
        self.for_each_residual(&groups, |_, _, _, r| worst = worst.max(r.abs()));
        worst
    }

    fn for_each_residual<F: FnMut(usize, usize, usize, f64)>(&self, groups: &Groups, mut f: F) {
        let maps = &self.maps;
        for i in 0..maps.n {
            for x in 0..maps.x_size {
                let xi = maps.xi_of_x[i][x];
                for yi in 0..maps.yi_card[i] {
                    let lhs = groups.a[i][x * maps.yi_card[i] + yi] / groups.b[x];
                    let rhs = groups.c[i][xi * maps.yi_card[i] + yi] / groups.d[i][xi];
                    f(i, x, yi, lhs - rhs);
                }
            }
        }
    }

    pub fn value(&self, theta: &[f64]) -> f64 {
        let (q, log_q) = self.softmax(theta);
        let groups = Groups::compute(&self.maps, &q);
        let mut penalty = 0.0f64;
        self.for_each_residual(&groups, |_, _, _, r| penalty += r * r);
        self.divergence_from_logs(&log_q) + self.lambda * penalty
    }

    /// Value plus the analytic gradient with respect to the logits.
    pub fn value_and_gradient(&self, theta: &[f64]) -> (f64, Vec<f64>) {
        let maps = &self.maps;
        let (q, log_q) = self.softmax(theta);
        let groups = Groups::compute(maps, &q);

        // Derivative of the penalty with respect to each probability, built
        // from per-group coefficients: for a deviation r at (i, x, yi), a
        // state z with matching x contributes (1[yi matches] - a/b)/b, and a
        // state with matching xi contributes -(1[yi matches] - c/d)/d.
        let mut s1: Vec<Vec<f64>> = (0..maps.n)
            .map(|i| vec![0.0f64; maps.x_size * maps.yi_card[i]])
            .collect();
        let mut t1 = vec![0.0f64; maps.x_size];
        let mut s2: Vec<Vec<f64>> = (0..maps.n)
            .map(|i| vec![0.0f64; maps.xi_card[i] * maps.yi_card[i]])
            .collect();
        let mut t2: Vec<Vec<f64>> = (0..maps.n).map(|i| vec![0.0f64; maps.xi_card[i]]).collect();
        let mut penalty = 0.0f64;
        self.for_each_residual(&groups, |i, x, yi, r| {
            penalty += r * r;
            let xi = maps.xi_of_x[i][x];
            let b = groups.b[x];
            let d = groups.d[i][xi];
            let a = groups.a[i][x * maps.yi_card[i] + yi];
            let c = groups.c[i][xi * maps.yi_card[i] + yi];
            let two_r = 2.0 * r;
            s1[i][x * maps.yi_card[i] + yi] += two_r / b;
            t1[x] += two_r * a / (b * b);
            s2[i][xi * maps.yi_card[i] + yi] += two_r / d;
            t2[i][xi] += two_r * c / (d * d);
        });

        let mut g = vec![0.0f64; q.len()];
        for (z, gz) in g.iter_mut().enumerate() {
            let x = maps.x_of[z];
            let mut acc = -t1[x];
            for i in 0..maps.n {
                let yi = maps.yi_of[i][z];
                let xi = maps.xi_of[i][z];
                acc += s1[i][x * maps.yi_card[i] + yi];
                acc -= s2[i][xi * maps.yi_card[i] + yi] - t2[i][xi];
            }
            *gz = acc;
        }

        let inner: f64 = g.iter().zip(&q).map(|(&gz, &qz)| gz * qz).sum();
        let grad: Vec<f64> = (0..q.len())
            .map(|u| (q[u] - self.target[u]) + self.lambda * q[u] * (g[u] - inner))
            .collect();
        let value = self.divergence_from_logs(&log_q) + self.lambda * penalty;
        (value, grad)
    }
}
