use crate::dist::JointDistribution;
use crate::error::{DistError, Result};

/// Contribution of one state to an entropy sum, with the 0 log 0 := 0
/// convention. Zeros cannot arise from the strict constructors but can
/// survive internal arithmetic on floored data.
#[inline]
fn nlogn(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// Kullback-Leibler divergence in nats: sum of p log(p / q).
///
/// Both distributions must live on the same space. Where `p` carries mass and
/// `q` does not, the result is positive infinity. Rounding can push the sum of
/// a near-identical pair a hair below zero; such values are snapped to 0.
pub fn kl_divergence(p: &JointDistribution, q: &JointDistribution) -> Result<f64> {
    if p.space() != q.space() {
        return Err(DistError::SpaceMismatch);
    }
    let mut sum = 0.0f64;
    for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Ok(f64::INFINITY);
            }
            sum += pi * (pi / qi).ln();
        }
    }
    if sum < 0.0 && sum > -1e-9 {
        sum = 0.0;
    }
    Ok(sum)
}

impl JointDistribution {
    /// Shannon entropy of the full joint, in nats.
    pub fn entropy(&self) -> f64 {
        -self.probs().iter().copied().map(nlogn).sum::<f64>()
    }

    /// Entropy of the marginal over the given axes.
    pub fn subset_entropy(&self, axes: &[usize]) -> Result<f64> {
        Ok(self.marginalize(axes)?.entropy())
    }

    /// Conditional entropy H(target | given) = H(target, given) - H(given).
    /// An empty given set yields the plain marginal entropy of `target`.
    pub fn conditional_entropy(&self, target: &[usize], given: &[usize]) -> Result<f64> {
        self.space().check_subset(target)?;
        for &g in given {
            if target.contains(&g) {
                return Err(DistError::AxisOverlap(g));
            }
        }
        if given.is_empty() {
            return self.subset_entropy(target);
        }
        self.space().check_subset(given)?;
        let mut both = target.to_vec();
        both.extend_from_slice(given);
        Ok(self.subset_entropy(&both)? - self.subset_entropy(given)?)
    }

    /// Mutual information I(A; B) = sum of p(a,b) log [p(a,b) / (p(a) p(b))],
    /// evaluated on the marginal over A and B.
    pub fn mutual_information(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        self.space().check_subset(a)?;
        self.space().check_subset(b)?;
        for &x in b {
            if a.contains(&x) {
                return Err(DistError::AxisOverlap(x));
            }
        }
        let mut both = a.to_vec();
        both.extend_from_slice(b);
        let joint = self.marginalize(&both)?;
        let a_local: Vec<usize> = (0..a.len()).collect();
        let b_local: Vec<usize> = (a.len()..both.len()).collect();
        let ma = joint.marginalize(&a_local)?;
        let mb = joint.marginalize(&b_local)?;
        let jspace = joint.space();
        let b_size = mb.len();
        let mut sum = 0.0f64;
        for state in 0..jspace.len() {
            let p = joint.prob(state);
            if p > 0.0 {
                let ai = state / b_size;
                let bi = state % b_size;
                sum += p * (p / (ma.prob(ai) * mb.prob(bi))).ln();
            }
        }
        if sum < 0.0 && sum > -1e-9 {
            sum = 0.0;
        }
        Ok(sum)
    }

    /// Conditional mutual information I(A; B | C). An empty conditioning set
    /// reduces to plain mutual information.
    pub fn conditional_mutual_information(
        &self,
        a: &[usize],
        b: &[usize],
        c: &[usize],
    ) -> Result<f64> {
        if c.is_empty() {
            return self.mutual_information(a, b);
        }
        self.space().check_subset(a)?;
        self.space().check_subset(b)?;
        self.space().check_subset(c)?;
        for &x in b {
            if a.contains(&x) {
                return Err(DistError::AxisOverlap(x));
            }
        }
        for &x in c {
            if a.contains(&x) || b.contains(&x) {
                return Err(DistError::AxisOverlap(x));
            }
        }
        // I(A;B|C) = sum p(a,b,c) log [p(a,b,c) p(c) / (p(a,c) p(b,c))]
        // on the A,B,C marginal, with axes ordered a, b, c.
        let mut abc = a.to_vec();
        abc.extend_from_slice(b);
        abc.extend_from_slice(c);
        let joint = self.marginalize(&abc)?;
        let a_n = a.len();
        let b_n = b.len();
        let ac: Vec<usize> = (0..a_n).chain(a_n + b_n..abc.len()).collect();
        let bc: Vec<usize> = (a_n..abc.len()).collect();
        let cc: Vec<usize> = (a_n + b_n..abc.len()).collect();
        let mac = joint.marginalize(&ac)?;
        let mbc = joint.marginalize(&bc)?;
        let mc = joint.marginalize(&cc)?;
        let jspace = joint.space();
        let c_size = mc.len();
        let b_size: usize = (a_n..a_n + b_n).map(|k| jspace.axis(k).card).product();
        let mut sum = 0.0f64;
        for state in 0..jspace.len() {
            let p = joint.prob(state);
            if p > 0.0 {
                let ci = state % c_size;
                let bi = state / c_size % b_size;
                let ai = state / (c_size * b_size);
                let pac = mac.prob(ai * c_size + ci);
                let pbc = mbc.prob(bi * c_size + ci);
                sum += p * (p * mc.prob(ci) / (pac * pbc)).ln();
            }
        }
        if sum < 0.0 && sum > -1e-9 {
            sum = 0.0;
        }
        Ok(sum)
    }
}
