use crate::error::{DistError, Result};

/// Role of an axis inside a product space.
///
/// `Past` axes describe the state of the system at time t, `Present` axes the
/// state at time t + 1, and `Latent` marks an unobserved variable appended to
/// the visible space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Past,
    Present,
    Latent,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Past => "past",
            Role::Present => "present",
            Role::Latent => "latent",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "past" => Some(Role::Past),
            "present" => Some(Role::Present),
            "latent" => Some(Role::Latent),
            _ => None,
        }
    }
}

/// One labeled, finite axis of a product space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    pub label: String,
    pub role: Role,
    pub card: usize,
}

impl Axis {
    pub fn new(label: impl Into<String>, role: Role, card: usize) -> Axis {
        Axis {
            label: label.into(),
            role,
            card,
        }
    }
}

/// An ordered list of axes with the row-major indexing contract.
///
/// The linear index of a state enumerates the axes left to right with the
/// leftmost axis varying slowest. Every distribution, kernel and factor in
/// this workspace addresses states through this contract, so marginal and
/// projection results are directly comparable entry by entry.
///
/// Past and present axes need cardinality at least 2; a latent axis may have
/// cardinality 1. Labels must be unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpace {
    axes: Vec<Axis>,
    strides: Vec<usize>,
    len: usize,
}

impl ProductSpace {
    pub fn new(axes: Vec<Axis>) -> Result<ProductSpace> {
        if axes.is_empty() {
            return Err(DistError::EmptyAxisSet);
        }
        for (i, a) in axes.iter().enumerate() {
            let min = match a.role {
                Role::Latent => 1,
                _ => 2,
            };
            if a.card < min {
                return Err(DistError::InvalidCardinality {
                    label: a.label.clone(),
                    card: a.card,
                });
            }
            if axes[..i].iter().any(|b| b.label == a.label) {
                return Err(DistError::DuplicateLabel(a.label.clone()));
            }
        }
        let mut len: usize = 1;
        for a in &axes {
            len = len.checked_mul(a.card).ok_or(DistError::SpaceTooLarge)?;
        }
        let mut strides = vec![1usize; axes.len()];
        for i in (0..axes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * axes[i + 1].card;
        }
        Ok(ProductSpace { axes, strides, len })
    }

    /// Canonical system space X1..Xn (past), Y1..Yn (present) with the given
    /// per-node cardinality shared by each pair.
    pub fn system(cards: &[usize]) -> Result<ProductSpace> {
        let mut axes = Vec::with_capacity(cards.len() * 2);
        for (i, &c) in cards.iter().enumerate() {
            axes.push(Axis::new(format!("X{}", i + 1), Role::Past, c));
        }
        for (i, &c) in cards.iter().enumerate() {
            axes.push(Axis::new(format!("Y{}", i + 1), Role::Present, c));
        }
        ProductSpace::new(axes)
    }

    /// Canonical extended space: the system axes plus a latent axis `W` of
    /// cardinality `w` appended last.
    pub fn extended(cards: &[usize], w: usize) -> Result<ProductSpace> {
        let mut axes = ProductSpace::system(cards)?.axes;
        axes.push(Axis::new("W", Role::Latent, w));
        ProductSpace::new(axes)
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn n_axes(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, i: usize) -> &Axis {
        &self.axes[i]
    }

    pub fn axis_index(&self, label: &str) -> Option<usize> {
        self.axes.iter().position(|a| a.label == label)
    }

    /// Number of joint states.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    /// Coordinate of `state` along `axis`.
    #[inline]
    pub fn coord(&self, state: usize, axis: usize) -> usize {
        state / self.strides[axis] % self.axes[axis].card
    }

    /// Linear index of the given full coordinate vector.
    pub fn index_of(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.axes.len());
        coords
            .iter()
            .zip(&self.strides)
            .map(|(c, s)| c * s)
            .sum()
    }

    /// Full coordinate vector of a linear index.
    pub fn coords_of(&self, state: usize) -> Vec<usize> {
        (0..self.axes.len()).map(|a| self.coord(state, a)).collect()
    }

    /// Validates an axis subset: in range, nonempty, no duplicates.
    pub fn check_subset(&self, subset: &[usize]) -> Result<()> {
        if subset.is_empty() {
            return Err(DistError::EmptyAxisSet);
        }
        for (i, &a) in subset.iter().enumerate() {
            if a >= self.axes.len() {
                return Err(DistError::AxisOutOfRange(a));
            }
            if subset[..i].contains(&a) {
                return Err(DistError::DuplicateAxis(a));
            }
        }
        Ok(())
    }

    /// New space consisting of the selected axes in the order given.
    pub fn subspace(&self, subset: &[usize]) -> Result<ProductSpace> {
        self.check_subset(subset)?;
        ProductSpace::new(subset.iter().map(|&a| self.axes[a].clone()).collect())
    }

    /// Checks the canonical system ordering X1..Xn, Y1..Yn[, W] and returns
    /// the axis-index layout.
    pub fn system_layout(&self) -> Result<SystemLayout> {
        let k = self.axes.len();
        let latent = match self.axes.iter().filter(|a| a.role == Role::Latent).count() {
            0 => None,
            1 if self.axes[k - 1].role == Role::Latent => Some(k - 1),
            _ => {
                return Err(DistError::NotSystemLayout(
                    "a single latent axis must sit last".into(),
                ))
            }
        };
        let visible = k - latent.map_or(0, |_| 1);
        if visible == 0 || visible % 2 != 0 {
            return Err(DistError::NotSystemLayout(
                "past and present axes must pair up".into(),
            ));
        }
        let n = visible / 2;
        for i in 0..n {
            if self.axes[i].role != Role::Past {
                return Err(DistError::NotSystemLayout(format!(
                    "axis {} must be a past axis",
                    i
                )));
            }
            if self.axes[n + i].role != Role::Present {
                return Err(DistError::NotSystemLayout(format!(
                    "axis {} must be a present axis",
                    n + i
                )));
            }
            if self.axes[i].card != self.axes[n + i].card {
                return Err(DistError::NotSystemLayout(format!(
                    "axes {} and {} must share a cardinality",
                    i,
                    n + i
                )));
            }
        }
        Ok(SystemLayout {
            n,
            past: (0..n).collect(),
            present: (n..2 * n).collect(),
            latent,
        })
    }
}

/// Axis-index layout of a canonical system or extended space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemLayout {
    /// Node count.
    pub n: usize,
    /// Indices of X1..Xn.
    pub past: Vec<usize>,
    /// Indices of Y1..Yn.
    pub present: Vec<usize>,
    /// Index of W when present.
    pub latent: Option<usize>,
}

impl SystemLayout {
    /// Past axes together with the latent axis when present.
    pub fn past_and_latent(&self) -> Vec<usize> {
        let mut v = self.past.clone();
        if let Some(w) = self.latent {
            v.push(w);
        }
        v
    }

    /// All visible axes: X1..Xn, Y1..Yn.
    pub fn visible(&self) -> Vec<usize> {
        let mut v = self.past.clone();
        v.extend_from_slice(&self.present);
        v
    }
}
