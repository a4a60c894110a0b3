//! Active neighborhood systems: per-vertex sets `D_x` with `x ∈ D_x`.

use crate::error::{Error, Result};
use crate::space::FiniteSpace;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct NeighborhoodSystem {
    space: FiniteSpace,
    /// Sorted, deduplicated member indices per vertex.
    sets: Vec<Vec<usize>>,
}

impl NeighborhoodSystem {
    pub fn new(space: FiniteSpace, mut sets: Vec<Vec<usize>>) -> Result<Self> {
        let n = space.len();
        if sets.len() != n {
            return Err(Error::InvalidNeighborhoods(format!(
                "{} sets for {n} vertices",
                sets.len()
            )));
        }
        for (x, set) in sets.iter_mut().enumerate() {
            set.sort_unstable();
            set.dedup();
            if set.iter().any(|&y| y >= n) {
                return Err(Error::InvalidNeighborhoods(format!(
                    "set of vertex {x} references an out-of-range vertex"
                )));
            }
            if !set.contains(&x) {
                return Err(Error::InvalidNeighborhoods(format!(
                    "vertex {x} is missing from its own set"
                )));
            }
        }
        Ok(NeighborhoodSystem { space, sets })
    }

    pub(crate) fn new_unchecked(space: FiniteSpace, sets: Vec<Vec<usize>>) -> Self {
        debug_assert!(sets.iter().enumerate().all(|(x, s)| s.contains(&x)));
        NeighborhoodSystem { space, sets }
    }

    /// The trivial system `D_x = {x}`.
    pub fn identity(space: FiniteSpace) -> Self {
        let sets = (0..space.len()).map(|x| vec![x]).collect();
        NeighborhoodSystem { space, sets }
    }

    /// The full system `D_x = V`.
    pub fn full(space: FiniteSpace) -> Self {
        let n = space.len();
        let sets = (0..n).map(|_| (0..n).collect()).collect();
        NeighborhoodSystem { space, sets }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn set(&self, x: usize) -> &[usize] {
        &self.sets[x]
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }
}

impl fmt::Debug for NeighborhoodSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NeighborhoodSystem{:?}", self.sets)
    }
}
