//! Markov generators, metric matrices and measure matrices.

use crate::error::{Error, Result};
use crate::exact::{rat_to_string, Rat};
use crate::space::FiniteSpace;
use num_traits::{Signed, Zero};
use std::fmt;

/// A square rational matrix with nonnegative off-diagonal entries and
/// exactly vanishing row sums: the rate matrix of a continuous-time chain.
#[derive(Clone, PartialEq)]
pub struct Generator {
    space: FiniteSpace,
    entries: Vec<Rat>, // row-major
}

impl Generator {
    /// Validate a raw matrix; reports the first violating entry or row.
    pub fn new(space: FiniteSpace, entries: Vec<Vec<Rat>>) -> Result<Self> {
        let n = space.len();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGenerator(format!("matrix is not {n}x{n}")));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j && v.is_negative() {
                    return Err(Error::InvalidGenerator(format!(
                        "off-diagonal entry ({i},{j}) = {} is negative",
                        rat_to_string(v)
                    )));
                }
            }
            let sum: Rat = row.iter().sum();
            if !sum.is_zero() {
                return Err(Error::InvalidGenerator(format!(
                    "row {i} sums to {}, expected 0",
                    rat_to_string(&sum)
                )));
            }
        }
        Ok(Generator { space, entries: entries.into_iter().flatten().collect() })
    }

    /// Build from off-diagonal rates only; diagonals are set to make rows
    /// vanish.
    pub fn from_rates(space: FiniteSpace, mut rates: Vec<Vec<Rat>>) -> Result<Self> {
        let n = space.len();
        if rates.len() != n || rates.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGenerator(format!("matrix is not {n}x{n}")));
        }
        for (i, row) in rates.iter_mut().enumerate() {
            row[i] = Rat::zero();
            let sum: Rat = row.iter().sum();
            row[i] = -sum;
        }
        Generator::new(space, rates)
    }

    /// The zero generator (allowed: no jumps at all).
    pub fn zero(space: FiniteSpace) -> Self {
        let n = space.len();
        Generator { space, entries: vec![Rat::zero(); n * n] }
    }

    /// Ring of `n` states with symmetric nearest-neighbor rate `w`.
    pub fn ring(space: FiniteSpace, w: Rat) -> Result<Self> {
        let n = space.len();
        let mut rates = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            rates[i][(i + 1) % n] += w.clone();
            rates[i][(i + n - 1) % n] += w.clone();
        }
        Generator::from_rates(space, rates)
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.space.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        let n = self.space.len();
        &self.entries[i * n..(i + 1) * n]
    }

    /// The linear action `L[f](x) = Σ_y L(x,y)(f(y) - f(x))`.
    pub fn apply(&self, f: &crate::field::ScalarField) -> Result<Vec<Rat>> {
        self.space.check_same(f.space(), "generator action")?;
        let n = self.len();
        let mut out = Vec::with_capacity(n);
        for x in 0..n {
            let mut acc = Rat::zero();
            for y in 0..n {
                if x == y {
                    continue;
                }
                let rate = self.entry(x, y);
                if !rate.is_zero() {
                    acc += rate * (f.value(y) - f.value(x));
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// The active neighborhood system `D_x = {x} ∪ {y : L(x,y) > 0}`.
    pub fn active_system(&self) -> crate::neighbors::NeighborhoodSystem {
        let n = self.len();
        let sets = (0..n)
            .map(|x| {
                (0..n)
                    .filter(|&y| y == x || (y != x && self.entry(x, y).is_positive()))
                    .collect()
            })
            .collect();
        crate::neighbors::NeighborhoodSystem::new_unchecked(self.space.clone(), sets)
    }

    /// Off-diagonal part as a measure matrix (point masses `μ_x({y})`).
    pub fn as_measure(&self) -> MeasureMatrix {
        let n = self.len();
        let rows = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| if x == y { Rat::zero() } else { self.entry(x, y).clone() })
                    .collect()
            })
            .collect();
        MeasureMatrix::new(self.space.clone(), rows).expect("off-diagonals are nonnegative")
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Generator {}x{}:", self.len(), self.len())?;
        for i in 0..self.len() {
            let row: Vec<String> = self.row(i).iter().map(rat_to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A nonnegative matrix representing per-vertex point-mass measures.
#[derive(Clone, PartialEq, Debug)]
pub struct MeasureMatrix {
    space: FiniteSpace,
    entries: Vec<Rat>,
}

impl MeasureMatrix {
    pub fn new(space: FiniteSpace, rows: Vec<Vec<Rat>>) -> Result<Self> {
        let n = space.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Other(format!("measure matrix is not {n}x{n}")));
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.is_negative() {
                    return Err(Error::Other(format!("measure entry ({i},{j}) is negative")));
                }
            }
        }
        Ok(MeasureMatrix { space, entries: rows.into_iter().flatten().collect() })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.space.len() + j]
    }
}

/// A separation matrix: `m(x,y) = 0` iff `x = y`. Symmetry is not required.
#[derive(Clone, PartialEq, Debug)]
pub struct MetricMatrix {
    space: FiniteSpace,
    entries: Vec<Rat>,
}

impl MetricMatrix {
    pub fn new(space: FiniteSpace, rows: Vec<Vec<Rat>>) -> Result<Self> {
        let n = space.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMetric(format!("matrix is not {n}x{n}")));
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.is_negative() {
                    return Err(Error::InvalidMetric(format!("entry ({i},{j}) is negative")));
                }
                if (i == j) != v.is_zero() {
                    return Err(Error::InvalidMetric(format!(
                        "separation fails at ({i},{j}): m = {}",
                        rat_to_string(v)
                    )));
                }
            }
        }
        Ok(MetricMatrix { space, entries: rows.into_iter().flatten().collect() })
    }

    /// The discrete unit metric: 1 off the diagonal.
    pub fn unit(space: FiniteSpace) -> Self {
        let n = space.len();
        let one = crate::exact::rint(1);
        let rows: Vec<Vec<Rat>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rat::zero() } else { one.clone() }).collect())
            .collect();
        MetricMatrix::new(space, rows).expect("unit metric is valid")
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.space.len() + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint};

    fn sp(n: usize) -> FiniteSpace {
        FiniteSpace::indexed(n)
    }

    #[test]
    fn validates_sign_and_row_sums() {
        // symmetric 2-state chain
        let ok = Generator::new(
            sp(2),
            vec![vec![rint(-1), rint(1)], vec![rint(1), rint(-1)]],
        );
        assert!(ok.is_ok());
        // zero generator is allowed
        assert!(Generator::new(sp(2), vec![vec![rint(0), rint(0)]; 2]).is_ok());
        // row sum 1 is invalid
        let bad = Generator::new(sp(2), vec![vec![rint(-1), rint(2)], vec![rint(1), rint(-1)]]);
        match bad {
            Err(Error::InvalidGenerator(msg)) => assert!(msg.contains("row 0")),
            other => panic!("expected row-sum error, got {other:?}"),
        }
        // negative off-diagonal
        let bad = Generator::new(sp(2), vec![vec![rint(1), rint(-1)], vec![rint(1), rint(-1)]]);
        match bad {
            Err(Error::InvalidGenerator(msg)) => assert!(msg.contains("(0,1)")),
            other => panic!("expected sign error, got {other:?}"),
        }
    }

    #[test]
    fn active_system_includes_self() {
        let g = Generator::ring(sp(4), rat(1, 2)).unwrap();
        let d = g.active_system();
        assert_eq!(d.set(0), &[0, 1, 3]);
        let z = Generator::zero(sp(3));
        assert_eq!(z.active_system().set(1), &[1]);
    }

    #[test]
    fn metric_needs_separation() {
        let m = MetricMatrix::new(sp(2), vec![vec![rint(0), rint(0)], vec![rint(1), rint(0)]]);
        assert!(m.is_err());
        let m = MetricMatrix::new(sp(2), vec![vec![rint(0), rint(2)], vec![rint(1), rint(0)]]);
        assert!(m.is_ok(), "asymmetry is allowed");
    }
}
