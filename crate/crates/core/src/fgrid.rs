//! Exhaustive function grids: the finite test universe for brute-force
//! oracles.

use crate::error::{Error, Result};
use crate::exact::{rint, Rat};
use crate::field::ScalarField;
use crate::space::FiniteSpace;

/// Default cap on the number of enumerated fields.
pub const DEFAULT_ENUM_CAP: u128 = 10_000_000;

/// A finite value set attached to a space; enumerates all functions
/// `V -> valueSet` in a fixed deterministic order (vertex 0 varies fastest).
#[derive(Clone, Debug)]
pub struct FunctionGrid {
    space: FiniteSpace,
    values: Vec<Rat>,
    cap: u128,
}

impl FunctionGrid {
    pub fn new(space: FiniteSpace, mut values: Vec<Rat>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Other("empty value set".into()));
        }
        values.sort();
        values.dedup();
        Ok(FunctionGrid { space, values, cap: DEFAULT_ENUM_CAP })
    }

    /// The default grid: consecutive integers `0..levels`.
    pub fn integer(space: FiniteSpace, levels: u32) -> Result<Self> {
        if levels == 0 {
            return Err(Error::Other("grid needs at least one level".into()));
        }
        Self::new(space, (0..levels as i64).map(rint).collect())
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn value_set(&self) -> &[Rat] {
        &self.values
    }

    /// Width of the value range (`max - min`).
    pub fn width(&self) -> Rat {
        self.values.last().unwrap() - self.values.first().unwrap()
    }

    /// `|valueSet|^|V|` as an exact count.
    pub fn cardinality(&self) -> u128 {
        let g = self.values.len() as u128;
        let mut acc: u128 = 1;
        for _ in 0..self.space.len() {
            acc = acc.saturating_mul(g);
        }
        acc
    }

    fn check_budget(&self) -> Result<u64> {
        let n = self.cardinality();
        if n > self.cap {
            return Err(Error::BudgetExceeded { needed: n, cap: self.cap });
        }
        Ok(n as u64)
    }

    /// Number of fields, after the budget check.
    pub fn len_checked(&self) -> Result<u64> {
        self.check_budget()
    }

    /// The field with the given enumeration index.
    pub fn field(&self, mut index: u64) -> ScalarField {
        let g = self.values.len() as u64;
        let vals = (0..self.space.len())
            .map(|_| {
                let v = self.values[(index % g) as usize].clone();
                index /= g;
                v
            })
            .collect();
        ScalarField::new(self.space.clone(), vals).expect("grid field has one value per vertex")
    }

    /// Enumeration index of a field whose values all lie in the value set.
    pub fn index_of(&self, f: &ScalarField) -> Option<u64> {
        let g = self.values.len() as u64;
        let mut idx = 0u64;
        let mut mult = 1u64;
        for v in f.values() {
            let pos = self.values.iter().position(|w| w == v)?;
            idx += mult * pos as u64;
            mult = mult.checked_mul(g)?;
        }
        Some(idx)
    }

    /// Stream every field exactly once, deterministic order.
    pub fn enumerate(&self) -> Result<impl Iterator<Item = ScalarField> + '_> {
        let n = self.check_budget()?;
        Ok((0..n).map(move |i| self.field(i)))
    }
}
