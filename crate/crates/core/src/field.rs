//! Scalar and extended fields over a finite space.

use crate::error::Result;
use crate::exact::{Rat, Xval};
use crate::space::FiniteSpace;
use num_traits::Zero;
use std::fmt;

/// An exact rational function on a finite space, one value per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct ScalarField {
    space: FiniteSpace,
    values: Vec<Rat>,
}

impl std::hash::Hash for ScalarField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.values.hash(state);
    }
}

impl ScalarField {
    pub fn new(space: FiniteSpace, values: Vec<Rat>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(crate::Error::Other(format!(
                "field has {} values for {} vertices",
                values.len(),
                space.len()
            )));
        }
        Ok(ScalarField { space, values })
    }

    pub fn constant(space: FiniteSpace, value: Rat) -> Self {
        let n = space.len();
        ScalarField { space, values: vec![value; n] }
    }

    pub fn from_ints(space: FiniteSpace, values: &[i64]) -> Result<Self> {
        let vals = values.iter().map(|&v| crate::exact::rint(v)).collect();
        Self::new(space, vals)
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, i: usize) -> &Rat {
        &self.values[i]
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// `f + c`, exact.
    pub fn shift(&self, c: &Rat) -> ScalarField {
        ScalarField {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    /// `r · f`, exact.
    pub fn scale(&self, r: &Rat) -> ScalarField {
        ScalarField {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v * r).collect(),
        }
    }

    /// Pointwise map, exact.
    pub fn map(&self, f: impl Fn(&Rat) -> Rat) -> ScalarField {
        ScalarField { space: self.space.clone(), values: self.values.iter().map(f).collect() }
    }

    /// Exact minimum (attained; the space is finite and nonempty).
    pub fn min(&self) -> &Rat {
        self.values.iter().min().expect("nonempty space")
    }

    pub fn max(&self) -> &Rat {
        self.values.iter().max().expect("nonempty space")
    }

    /// Indices attaining the minimum.
    pub fn argmin(&self) -> Vec<usize> {
        let m = self.min().clone();
        (0..self.len()).filter(|&i| self.values[i] == m).collect()
    }

    /// `(f(x) - f(y))_+`, the positive part of the drop from `x` to `y`.
    pub fn drop_pos(&self, x: usize, y: usize) -> Rat {
        let d = &self.values[x] - &self.values[y];
        if d.is_negative() {
            Rat::zero()
        } else {
            d
        }
    }

    /// Sorted distinct values.
    pub fn distinct_values(&self) -> Vec<Rat> {
        let mut v = self.values.to_vec();
        v.sort();
        v.dedup();
        v
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.values.iter().map(crate::exact::rat_to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

use num_traits::Signed;

/// An extended nonnegative field: the image `T[f]`.
#[derive(Clone, PartialEq, Debug)]
pub struct ExtendedField {
    space: FiniteSpace,
    values: Vec<Xval>,
}

impl ExtendedField {
    pub fn new(space: FiniteSpace, values: Vec<Xval>) -> Self {
        assert_eq!(space.len(), values.len(), "one value per vertex");
        debug_assert!(
            values.iter().all(|v| match v {
                Xval::Finite(e) => !matches!(e.try_sign(), Ok(-1)),
                _ => true,
            }),
            "extended fields are nonnegative"
        );
        ExtendedField { space, values }
    }

    pub fn zeros(space: FiniteSpace) -> Self {
        let n = space.len();
        ExtendedField { space, values: vec![Xval::zero(); n] }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn value(&self, i: usize) -> &Xval {
        &self.values[i]
    }

    pub fn values(&self) -> &[Xval] {
        &self.values
    }

    /// Vertices where the value is exactly zero.
    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i].is_zero()).collect()
    }

    /// Whether any entry is `+inf` (such fields fall outside `dom(T)`).
    pub fn has_infinite(&self) -> bool {
        self.values.iter().any(|v| !v.is_finite())
    }

    /// Pointwise exact equality test.
    pub fn eq_pointwise(&self, other: &ExtendedField) -> Result<bool> {
        self.space.check_same(&other.space, "extended field comparison")?;
        for (a, b) in self.values.iter().zip(&other.values) {
            if a.try_cmp(b)? != std::cmp::Ordering::Equal {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
