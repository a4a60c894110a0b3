//! Descent-operator families and combinators behind one composable
//! evaluator.

mod expr;
mod json;
mod phi;

pub use expr::{Exponent, ExponentSpec, Expr};
pub use json::{parse_operator, Registry};
pub use phi::ScalingMap;

use crate::error::Result;
use crate::field::{ExtendedField, ScalarField};
use crate::generator::{Generator, MeasureMatrix, MetricMatrix};
use crate::neighbors::NeighborhoodSystem;
use crate::space::FiniteSpace;

/// Anything that maps scalar fields to extended nonnegative fields.
///
/// Implemented by [`OperatorHandle`] for everything expressible as an
/// expression tree; tests implement it directly for deliberately broken
/// operators.
pub trait DescentOperator: Sync {
    fn space(&self) -> &FiniteSpace;
    fn eval(&self, f: &ScalarField) -> Result<ExtendedField>;
}

/// An immutable, composable operator evaluator.
#[derive(Clone, Debug)]
pub struct OperatorHandle {
    expr: Expr,
}

impl OperatorHandle {
    pub fn new(expr: Expr) -> Result<Self> {
        expr.validate()?;
        Ok(OperatorHandle { expr })
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    // -- primitive families ------------------------------------------------

    /// `T_L`: rate-weighted sum of positive drops.
    pub fn rate_descent(gen: Generator) -> Self {
        OperatorHandle { expr: Expr::RateDescent { gen } }
    }

    /// `T_{L,m}`: the power-mean variant (`m = ∞` gives the max drop over
    /// the active system).
    pub fn power_descent(gen: Generator, m: ExponentSpec) -> Result<Self> {
        Self::new(Expr::PowerDescent { gen, m })
    }

    pub fn power_descent_uniform(gen: Generator, m: Exponent) -> Self {
        OperatorHandle { expr: Expr::PowerDescent { gen, m: ExponentSpec::Uniform(m) } }
    }

    /// `T_D`: steepest drop over an active neighborhood system.
    pub fn max_drop(sys: NeighborhoodSystem) -> Self {
        OperatorHandle { expr: Expr::MaxDrop { sys } }
    }

    /// Semiglobal slope: steepest metric drop over an active system.
    pub fn semiglobal_slope(sys: NeighborhoodSystem, metric: MetricMatrix) -> Result<Self> {
        Self::new(Expr::SemiglobalSlope { sys, metric })
    }

    /// Nonlocal operator induced by a measure matrix and a scaling map.
    pub fn nonlocal(mu: MeasureMatrix, phi: ScalingMap, oriented: bool) -> Self {
        OperatorHandle { expr: Expr::Nonlocal { mu, phi, oriented } }
    }

    /// Drop below the worst active neighbor; homogeneous but fails (Z5).
    pub fn min_drop(sys: NeighborhoodSystem) -> Self {
        OperatorHandle { expr: Expr::MinDrop { sys } }
    }

    // -- combinators ---------------------------------------------------------

    pub fn sum(terms: Vec<OperatorHandle>) -> Result<Self> {
        Self::new(Expr::Sum { terms: terms.into_iter().map(|h| h.expr).collect() })
    }

    pub fn compose(self, phi: ScalingMap) -> Result<Self> {
        Self::new(Expr::Compose { phi, inner: Box::new(self.expr) })
    }

    pub fn scale(self, r: crate::exact::Rat) -> Result<Self> {
        Self::new(Expr::Scale { r, inner: Box::new(self.expr) })
    }

    pub fn truncate(self, eps: crate::exact::Rat) -> Result<Self> {
        Self::new(Expr::Truncate { eps, inner: Box::new(self.expr) })
    }

    pub fn restrict(self, keep: Vec<usize>) -> Result<Self> {
        Self::new(Expr::Restrict { keep, inner: Box::new(self.expr) })
    }

    pub fn pointwise_sup(terms: Vec<OperatorHandle>) -> Result<Self> {
        Self::new(Expr::Sup { terms: terms.into_iter().map(|h| h.expr).collect() })
    }

    pub fn pointwise_inf(terms: Vec<OperatorHandle>) -> Result<Self> {
        Self::new(Expr::Inf { terms: terms.into_iter().map(|h| h.expr).collect() })
    }

    /// `1` off the inner zero set: the pointwise limit of the n-th-root
    /// family. Passes every audit except scalar monotonicity.
    pub fn indicator(self) -> Self {
        OperatorHandle { expr: Expr::Indicator { inner: Box::new(self.expr) } }
    }
}

impl DescentOperator for OperatorHandle {
    fn space(&self) -> &FiniteSpace {
        self.expr.space()
    }

    fn eval(&self, f: &ScalarField) -> Result<ExtendedField> {
        self.expr.eval(f)
    }
}

// -- direct evaluation helpers (no handle allocation) -----------------------

/// `T_L[f]`.
pub fn rate_descent(gen: &Generator, f: &ScalarField) -> Result<ExtendedField> {
    Expr::RateDescent { gen: gen.clone() }.eval(f)
}

/// `T_{L,m}[f]`.
pub fn power_descent(gen: &Generator, m: &Exponent, f: &ScalarField) -> Result<ExtendedField> {
    Expr::PowerDescent { gen: gen.clone(), m: ExponentSpec::Uniform(m.clone()) }.eval(f)
}

/// `T_D[f]`.
pub fn max_drop(sys: &NeighborhoodSystem, f: &ScalarField) -> Result<ExtendedField> {
    Expr::MaxDrop { sys: sys.clone() }.eval(f)
}

/// Semiglobal slope of `f` over `(D, m)`.
pub fn semiglobal_slope(
    sys: &NeighborhoodSystem,
    metric: &MetricMatrix,
    f: &ScalarField,
) -> Result<ExtendedField> {
    sys.space().check_same(metric.space(), "slope system vs metric")?;
    Expr::SemiglobalSlope { sys: sys.clone(), metric: metric.clone() }.eval(f)
}

/// Nonlocal dispersion of `f` (oriented or not).
pub fn nonlocal(
    mu: &MeasureMatrix,
    phi: &ScalingMap,
    f: &ScalarField,
    oriented: bool,
) -> Result<ExtendedField> {
    Expr::Nonlocal { mu: mu.clone(), phi: phi.clone(), oriented }.eval(f)
}

#[cfg(test)]
mod tests;
