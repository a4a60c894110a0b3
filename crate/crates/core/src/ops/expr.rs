//! Operator expression trees and their evaluation.

use super::phi::ScalingMap;
use crate::error::{Error, Result};
use crate::exact::{Exact, Rat, Xval};
use crate::field::{ExtendedField, ScalarField};
use crate::generator::{Generator, MeasureMatrix, MetricMatrix};
use crate::neighbors::NeighborhoodSystem;
use crate::space::FiniteSpace;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

/// Exponent of the power-mean descent family; `m` may vary per vertex.
#[derive(Clone, Debug, PartialEq)]
pub enum Exponent {
    /// `m = num/den > 0`.
    Rational { num: i64, den: u32 },
    /// The max-drop limit over the active system.
    Infinity,
}

impl Exponent {
    pub fn rational(num: i64, den: u32) -> Result<Self> {
        if num <= 0 || den == 0 || num > u32::MAX as i64 {
            return Err(Error::NonPositiveExponent(format!("{num}/{den}")));
        }
        Ok(Exponent::Rational { num, den })
    }

    pub fn one() -> Self {
        Exponent::Rational { num: 1, den: 1 }
    }
}

/// Per-vertex or uniform exponent table.
#[derive(Clone, Debug, PartialEq)]
pub enum ExponentSpec {
    Uniform(Exponent),
    PerVertex(Vec<Exponent>),
}

impl ExponentSpec {
    fn at(&self, x: usize) -> &Exponent {
        match self {
            ExponentSpec::Uniform(e) => e,
            ExponentSpec::PerVertex(v) => &v[x],
        }
    }
}

/// The expression tree behind an operator handle.
#[derive(Clone, Debug)]
pub enum Expr {
    /// `T[f](x) = Σ_y L(x,y) (f(x) - f(y))_+`
    RateDescent { gen: Generator },
    /// `T[f](x) = (Σ_y L(x,y) ((f(x) - f(y))_+)^m)^(1/m)`, or max over the
    /// active system at `m = ∞`.
    PowerDescent { gen: Generator, m: ExponentSpec },
    /// `T[f](x) = max_{y ∈ D_x} (f(x) - f(y))_+`
    MaxDrop { sys: NeighborhoodSystem },
    /// `T[f](x) = sup_{y ∈ D_x} (f(x) - f(y))_+ / m(x,y)` (0 at `y = x`)
    SemiglobalSlope { sys: NeighborhoodSystem, metric: MetricMatrix },
    /// `T[f](x) = Σ_y μ(x,y) φ(|f(x) - f(y)|)`, positive part only when
    /// oriented.
    Nonlocal { mu: MeasureMatrix, phi: ScalingMap, oriented: bool },
    /// `T[f](x) = (f(x) - max_{y ∈ D_x \ {x}} f(y))_+`, 0 when `D_x = {x}`:
    /// descent measured against the worst active neighbor. Homogeneous but
    /// generally not classifiable.
    MinDrop { sys: NeighborhoodSystem },
    Sum { terms: Vec<Expr> },
    Compose { phi: ScalingMap, inner: Box<Expr> },
    Scale { r: Rat, inner: Box<Expr> },
    /// Output forced to 0 where `f(x) ≤ inf f + eps`.
    Truncate { eps: Rat, inner: Box<Expr> },
    /// Output forced to 0 off the vertex set `keep`.
    Restrict { keep: Vec<usize>, inner: Box<Expr> },
    Sup { terms: Vec<Expr> },
    Inf { terms: Vec<Expr> },
    /// `1` where the inner value is nonzero, else `0`: the pointwise limit
    /// of the n-th-root family.
    Indicator { inner: Box<Expr> },
}

impl Expr {
    pub(super) fn space(&self) -> &FiniteSpace {
        match self {
            Expr::RateDescent { gen } | Expr::PowerDescent { gen, .. } => gen.space(),
            Expr::MaxDrop { sys } | Expr::MinDrop { sys } => sys.space(),
            Expr::SemiglobalSlope { sys, .. } => sys.space(),
            Expr::Nonlocal { mu, .. } => mu.space(),
            Expr::Sum { terms } | Expr::Sup { terms } | Expr::Inf { terms } => {
                terms[0].space()
            }
            Expr::Compose { inner, .. }
            | Expr::Scale { inner, .. }
            | Expr::Truncate { inner, .. }
            | Expr::Restrict { inner, .. }
            | Expr::Indicator { inner } => inner.space(),
        }
    }

    pub(super) fn validate(&self) -> Result<()> {
        match self {
            Expr::RateDescent { .. } | Expr::MaxDrop { .. } | Expr::MinDrop { .. } => Ok(()),
            Expr::PowerDescent { gen, m } => {
                if let ExponentSpec::PerVertex(v) = m {
                    if v.len() != gen.space().len() {
                        return Err(Error::InvalidExpression(
                            "per-vertex exponent table has the wrong length".into(),
                        ));
                    }
                }
                Ok(())
            }
            Expr::SemiglobalSlope { sys, metric } => {
                sys.space().check_same(metric.space(), "slope system vs metric")
            }
            Expr::Nonlocal { .. } => Ok(()),
            Expr::Sum { terms } | Expr::Sup { terms } | Expr::Inf { terms } => {
                if terms.is_empty() {
                    return Err(Error::InvalidExpression("empty operator family".into()));
                }
                let s = terms[0].space();
                for t in terms {
                    t.validate()?;
                    s.check_same(t.space(), "operator family member")?;
                }
                Ok(())
            }
            Expr::Compose { inner, .. } | Expr::Indicator { inner } => inner.validate(),
            Expr::Scale { r, inner } => {
                if r.is_negative() {
                    return Err(Error::InvalidExpression("negative scale factor".into()));
                }
                inner.validate()
            }
            Expr::Truncate { eps, inner } => {
                if !eps.is_positive() {
                    return Err(Error::InvalidExpression("truncation needs eps > 0".into()));
                }
                inner.validate()
            }
            Expr::Restrict { keep, inner } => {
                let n = inner.space().len();
                if keep.iter().any(|&k| k >= n) {
                    return Err(Error::InvalidExpression(
                        "restriction set references an out-of-range vertex".into(),
                    ));
                }
                inner.validate()
            }
        }
    }

    pub(super) fn eval(&self, f: &ScalarField) -> Result<ExtendedField> {
        self.space().check_same(f.space(), "operator evaluation")?;
        let n = f.len();
        match self {
            Expr::RateDescent { gen } => {
                let vals = (0..n)
                    .map(|x| {
                        let mut acc = Rat::zero();
                        for y in 0..n {
                            if y == x {
                                continue;
                            }
                            let rate = gen.entry(x, y);
                            if rate.is_positive() {
                                acc += rate * f.drop_pos(x, y);
                            }
                        }
                        Xval::from_rat(acc)
                    })
                    .collect();
                Ok(ExtendedField::new(f.space().clone(), vals))
            }
            Expr::PowerDescent { gen, m } => {
                let mut vals = Vec::with_capacity(n);
                for x in 0..n {
                    vals.push(power_descent_at(gen, m.at(x), f, x)?);
                }
                Ok(ExtendedField::new(f.space().clone(), vals))
            }
            Expr::MaxDrop { sys } => {
                let vals = (0..n)
                    .map(|x| {
                        let best = sys
                            .set(x)
                            .iter()
                            .map(|&y| f.drop_pos(x, y))
                            .max()
                            .unwrap_or_else(Rat::zero);
                        Xval::from_rat(best)
                    })
                    .collect();
                Ok(ExtendedField::new(f.space().clone(), vals))
            }
            Expr::SemiglobalSlope { sys, metric } => {
                let vals = (0..n)
                    .map(|x| {
                        let best = sys
                            .set(x)
                            .iter()
                            .filter(|&&y| y != x)
                            .map(|&y| f.drop_pos(x, y) / metric.entry(x, y))
                            .max()
                            .unwrap_or_else(Rat::zero);
                        Xval::from_rat(best)
                    })
                    .collect();
                Ok(ExtendedField::new(f.space().clone(), vals))
            }
            Expr::Nonlocal { mu, phi, oriented } => {
                let mut vals = Vec::with_capacity(n);
                for x in 0..n {
                    let mut acc = Exact::zero();
                    for y in 0..n {
                        let w = mu.entry(x, y);
                        if w.is_zero() {
                            continue;
                        }
                        let arg = if *oriented {
                            f.drop_pos(x, y)
                        } else {
                            (f.value(x) - f.value(y)).abs()
                        };
                        let term = phi.apply_exact(&Exact::from_rat(arg))?;
                        acc = acc.add(&term.scale(w));
                    }
                    vals.push(Xval::Finite(acc));
                }
                Ok(ExtendedField::new(f.space().clone(), vals))
            }
            Expr::MinDrop { sys } => {
                let vals = (0..n)
                    .map(|x| {
                        let highest = sys
                            .set(x)
                            .iter()
                            .filter(|&&y| y != x)
                            .map(|&y| f.value(y))
                            .max();
                        let v = match highest {
                            None => Rat::zero(),
                            Some(top) => {
                                let d = f.value(x) - top;
                                if d.is_negative() {
                                    Rat::zero()
                                } else {
                                    d
                                }
                            }
                        };
                        Xval::from_rat(v)
                    })
                    .collect();
                Ok(ExtendedField::new(f.space().clone(), vals))
            }
            Expr::Sum { terms } => {
                let fields: Vec<ExtendedField> =
                    terms.iter().map(|t| t.eval(f)).collect::<Result<_>>()?;
                let vals = (0..n)
                    .map(|x| {
                        fields
                            .iter()
                            .fold(Xval::zero(), |acc, fld| acc.add(fld.value(x)))
                    })
                    .collect();
                Ok(ExtendedField::new(f.space().clone(), vals))
            }
            Expr::Compose { phi, inner } => {
                let base = inner.eval(f)?;
                let vals = base.values().iter().map(|v| phi.apply(v)).collect::<Result<_>>()?;
                Ok(ExtendedField::new(f.space().clone(), vals))
            }
            Expr::Scale { r, inner } => {
                let base = inner.eval(f)?;
                let vals = base.values().iter().map(|v| v.scale(r)).collect();
                Ok(ExtendedField::new(f.space().clone(), vals))
            }
            Expr::Truncate { eps, inner } => {
                let base = inner.eval(f)?;
                let cutoff = f.min() + eps;
                let vals = (0..n)
                    .map(|x| {
                        if f.value(x) <= &cutoff {
                            Xval::zero()
                        } else {
                            base.value(x).clone()
                        }
                    })
                    .collect();
                Ok(ExtendedField::new(f.space().clone(), vals))
            }
            Expr::Restrict { keep, inner } => {
                let base = inner.eval(f)?;
                let vals = (0..n)
                    .map(|x| {
                        if keep.contains(&x) {
                            base.value(x).clone()
                        } else {
                            Xval::zero()
                        }
                    })
                    .collect();
                Ok(ExtendedField::new(f.space().clone(), vals))
            }
            Expr::Sup { terms } => pointwise_extremum(terms, f, Ordering::Greater),
            Expr::Inf { terms } => pointwise_extremum(terms, f, Ordering::Less),
            Expr::Indicator { inner } => {
                let base = inner.eval(f)?;
                let vals = base
                    .values()
                    .iter()
                    .map(|v| {
                        if v.is_zero() {
                            Xval::zero()
                        } else {
                            Xval::from_rat(crate::exact::rint(1))
                        }
                    })
                    .collect();
                Ok(ExtendedField::new(f.space().clone(), vals))
            }
        }
    }
}

fn pointwise_extremum(
    terms: &[Expr],
    f: &ScalarField,
    keep_if: Ordering,
) -> Result<ExtendedField> {
    let fields: Vec<ExtendedField> = terms.iter().map(|t| t.eval(f)).collect::<Result<_>>()?;
    let n = f.len();
    let mut vals = Vec::with_capacity(n);
    for x in 0..n {
        let mut best = fields[0].value(x).clone();
        for fld in &fields[1..] {
            if fld.value(x).try_cmp(&best)? == keep_if {
                best = fld.value(x).clone();
            }
        }
        vals.push(best);
    }
    Ok(ExtendedField::new(f.space().clone(), vals))
}

/// One vertex of the power-mean family, exact wherever the value stays in
/// the radical class, bracketed (and known nonzero) otherwise.
fn power_descent_at(
    gen: &Generator,
    m: &Exponent,
    f: &ScalarField,
    x: usize,
) -> Result<Xval> {
    let n = f.len();
    match m {
        Exponent::Infinity => {
            let sys = gen.active_system();
            let best = sys.set(x).iter().map(|&y| f.drop_pos(x, y)).max().unwrap_or_else(Rat::zero);
            Ok(Xval::from_rat(best))
        }
        Exponent::Rational { num, den } => {
            let mut inner = Exact::zero();
            let mut all_zero = true;
            for y in 0..n {
                if y == x {
                    continue;
                }
                let rate = gen.entry(x, y);
                if !rate.is_positive() {
                    continue;
                }
                let d = f.drop_pos(x, y);
                if d.is_zero() {
                    continue;
                }
                all_zero = false;
                let powered = Exact::from_rat(d).pow_rat(*num, *den)?;
                inner = inner.add(&powered.scale(rate));
            }
            // the zero test is exact: the sum vanishes iff every summand does
            if all_zero {
                return Ok(Xval::zero());
            }
            match inner.pow_rat(*den as i64, *num as u32) {
                Ok(v) => Ok(Xval::Finite(v)),
                Err(Error::Unrepresentable(_)) => {
                    let (lo, hi) = inner.interval(160);
                    let lo = if lo.is_negative() { Rat::zero() } else { lo };
                    let lo_r = Exact::from_rat(lo).pow_rat(*den as i64, *num as u32)?;
                    let hi_r = Exact::from_rat(hi).pow_rat(*den as i64, *num as u32)?;
                    Ok(Xval::Approx { lo: lo_r.interval(96).0, hi: hi_r.interval(96).1 })
                }
                Err(e) => Err(e),
            }
        }
    }
}
