//! Extended nonnegative values: exact, bracketed, or `+inf`.

use super::{rat_to_f64, rat_to_string, Exact, Rat};
use crate::error::{Error, Result};
use num_traits::Zero;
use std::cmp::Ordering;
use std::fmt;

/// One entry of an extended field.
///
/// `Finite` carries an exact radical sum. `Approx` brackets a value that is
/// known to be strictly positive but left the radical class (it is produced
/// only after an exact zero test, with at least 64 fractional bits of
/// precision). `Infinite` is a distinct marker, never a sentinel number.
#[derive(Clone, PartialEq, Debug)]
pub enum Xval {
    Finite(Exact),
    Approx { lo: Rat, hi: Rat },
    Infinite,
}

impl Xval {
    pub fn zero() -> Self {
        Xval::Finite(Exact::zero())
    }

    pub fn from_rat(r: Rat) -> Self {
        Xval::Finite(Exact::from_rat(r))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Xval::Finite(e) => e.is_zero(),
            Xval::Approx { .. } | Xval::Infinite => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Xval::Infinite)
    }

    pub fn try_cmp(&self, other: &Xval) -> Result<Ordering> {
        use Xval::*;
        match (self, other) {
            (Infinite, Infinite) => Ok(Ordering::Equal),
            (Infinite, _) => Ok(Ordering::Greater),
            (_, Infinite) => Ok(Ordering::Less),
            (Finite(a), Finite(b)) => a.try_cmp(b),
            // Brackets are built deterministically from exact inner data, so
            // identical brackets mean identical constructions.
            (a, b) if a == b => Ok(Ordering::Equal),
            (a, b) => {
                let (alo, ahi) = a.bounds();
                let (blo, bhi) = b.bounds();
                if ahi < blo {
                    Ok(Ordering::Less)
                } else if bhi < alo {
                    Ok(Ordering::Greater)
                } else {
                    Err(Error::Undecidable(format!("{a} vs {b}")))
                }
            }
        }
    }

    fn bounds(&self) -> (Rat, Rat) {
        match self {
            Xval::Finite(e) => e.interval(96),
            Xval::Approx { lo, hi } => (lo.clone(), hi.clone()),
            Xval::Infinite => unreachable!("bounds of +inf"),
        }
    }

    /// Pointwise sum; `inf + anything = inf`.
    pub fn add(&self, other: &Xval) -> Xval {
        use Xval::*;
        match (self, other) {
            (Infinite, _) | (_, Infinite) => Infinite,
            (Finite(a), Finite(b)) => Finite(a.add(b)),
            (a, b) => {
                let (alo, ahi) = a.bounds();
                let (blo, bhi) = b.bounds();
                Approx { lo: alo + blo, hi: ahi + bhi }
            }
        }
    }

    /// Multiply by a nonnegative exact factor (used by homogeneity checks,
    /// where the factor `r^p` may be a radical).
    pub fn mul_exact(&self, factor: &Exact) -> Xval {
        if factor.is_zero() {
            return Xval::zero();
        }
        match self {
            Xval::Finite(e) => Xval::Finite(e.mul(factor)),
            Xval::Approx { lo, hi } => {
                let (flo, fhi) = factor.interval(96);
                let flo = if flo < Rat::zero() { Rat::zero() } else { flo };
                Xval::Approx { lo: lo * flo, hi: hi * fhi }
            }
            Xval::Infinite => Xval::Infinite,
        }
    }

    /// `r · self` for `r ≥ 0`, with the convention `0 · inf = 0`.
    pub fn scale(&self, r: &Rat) -> Xval {
        if r.is_zero() {
            return Xval::zero();
        }
        match self {
            Xval::Finite(e) => Xval::Finite(e.scale(r)),
            Xval::Approx { lo, hi } => Xval::Approx { lo: lo * r, hi: hi * r },
            Xval::Infinite => Xval::Infinite,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Xval::Finite(e) => e.to_f64(),
            Xval::Approx { lo, hi } => (rat_to_f64(lo) + rat_to_f64(hi)) / 2.0,
            Xval::Infinite => f64::INFINITY,
        }
    }

    /// Exact rational payload when the value is rational.
    pub fn as_rational(&self) -> Option<&Rat> {
        match self {
            Xval::Finite(e) => e.as_rational(),
            _ => None,
        }
    }
}

impl fmt::Display for Xval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Xval::Finite(e) => write!(f, "{e}"),
            Xval::Approx { lo, hi } => {
                write!(f, "[{}, {}]", rat_to_string(lo), rat_to_string(hi))
            }
            Xval::Infinite => write!(f, "inf"),
        }
    }
}
