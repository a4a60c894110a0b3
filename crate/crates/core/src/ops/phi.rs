//! The registered family of scaling maps `φ: R+ -> R+` used by nonlocal
//! operators and post-composition.

use crate::error::{Error, Result};
use crate::exact::{rat_to_string, Exact, Rat, Xval};
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

/// A serializable scaling map. Arbitrary closures cannot round-trip through
/// the JSON interface, so only these three shapes are admitted:
///
/// * `Pow(p)` — `t^p` for rational `p > 0`; strictly increasing, unbounded.
/// * `Threshold(eps)` — `t · 1_{t > eps}`; not strictly increasing, used to
///   build deliberately degenerate operators.
/// * `Table` — explicit values on a finite set of inputs (e.g. the
///   difference set of a grid); inputs outside the table are an error.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalingMap {
    Pow { num: i64, den: u32 },
    Threshold { eps: Rat },
    Table { pairs: Vec<(Rat, Rat)> },
}

impl ScalingMap {
    pub fn pow(num: i64, den: u32) -> Result<Self> {
        if num <= 0 || den == 0 {
            return Err(Error::InvalidPhi(format!("t^({num}/{den}) needs a positive exponent")));
        }
        Ok(ScalingMap::Pow { num, den })
    }

    pub fn threshold(eps: Rat) -> Result<Self> {
        if !eps.is_positive() {
            return Err(Error::InvalidPhi("threshold needs eps > 0".into()));
        }
        Ok(ScalingMap::Threshold { eps })
    }

    pub fn table(mut pairs: Vec<(Rat, Rat)>) -> Result<Self> {
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        pairs.dedup_by(|a, b| a.0 == b.0);
        for (t, v) in &pairs {
            if t.is_negative() || v.is_negative() {
                return Err(Error::InvalidPhi("table entries must be nonnegative".into()));
            }
        }
        Ok(ScalingMap::Table { pairs })
    }

    /// Whether the map qualifies for the modulus-preserving composition
    /// closure (strictly increasing, `φ(0) = 0`, unbounded).
    pub fn preserves_moduli(&self) -> bool {
        matches!(self, ScalingMap::Pow { .. })
    }

    pub fn apply_exact(&self, t: &Exact) -> Result<Exact> {
        match self {
            ScalingMap::Pow { num, den } => {
                if t.is_zero() {
                    return Ok(Exact::zero());
                }
                t.pow_rat(*num, *den)
            }
            ScalingMap::Threshold { eps } => {
                match t.try_cmp(&Exact::from_rat(eps.clone()))? {
                    Ordering::Greater => Ok(t.clone()),
                    _ => Ok(Exact::zero()),
                }
            }
            ScalingMap::Table { pairs } => {
                let r = t.as_rational().ok_or_else(|| {
                    Error::InvalidPhi("table lookup on an irrational value".into())
                })?;
                pairs
                    .iter()
                    .find(|(k, _)| k == r)
                    .map(|(_, v)| Exact::from_rat(v.clone()))
                    .ok_or_else(|| Error::MissingTableEntry(rat_to_string(r)))
            }
        }
    }

    /// Apply to an extended value, with `φ(+inf) = +inf`.
    pub fn apply(&self, v: &Xval) -> Result<Xval> {
        match v {
            Xval::Infinite => Ok(Xval::Infinite),
            Xval::Finite(e) => {
                if e.is_zero() {
                    // every registered map fixes 0 by construction
                    return Ok(Xval::zero());
                }
                match self.apply_exact(e) {
                    Ok(out) => Ok(Xval::Finite(out)),
                    Err(Error::Unrepresentable(_)) => {
                        let (lo, hi) = e.interval(160);
                        self.bracket_apply(&lo, &hi)
                    }
                    Err(e) => Err(e),
                }
            }
            Xval::Approx { lo, hi } => self.bracket_apply(lo, hi),
        }
    }

    fn bracket_apply(&self, lo: &Rat, hi: &Rat) -> Result<Xval> {
        match self {
            ScalingMap::Pow { num, den } => {
                let lo = if lo.is_negative() { Rat::zero() } else { lo.clone() };
                let lo_pow = Exact::from_rat(lo).pow_rat(*num, *den)?.interval(96).0;
                let hi_pow = Exact::from_rat(hi.clone()).pow_rat(*num, *den)?.interval(96).1;
                Ok(Xval::Approx { lo: lo_pow, hi: hi_pow })
            }
            ScalingMap::Threshold { eps } => {
                if lo > eps {
                    Ok(Xval::Approx { lo: lo.clone(), hi: hi.clone() })
                } else if hi <= eps {
                    Ok(Xval::zero())
                } else {
                    Err(Error::Undecidable("threshold straddles an interval value".into()))
                }
            }
            ScalingMap::Table { .. } => {
                Err(Error::InvalidPhi("table lookup on a bracketed value".into()))
            }
        }
    }
}
