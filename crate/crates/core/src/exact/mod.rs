//! Exact scalar arithmetic: big rationals extended with radicals.
//!
//! Everything the finite layer computes is either a rational number or a
//! finite sum of terms `c * b^(1/m)` with `c`, `b` rational. [`Exact`]
//! represents such sums in canonical form and supports exact comparison;
//! [`Xval`] extends them with a `+inf` marker and a bracketed-interval
//! fallback for values that leave the radical class.

mod radical;
mod xval;

pub use radical::Exact;
pub use xval::Xval;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::str::FromStr;

/// The exact rational scalar used everywhere in the finite layer.
pub type Rat = num_rational::BigRational;

/// Parse a rational from `"p/q"` or plain integer form (optional sign).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let make = |n: &str| -> Result<BigInt> {
        BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("bad integer {n:?}: {e}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let den = make(q)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(make(p)?, den))
        }
        None => Ok(Rat::from_integer(make(s)?)),
    }
}

/// Render a rational as `"p/q"` (or `"p"` when the denominator is 1).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for integers.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `r^k` for a signed integer exponent; errors on `0^k` with `k < 0`.
pub fn rat_pow_int(r: &Rat, k: i64) -> Result<Rat> {
    if r.is_zero() {
        return if k > 0 {
            Ok(Rat::zero())
        } else if k == 0 {
            Ok(rint(1))
        } else {
            Err(Error::NonPositiveExponent("0 raised to negative power".into()))
        };
    }
    let e = u32::try_from(k.unsigned_abs())
        .map_err(|_| Error::Other(format!("exponent {k} out of range")))?;
    let p = Rat::new(r.numer().pow(e), r.denom().pow(e));
    Ok(if k < 0 { p.recip() } else { p })
}

/// Best-effort conversion of a rational to `f64`.
pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled quotient for extreme magnitudes.
        let scaled = (r.numer() << 64u32) / r.denom();
        scaled.to_f64().unwrap_or(if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
            / 2f64.powi(64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        assert_eq!(rat_to_string(&parse_rat("3/6").unwrap()), "1/2");
        assert_eq!(rat_to_string(&parse_rat("-4/2").unwrap()), "-2");
        assert_eq!(rat_to_string(&parse_rat("7").unwrap()), "7");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn integer_powers() {
        assert_eq!(rat_pow_int(&rat(2, 3), 3).unwrap(), rat(8, 27));
        assert_eq!(rat_pow_int(&rat(2, 3), -2).unwrap(), rat(9, 4));
        assert!(rat_pow_int(&rint(0), -1).is_err());
    }
}
