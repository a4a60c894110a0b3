//! Sums of radicals of rationals with exact comparison.

use super::{rat_pow_int, rat_to_f64, Rat};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Largest prime probed when extracting perfect-power parts of a base.
const FACTOR_BOUND: u64 = 100_000;
/// Precision ladder (fractional bits) for interval sign decisions.
const PRECISION_LADDER: [u32; 5] = [64, 128, 256, 1024, 4096];

/// A finite sum `q + Σ c_i · b_i^(1/m_i)` with all data rational.
///
/// Terms are kept canonical: `m_i ≥ 2`, `b_i > 0`, `b_i ≠ 1`, perfect
/// `m`-th-power factors of `b_i` moved into `c_i` (for bases whose
/// numerator and denominator factor below the trial-division bound), and
/// like terms merged. Distinct canonical radicals are linearly independent
/// over the rationals, so structural equality of canonical forms decides
/// value equality; comparisons of distinct values are settled by
/// escalating-precision integer brackets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exact {
    rational: Rat,
    /// (root m, base b) -> coefficient, coefficient never zero.
    terms: BTreeMap<(u32, Rat), Rat>,
}

impl Exact {
    pub fn zero() -> Self {
        Exact { rational: Rat::zero(), terms: BTreeMap::new() }
    }

    pub fn from_rat(r: Rat) -> Self {
        Exact { rational: r, terms: BTreeMap::new() }
    }

    /// Canonical `c * b^(1/m)`; `b` must be nonnegative.
    pub fn radical(coef: Rat, base: Rat, root: u32) -> Result<Self> {
        if root == 0 {
            return Err(Error::NonPositiveExponent("zeroth root".into()));
        }
        if base.is_negative() {
            return Err(Error::Unrepresentable("negative radicand".into()));
        }
        let mut out = Exact::zero();
        out.push_term(coef, base, root);
        Ok(out)
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.terms.is_empty().then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.rational.is_zero()
    }

    fn push_term(&mut self, coef: Rat, base: Rat, root: u32) {
        if coef.is_zero() || base.is_zero() {
            return;
        }
        let (coef, base, root) = canonicalize(coef, base, root);
        if root == 1 {
            self.rational += coef * base;
            return;
        }
        let entry = self.terms.entry((root, base.clone())).or_insert_with(Rat::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&(root, base));
        }
    }

    pub fn add(&self, other: &Exact) -> Exact {
        let mut out = self.clone();
        out.rational += &other.rational;
        for ((root, base), coef) in &other.terms {
            out.push_term(coef.clone(), base.clone(), *root);
        }
        out
    }

    pub fn sub(&self, other: &Exact) -> Exact {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Exact {
        let mut out = Exact::zero();
        out.rational = -self.rational.clone();
        for ((root, base), coef) in &self.terms {
            out.terms.insert((*root, base.clone()), -coef.clone());
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> Exact {
        if r.is_zero() {
            return Exact::zero();
        }
        let mut out = Exact::zero();
        out.rational = &self.rational * r;
        for ((root, base), coef) in &self.terms {
            out.terms.insert((*root, base.clone()), coef * r);
        }
        out
    }

    pub fn mul(&self, other: &Exact) -> Exact {
        let mut out = other.scale(&self.rational);
        for ((m1, b1), c1) in &self.terms {
            out.push_term(c1 * &other.rational, b1.clone(), *m1);
            for ((m2, b2), c2) in &other.terms {
                // b1^(1/m1) * b2^(1/m2) = (b1^(l/m1) * b2^(l/m2))^(1/l)
                let l = (*m1 as u64).lcm(&(*m2 as u64)) as u32;
                let e1 = (l / m1) as i64;
                let e2 = (l / m2) as i64;
                let base = rat_pow_int(b1, e1).expect("positive base")
                    * rat_pow_int(b2, e2).expect("positive base");
                out.push_term(c1 * c2, base, l);
            }
        }
        out
    }

    /// Integer power by repeated multiplication (small exponents only).
    pub fn pow_int(&self, k: u32) -> Exact {
        let mut acc = Exact::from_rat(Rat::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self^(num/den)` where it stays inside the radical class:
    /// rationals, single terms, or integer powers of sums.
    pub fn pow_rat(&self, num: i64, den: u32) -> Result<Exact> {
        if den == 0 {
            return Err(Error::NonPositiveExponent("zero exponent denominator".into()));
        }
        if self.is_zero() {
            return if num > 0 {
                Ok(Exact::zero())
            } else {
                Err(Error::NonPositiveExponent("0 raised to nonpositive power".into()))
            };
        }
        if let Some(r) = self.as_rational() {
            if r.is_negative() {
                return Err(Error::Unrepresentable("negative base".into()));
            }
            return Exact::radical(Rat::one(), rat_pow_int(r, num)?, den);
        }
        if self.rational.is_zero() && self.terms.len() == 1 {
            let ((m, b), c) = self.terms.iter().next().expect("one term");
            if c.is_negative() {
                return Err(Error::Unrepresentable("negative single-term value".into()));
            }
            // (c b^(1/m))^(num/den) = (c^(num·m) · b^num)^(1/(m·den))
            let root = (*m).checked_mul(den).ok_or_else(|| {
                Error::Unrepresentable("radical root overflow".into())
            })?;
            let e = (num).checked_mul(*m as i64).ok_or_else(|| {
                Error::Unrepresentable("radical exponent overflow".into())
            })?;
            let base = rat_pow_int(c, e)? * rat_pow_int(b, num)?;
            return Exact::radical(Rat::one(), base, root);
        }
        if den == 1 && num >= 0 {
            return Ok(self.pow_int(num as u32));
        }
        Err(Error::Unrepresentable(format!(
            "({self})^({num}/{den}) is not a radical sum"
        )))
    }

    /// Sign of the value: -1, 0, +1.
    pub fn try_sign(&self) -> Result<i8> {
        if self.terms.is_empty() {
            return Ok(sign_of(&self.rational));
        }
        // All-positive or all-negative term sums with matching rational sign
        // decide immediately.
        let coef_signs: Vec<i8> = self.terms.values().map(sign_of).collect();
        let rat_sign = sign_of(&self.rational);
        if coef_signs.iter().all(|&s| s > 0) && rat_sign >= 0 {
            return Ok(1);
        }
        if coef_signs.iter().all(|&s| s < 0) && rat_sign <= 0 {
            return Ok(-1);
        }
        for bits in PRECISION_LADDER {
            let (lo, hi) = self.bracket(bits);
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
        }
        Err(Error::Undecidable(format!("sign of {self}")))
    }

    pub fn try_cmp(&self, other: &Exact) -> Result<Ordering> {
        if self == other {
            return Ok(Ordering::Equal);
        }
        match self.sub(other).try_sign()? {
            1 => Ok(Ordering::Greater),
            -1 => Ok(Ordering::Less),
            // A vanishing difference of non-identical canonical forms can
            // only come from incomplete base factorization.
            _ => Ok(Ordering::Equal),
        }
    }

    /// Integer bracket `[lo, hi]` of `value * 2^bits`.
    fn bracket(&self, bits: u32) -> (BigInt, BigInt) {
        let (mut lo, mut hi) = rational_bracket(&self.rational, bits);
        for ((root, base), coef) in &self.terms {
            // |coef| * base^(1/root) at scale 2^bits, within 2 ulp.
            let t = rat_pow_int(&coef.abs(), *root as i64).expect("abs coef") * base;
            let scaled = Rat::new(t.numer() << (bits as usize * *root as usize), t.denom().clone());
            let q = scaled.numer().div_floor(scaled.denom());
            let r = q.nth_root(*root);
            let (tlo, thi) = (r.clone(), r + BigInt::from(2));
            if coef.is_positive() {
                lo += tlo;
                hi += thi;
            } else {
                lo -= thi;
                hi -= tlo;
            }
        }
        (lo, hi)
    }

    /// Rational bracket `[lo, hi]` with `hi - lo ≤ (2·terms + 1)·2^-bits`.
    pub fn interval(&self, bits: u32) -> (Rat, Rat) {
        let (lo, hi) = self.bracket(bits);
        let scale = BigInt::one() << (bits as usize);
        (Rat::new(lo, scale.clone()), Rat::new(hi, scale))
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rational() {
            return rat_to_f64(r);
        }
        let (lo, hi) = self.interval(80);
        (rat_to_f64(&lo) + rat_to_f64(&hi)) / 2.0
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "{}", super::rat_to_string(&self.rational));
        }
        let mut parts = Vec::new();
        if !self.rational.is_zero() {
            parts.push(super::rat_to_string(&self.rational));
        }
        for ((root, base), coef) in &self.terms {
            parts.push(format!(
                "{}*({})^(1/{})",
                super::rat_to_string(coef),
                super::rat_to_string(base),
                root
            ));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn sign_of(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn rational_bracket(r: &Rat, bits: u32) -> (BigInt, BigInt) {
    let scaled = Rat::new(r.numer() << (bits as usize), r.denom().clone());
    let lo = scaled.numer().div_floor(scaled.denom());
    let exactly = (scaled.numer() % scaled.denom()).is_zero();
    let hi = if exactly { lo.clone() } else { &lo + BigInt::one() };
    (lo, hi)
}

/// Fold perfect-root parts of `base` into `coef` and reduce the root.
fn canonicalize(mut coef: Rat, base: Rat, root: u32) -> (Rat, Rat, u32) {
    if root == 1 || base.is_one() {
        return (coef * if root == 1 { base } else { Rat::one() }, Rat::one(), 1);
    }
    let (num_f, num_left) = factor(base.numer());
    let (den_f, den_left) = factor(base.denom());
    if num_left.is_none() || den_left.is_none() {
        // Factorization incomplete; keep the base raw.
        return (coef, base, root);
    }
    let mut exps: BTreeMap<u64, i64> = BTreeMap::new();
    for (p, e) in num_f {
        *exps.entry(p).or_insert(0) += e as i64;
    }
    for (p, e) in den_f {
        *exps.entry(p).or_insert(0) -= e as i64;
    }
    exps.retain(|_, e| *e != 0);
    if exps.is_empty() {
        return (coef, Rat::one(), 1);
    }
    // Reduce the root by the gcd of all exponents (e.g. 4^(1/4) = 2^(1/2)).
    let mut g = root as i64;
    for e in exps.values() {
        g = g.gcd(e);
    }
    let root = (root as i64 / g) as u32;
    let mut new_base = Rat::one();
    for (p, e) in exps {
        let e = e / g;
        let q = e.div_euclid(root as i64);
        let rem = e.rem_euclid(root as i64);
        coef *= rat_pow_int(&Rat::from_integer(BigInt::from(p)), q).expect("prime power");
        new_base *= rat_pow_int(&Rat::from_integer(BigInt::from(p)), rem).expect("prime power");
    }
    if root == 1 || new_base.is_one() {
        (coef * if root == 1 { new_base } else { Rat::one() }, Rat::one(), 1)
    } else {
        (coef, new_base, root)
    }
}

/// Trial-division factorization; returns `None` leftover if it did not
/// complete below [`FACTOR_BOUND`].
fn factor(n: &BigInt) -> (Vec<(u64, u32)>, Option<()>) {
    let mut m = match n.to_u64() {
        Some(v) => v,
        None => return (Vec::new(), None),
    };
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m && p <= FACTOR_BOUND {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m == 1 {
        (out, Some(()))
    } else if m <= FACTOR_BOUND * FACTOR_BOUND {
        out.push((m, 1));
        (out, Some(()))
    } else {
        (Vec::new(), None)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, rint};
    use super::*;

    fn sqrt(n: i64) -> Exact {
        Exact::radical(rint(1), rint(n), 2).unwrap()
    }

    #[test]
    fn perfect_roots_fold_to_rationals() {
        assert_eq!(sqrt(4), Exact::from_rat(rint(2)));
        assert_eq!(sqrt(0), Exact::zero());
        let r = Exact::radical(rint(3), rat(1, 4), 2).unwrap();
        assert_eq!(r, Exact::from_rat(rat(3, 2)));
        // 4^(1/4) = sqrt(2)
        assert_eq!(Exact::radical(rint(1), rint(4), 4).unwrap(), sqrt(2));
    }

    #[test]
    fn like_terms_merge() {
        // sqrt(8) = 2 sqrt(2), so sqrt(2) + sqrt(8) = 3 sqrt(2)
        let s = sqrt(2).add(&sqrt(8));
        assert_eq!(s, Exact::radical(rint(3), rint(2), 2).unwrap());
        assert!(sqrt(2).sub(&sqrt(2)).is_zero());
    }

    #[test]
    fn exact_comparisons() {
        // sqrt(2) + sqrt(3) < sqrt(10)
        let lhs = sqrt(2).add(&sqrt(3));
        assert_eq!(lhs.try_cmp(&sqrt(10)).unwrap(), Ordering::Less);
        assert_eq!(sqrt(2).try_cmp(&Exact::from_rat(rat(141, 100))).unwrap(), Ordering::Greater);
        assert_eq!(sqrt(2).try_cmp(&Exact::from_rat(rat(142, 100))).unwrap(), Ordering::Less);
        // 2 sqrt(2) == sqrt(8)
        assert_eq!(sqrt(2).scale(&rint(2)).try_cmp(&sqrt(8)).unwrap(), Ordering::Equal);
    }

    #[test]
    fn products_and_powers() {
        // sqrt(2) * sqrt(2) = 2
        assert_eq!(sqrt(2).mul(&sqrt(2)), Exact::from_rat(rint(2)));
        // sqrt(2) * 2^(1/3) = 2^(5/6)
        let p = sqrt(2).mul(&Exact::radical(rint(1), rint(2), 3).unwrap());
        assert_eq!(p, Exact::radical(rint(1), rint(32), 6).unwrap());
        // (1 + sqrt(2))^2 = 3 + 2 sqrt(2)
        let s = Exact::from_rat(rint(1)).add(&sqrt(2)).pow_int(2);
        assert_eq!(s, Exact::from_rat(rint(3)).add(&sqrt(2).scale(&rint(2))));
        // (sqrt(2))^(3/1) = 2 sqrt(2)
        assert_eq!(sqrt(2).pow_rat(3, 1).unwrap(), sqrt(2).scale(&rint(2)));
        // multi-term fractional power is not representable
        assert!(sqrt(2).add(&sqrt(3)).pow_rat(1, 2).is_err());
    }

    #[test]
    fn intervals_bracket_the_value() {
        let v = sqrt(2);
        let (lo, hi) = v.interval(64);
        let true_val = 2f64.sqrt();
        assert!(rat_to_f64(&lo) <= true_val && true_val <= rat_to_f64(&hi));
        assert!((rat_to_f64(&hi) - rat_to_f64(&lo)).abs() < 1e-15);
        assert!((v.to_f64() - true_val).abs() < 1e-12);
    }
}
