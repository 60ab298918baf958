//! Exact tangle slopes and continued-fraction calculus.
//!
//! Slopes live in `Q ∪ {∞}`. A continued fraction is stored as
//! `[a_n, ..., a_1]`, outermost entry first, and evaluates as
//! `a_n + 1/(a_{n-1} + 1/(... + 1/a_1))`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("slope is infinite")]
    InfiniteSlope,
    #[error("0/0 is not a slope")]
    Indeterminate,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("malformed rational `{0}`")]
    Malformed(String),
}

pub(crate) fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A rational number `p/q` in lowest terms, or `∞` (stored as `1/0`).
///
/// The derived ordering compares `(numerator, denominator)` pairs
/// lexicographically; it is a total order used for canonical forms, not the
/// numeric order (see [`ExtendedSlope::cmp_value`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtendedSlope {
    num: i64,
    den: i64,
}

impl ExtendedSlope {
    pub const INFINITY: ExtendedSlope = ExtendedSlope { num: 1, den: 0 };
    pub const ZERO: ExtendedSlope = ExtendedSlope { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Self, RationalError> {
        if den == 0 {
            return if num == 0 {
                Err(RationalError::Indeterminate)
            } else {
                Ok(Self::INFINITY)
            };
        }
        let g = gcd(num, den);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = num.checked_neg().ok_or(RationalError::Overflow)?;
            den = den.checked_neg().ok_or(RationalError::Overflow)?;
        }
        Ok(Self { num, den })
    }

    pub fn integer(n: i64) -> Self {
        Self { num: n, den: 1 }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den == 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_positive(&self) -> bool {
        self.den > 0 && self.num > 0
    }

    pub fn is_negative(&self) -> bool {
        self.den > 0 && self.num < 0
    }

    /// `1/x`, with `1/0 = ∞` and `1/∞ = 0`.
    pub fn recip(&self) -> Self {
        if self.is_infinite() {
            Self::ZERO
        } else if self.num == 0 {
            Self::INFINITY
        } else if self.num < 0 {
            Self { num: -self.den, den: -self.num }
        } else {
            Self { num: self.den, den: self.num }
        }
    }

    /// Negation; `∞` is its own negative.
    pub fn neg(&self) -> Self {
        if self.is_infinite() {
            *self
        } else {
            Self { num: -self.num, den: self.den }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RationalError> {
        if self.is_infinite() || other.is_infinite() {
            return Ok(Self::INFINITY);
        }
        let g = gcd(self.den, other.den);
        let lhs = self
            .num
            .checked_mul(other.den / g)
            .ok_or(RationalError::Overflow)?;
        let rhs = other
            .num
            .checked_mul(self.den / g)
            .ok_or(RationalError::Overflow)?;
        let num = lhs.checked_add(rhs).ok_or(RationalError::Overflow)?;
        let den = (self.den / g)
            .checked_mul(other.den)
            .ok_or(RationalError::Overflow)?;
        Self::new(num, den)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RationalError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_add_integer(&self, n: i64) -> Result<Self, RationalError> {
        self.checked_add(&Self::integer(n))
    }

    /// Greatest integer `<= self`. Fails on `∞`.
    pub fn floor(&self) -> Result<i64, RationalError> {
        if self.is_infinite() {
            return Err(RationalError::InfiniteSlope);
        }
        Ok(self.num.div_euclid(self.den))
    }

    /// Representative of `self mod 1` in `[0, 1)`.
    pub fn frac(&self) -> Result<Self, RationalError> {
        if self.is_infinite() {
            return Err(RationalError::InfiniteSlope);
        }
        Ok(Self { num: self.num.rem_euclid(self.den), den: self.den })
    }

    pub fn abs(&self) -> Self {
        Self { num: self.num.abs(), den: self.den }
    }

    /// Numeric comparison of finite slopes; `∞` sorts above everything.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => {
                let l = self.num as i128 * other.den as i128;
                let r = other.num as i128 * self.den as i128;
                l.cmp(&r)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            self.num as f64 / self.den as f64
        }
    }
}

impl fmt::Display for ExtendedSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "1/0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for ExtendedSlope {
    type Err = RationalError;

    /// Accepts `p/q` or `p` with an optional leading `-`, plus `inf`/`∞`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let token: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let malformed = || RationalError::Malformed(s.trim().to_string());
        if token == "inf" || token == "∞" {
            return Ok(Self::INFINITY);
        }
        let (neg, body) = match token.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, token.as_str()),
        };
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        let (p, q) = match body.split_once('/') {
            Some((p, q)) if digits(p) && digits(q) => (p, q),
            None if digits(body) => (body, "1"),
            _ => return Err(malformed()),
        };
        let p: i64 = p.parse().map_err(|_| malformed())?;
        let q: i64 = q.parse().map_err(|_| malformed())?;
        Self::new(if neg { -p } else { p }, q)
    }
}

/// Continued fraction `[a_n, ..., a_1]`, outermost (horizontal) entry first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction(Vec<i64>);

impl ContinuedFraction {
    pub fn new(entries: Vec<i64>) -> Self {
        Self(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry `a_i` in the 1-based innermost-last numbering (`a_1` is the
    /// last stored entry).
    pub fn a(&self, i: usize) -> i64 {
        self.0[self.0.len() - i]
    }

    /// Sum of absolute values of entries, i.e. the crossing count of the
    /// tangle diagram built from this expansion.
    pub fn crossing_count(&self) -> u64 {
        self.0.iter().map(|a| a.unsigned_abs()).sum()
    }

    /// Sign-uniform, no interior zeros.
    pub fn is_canonical(&self) -> bool {
        let n = self.0.len();
        let pos = self.0.iter().any(|&a| a > 0);
        let neg = self.0.iter().any(|&a| a < 0);
        if pos && neg {
            return false;
        }
        // every entry except a_n must be nonzero
        self.0.iter().skip(1).all(|&a| a != 0) && (n != 1 || self.0[0] != 0)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// Right-to-left fold `x ↦ a + 1/x`. The empty expansion evaluates to 0.
pub fn cf_eval(cf: &ContinuedFraction) -> Result<ExtendedSlope, RationalError> {
    if cf.is_empty() {
        return Ok(ExtendedSlope::ZERO);
    }
    let mut x = ExtendedSlope::INFINITY;
    for &a in cf.entries().iter().rev() {
        x = ExtendedSlope::integer(a).checked_add(&x.recip())?;
    }
    Ok(x)
}

/// Expansion by truncating division, so every partial quotient carries the
/// sign of the slope. `|s| < 1` gives a leading zero.
pub fn slope_to_canonical_cf(s: ExtendedSlope) -> Result<ContinuedFraction, RationalError> {
    if s.is_infinite() {
        return Err(RationalError::InfiniteSlope);
    }
    if s.is_zero() {
        return Ok(ContinuedFraction(Vec::new()));
    }
    let (mut p, mut q) = (s.numerator(), s.denominator());
    let mut entries = Vec::new();
    loop {
        let a = p / q;
        let r = p - a * q;
        entries.push(a);
        if r == 0 {
            break;
        }
        // q/r keeps the sign of the original slope since r and p agree in sign
        let (np, nq) = if r < 0 { (-q, -r) } else { (q, r) };
        p = np;
        q = nq;
    }
    Ok(ContinuedFraction(entries))
}

/// Two expansions describe equivalent rational tangles iff they evaluate to
/// the same slope.
pub fn cf_equivalent(a: &ContinuedFraction, b: &ContinuedFraction) -> Result<bool, RationalError> {
    Ok(cf_eval(a)? == cf_eval(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(p: i64, q: i64) -> ExtendedSlope {
        ExtendedSlope::new(p, q).unwrap()
    }

    fn cf(v: &[i64]) -> ContinuedFraction {
        ContinuedFraction::new(v.to_vec())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(cf_eval(&cf(&[4, -1, -2, 3])).unwrap(), s(27, 8));
        assert_eq!(cf_eval(&cf(&[0, 0])).unwrap(), ExtendedSlope::INFINITY);
        assert_eq!(cf_eval(&cf(&[0, 2])).unwrap(), s(1, 2));
        assert_eq!(cf_eval(&cf(&[])).unwrap(), ExtendedSlope::ZERO);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(slope_to_canonical_cf(s(1, 2)).unwrap(), cf(&[0, 2]));
        assert_eq!(slope_to_canonical_cf(s(2, 5)).unwrap(), cf(&[0, 2, 2]));
        assert_eq!(slope_to_canonical_cf(s(-2, 5)).unwrap(), cf(&[0, -2, -2]));
        assert_eq!(slope_to_canonical_cf(s(27, 8)).unwrap(), cf(&[3, 2, 1, 2]));
        assert!(slope_to_canonical_cf(s(0, 1)).unwrap().is_empty());
        assert_eq!(
            slope_to_canonical_cf(ExtendedSlope::INFINITY),
            Err(RationalError::InfiniteSlope)
        );
    }

    #[test]
    fn equivalence_examples() {
        assert!(cf_equivalent(&cf(&[0, 2]), &cf(&[0, 1, 1])).unwrap());
        assert!(!cf_equivalent(&cf(&[0, 2]), &cf(&[0, 3])).unwrap());
        // 4 + 1/(-1 + 1/(-2 + 1/3)) = 27/8 and 3 + 1/(2 + 1/(1 + 1/2)) = 27/8
        assert!(cf_equivalent(&cf(&[4, -1, -2, 3]), &cf(&[3, 2, 1, 2])).unwrap());
    }

    #[test]
    fn construction_normalizes() {
        assert_eq!(s(2, -4), s(-1, 2));
        assert_eq!(s(-3, 0), ExtendedSlope::INFINITY);
        assert_eq!(ExtendedSlope::new(0, 0), Err(RationalError::Indeterminate));
        assert_eq!(s(0, -5), ExtendedSlope::ZERO);
    }

    #[test]
    fn parse_tokens() {
        assert_eq!(" -2 / 3 ".parse::<ExtendedSlope>().unwrap(), s(-2, 3));
        assert_eq!("4/6".parse::<ExtendedSlope>().unwrap(), s(2, 3));
        assert_eq!("2".parse::<ExtendedSlope>().unwrap(), s(2, 1));
        assert_eq!("1/0".parse::<ExtendedSlope>().unwrap(), ExtendedSlope::INFINITY);
        assert!(matches!("1/-2".parse::<ExtendedSlope>(), Err(RationalError::Malformed(_))));
        assert!(matches!("x".parse::<ExtendedSlope>(), Err(RationalError::Malformed(_))));
        assert!(matches!("1/".parse::<ExtendedSlope>(), Err(RationalError::Malformed(_))));
    }

    #[test]
    fn floor_and_frac() {
        assert_eq!(s(-1, 3).floor().unwrap(), -1);
        assert_eq!(s(-1, 3).frac().unwrap(), s(2, 3));
        assert_eq!(s(7, 3).frac().unwrap(), s(1, 3));
    }

    #[test]
    fn overflow_is_reported() {
        let big = ExtendedSlope::integer(i64::MAX);
        assert_eq!(big.checked_add(&big), Err(RationalError::Overflow));
    }

    proptest! {
        #[test]
        fn canonical_round_trip(p in -200i64..200, q in 1i64..200) {
            let x = s(p, q);
            let c = slope_to_canonical_cf(x).unwrap();
            prop_assert_eq!(cf_eval(&c).unwrap(), x);
            prop_assert!(c.is_canonical());
            prop_assert!(!(c.entries().iter().any(|&a| a > 0) && c.entries().iter().any(|&a| a < 0)));
            if x.abs().cmp_value(&ExtendedSlope::integer(1)) == Ordering::Less && !x.is_zero() {
                prop_assert_eq!(c.entries()[0], 0);
            }
        }

        #[test]
        fn recip_is_involution(p in -50i64..50, q in 0i64..50) {
            prop_assume!(p != 0 || q != 0);
            let x = s(p, q);
            prop_assert_eq!(x.recip().recip(), x);
        }
    }
}
