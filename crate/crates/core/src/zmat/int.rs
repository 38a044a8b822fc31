//! Arbitrary-precision integers with an inline `i64` fast path.
//!
//! Bar-complex eliminations provoke coefficient growth, so exactness
//! requires arbitrary precision; almost all intermediate values are
//! tiny, so the representation keeps them unboxed.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive};

/// Exact integer, inline for the `i64` range.
///
/// Invariant: the `Big` variant is only used for values outside the
/// `i64` range, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

use Int::{Big, Small};

impl Int {
    pub const ZERO: Int = Small(0);
    pub const ONE: Int = Small(1);

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Small(v),
            None => Big(Box::new(b)),
        }
    }

    fn to_big(&self) -> BigInt {
        match self {
            Small(v) => BigInt::from(*v),
            Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Small(1))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Small(1) | Small(-1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Small(v) => *v < 0,
            Big(b) => b.is_negative(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Small(v) => Some(*v),
            Big(_) => None,
        }
    }

    pub fn abs(&self) -> Int {
        match self {
            Small(v) => match v.checked_abs() {
                Some(a) => Small(a),
                None => Int::from_big(BigInt::from(*v).abs()),
            },
            Big(b) => Int::from_big(b.abs()),
        }
    }

    pub fn neg(&self) -> Int {
        match self {
            Small(v) => match v.checked_neg() {
                Some(n) => Small(n),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Big(b) => Int::from_big(-(**b).clone()),
        }
    }

    pub fn add(&self, other: &Int) -> Int {
        if let (Small(a), Small(b)) = (self, other) {
            if let Some(s) = a.checked_add(*b) {
                return Small(s);
            }
        }
        Int::from_big(self.to_big() + other.to_big())
    }

    pub fn sub(&self, other: &Int) -> Int {
        if let (Small(a), Small(b)) = (self, other) {
            if let Some(s) = a.checked_sub(*b) {
                return Small(s);
            }
        }
        Int::from_big(self.to_big() - other.to_big())
    }

    pub fn mul(&self, other: &Int) -> Int {
        if let (Small(a), Small(b)) = (self, other) {
            if let Some(p) = a.checked_mul(*b) {
                return Small(p);
            }
        }
        Int::from_big(self.to_big() * other.to_big())
    }

    /// Euclidean division: `self = q * d + r` with `0 <= r < |d|`.
    pub fn div_rem_euclid(&self, d: &Int) -> (Int, Int) {
        assert!(!d.is_zero(), "division by zero");
        if let (Small(a), Small(b)) = (self, d) {
            if let (Some(q), Some(r)) = (a.checked_div_euclid(*b), a.checked_rem_euclid(*b)) {
                return (Small(q), Small(r));
            }
        }
        let a = self.to_big();
        let b = d.to_big();
        let (mut q, mut r) = a.div_rem(&b);
        if r.is_negative() {
            if b.is_negative() {
                q += 1;
                r -= &b;
            } else {
                q -= 1;
                r += &b;
            }
        }
        (Int::from_big(q), Int::from_big(r))
    }

    /// Exact division; panics when the division is not exact.
    pub fn exact_div(&self, d: &Int) -> Int {
        let (q, r) = self.div_rem_euclid(d);
        debug_assert!(r.is_zero(), "non-exact division");
        q
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Int) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem_euclid(self).1.is_zero()
    }

    pub fn gcd(&self, other: &Int) -> Int {
        if let (Small(a), Small(b)) = (self, other) {
            // i64 gcd never overflows except gcd(MIN, 0) = |MIN|.
            if *a != i64::MIN && *b != i64::MIN {
                let (mut x, mut y) = (a.abs(), b.abs());
                while y != 0 {
                    let t = x % y;
                    x = y;
                    y = t;
                }
                return Small(x);
            }
        }
        Int::from_big(self.to_big().gcd(&other.to_big()))
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Int {
        Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Int {
        Small(v as i64)
    }
}

impl From<u64> for Int {
    fn from(v: u64) -> Int {
        match i64::try_from(v) {
            Ok(s) => Small(s),
            Err(_) => Int::from_big(BigInt::from(v)),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Int) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Int) -> Ordering {
        match (self, other) {
            (Small(a), Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Small(v) => write!(f, "{v}"),
            Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes() {
        let a = Int::from(i64::MAX);
        let b = a.add(&Int::ONE);
        assert!(b.to_i64().is_none());
        assert_eq!(b.sub(&Int::ONE), a);
    }

    #[test]
    fn euclid_signs() {
        for a in [-7i64, -1, 0, 1, 7] {
            for d in [-3i64, -2, 2, 3] {
                let (q, r) = Int::from(a).div_rem_euclid(&Int::from(d));
                assert!(!r.is_negative() && r < Int::from(d).abs());
                assert_eq!(q.mul(&Int::from(d)).add(&r), Int::from(a));
            }
        }
    }

    #[test]
    fn gcd_basic() {
        assert_eq!(Int::from(12).gcd(&Int::from(-18)), Int::from(6));
        assert_eq!(Int::from(0).gcd(&Int::from(5)), Int::from(5));
        assert_eq!(Int::from(i64::MIN).gcd(&Int::ZERO).to_big(), BigInt::from(i64::MAX) + 1);
    }
}
