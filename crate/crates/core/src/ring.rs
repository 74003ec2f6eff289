//! Coefficient rings for q-series.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Debug;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "p/q" or "p".
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

/// Canonical "a/b" rendering used in JSON.
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Exact commutative ring with identity, as needed by [`crate::qseries::QSeries`].
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    const MODE: &'static str;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn from_rat(r: Rat) -> Self;
    /// Inverse if `self` is a unit of the ring.
    fn try_inv(&self) -> Option<Self>;

    fn plus_assign(&mut self, o: &Self) {
        *self = self.plus(o);
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
    /// Integer power, negative exponents through [`Ring::try_inv`].
    fn ipow(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else {
            Some(self.try_inv()?.pow((-e) as u32))
        }
    }
}

impl Ring for Rat {
    const MODE: &'static str = "rational";
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_rat(r: Rat) -> Self {
        r
    }
    fn try_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn plus_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
}
