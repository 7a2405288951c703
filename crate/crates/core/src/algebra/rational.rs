use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Exact rational with arbitrary-precision numerator and denominator.
pub type ExactRational = BigRational;

/// Shorthand constructor, `q(n, d)` is n/d reduced.
pub fn q(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qz() -> ExactRational {
    BigRational::zero()
}

pub fn denom_u64(x: &ExactRational) -> u64 {
    x.denom().to_u64().expect("denominator fits in u64")
}

pub fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("integer fits in i64")
}

/// Floor of a rational as an integer.
pub fn floor_i64(x: &ExactRational) -> i64 {
    to_i64(&x.numer().div_floor(x.denom()))
}

/// Always "num/den", even for integers. Used by machine-readable output.
pub fn fmt_frac(x: &ExactRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn is_integral(x: &ExactRational) -> bool {
    x.denom().is_one()
}

pub fn abs(x: &ExactRational) -> ExactRational {
    x.abs()
}

/// A value that is either finite or the symbolic `+∞` (the valuation of zero).
///
/// `PlusInfinity` compares greater than every finite value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Val<T> {
    Finite(T),
    PlusInfinity,
}

impl<T> Val<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Val::Finite(_))
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            Val::Finite(x) => Some(x),
            Val::PlusInfinity => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Val<U> {
        match self {
            Val::Finite(x) => Val::Finite(f(x)),
            Val::PlusInfinity => Val::PlusInfinity,
        }
    }
}

impl<T: Ord> PartialOrd for Val<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Ord> Ord for Val<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Val::PlusInfinity, Val::PlusInfinity) => Ordering::Equal,
            (Val::PlusInfinity, _) => Ordering::Greater,
            (_, Val::PlusInfinity) => Ordering::Less,
            (Val::Finite(a), Val::Finite(b)) => a.cmp(b),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Val<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(x) => write!(f, "{x}"),
            Val::PlusInfinity => write!(f, "+inf"),
        }
    }
}

/// Integer-or-infinity valuation on F_q(t).
pub type Valuation = Val<i64>;
