//! Numeric carriers for entropies, capacities and LP values.
//!
//! Floating-point differences are classified into four bands. With the default
//! [`Tolerances`] a difference `d` is
//!
//! | band        | condition                 |
//! |-------------|---------------------------|
//! | `Tie`       | `|d| <= tie`              |
//! | `Ambiguous` | `tie < |d| <= ambiguity`  |
//! | `Negative`  | `d < -ambiguity`          |
//! | `Positive`  | `d > ambiguity`           |
//!
//! Exact scalars never land in `Ambiguous`: they compare by sign.

use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational numbers with arbitrary-precision numerator and denominator,
/// always in reduced form with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Differences at most this large are ties.
    pub tie: f64,
    /// Differences in `(tie, ambiguity]` cannot be decided.
    pub ambiguity: f64,
}

impl Tolerances {
    pub const DEFAULT_TIE: f64 = 1e-9;
    /// Ratio between the ambiguity ceiling and the tie tolerance. Must stay at
    /// least the largest supported `m` so that the subset-comparison shortcut and
    /// the exhaustive comparison classify the same way.
    pub const AMBIGUITY_FACTOR: f64 = 100.0;

    pub fn new(tie: f64) -> Self {
        debug_assert!(tie > 0.0);
        Tolerances { tie, ambiguity: tie * Self::AMBIGUITY_FACTOR }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::new(Self::DEFAULT_TIE)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Band {
    Negative,
    Ambiguous,
    Tie,
    Positive,
}

impl Band {
    /// `d <= 0` up to tolerance, with no ambiguity.
    pub fn is_non_positive(self) -> bool {
        matches!(self, Band::Negative | Band::Tie)
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// True for carriers whose comparisons are exact.
    fn is_exact() -> bool;
    /// `self > eps` for floats, `self > 0` for exact scalars.
    fn exceeds(&self, eps: f64) -> bool;

    fn from_usize(v: usize) -> Self {
        Self::from_int(v as i64)
    }

    /// `self <= eps` for floats, `self <= 0` for exact scalars.
    fn at_most(&self, eps: f64) -> bool {
        !self.exceeds(eps)
    }

    /// `|self| <= eps` (exact: `self == 0`).
    fn near_zero(&self, eps: f64) -> bool {
        self.at_most(eps) && (-self.clone()).at_most(eps)
    }

    fn band(&self, tol: &Tolerances) -> Band {
        if self.near_zero(tol.tie) {
            Band::Tie
        } else if self.exceeds(tol.ambiguity) {
            Band::Positive
        } else if (-self.clone()).exceeds(tol.ambiguity) {
            Band::Negative
        } else {
            Band::Ambiguous
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_exact() -> bool {
        false
    }
    fn exceeds(&self, eps: f64) -> bool {
        *self > eps
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_exact() -> bool {
        true
    }
    fn exceeds(&self, _eps: f64) -> bool {
        self.is_positive()
    }
}
