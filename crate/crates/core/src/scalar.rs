//! Scalar abstractions.
//!
//! [`Field`] is what the linear-algebra routines need. [`ExactScalar`] adds
//! the lossless bridge to and from [`Count`] that evaluation and extraction
//! rely on; it is implemented for [`Rational`] and for fixed-width
//! `Ratio<i64>` (checked conversions, arithmetic overflow panics as usual).

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::Ratio;
use num_traits::{Num, ToPrimitive, Zero};

use crate::{Count, Rational};

pub trait Field: Clone + PartialEq + Debug + Num + Neg<Output = Self> {}

impl<T> Field for T where T: Clone + PartialEq + Debug + Num + Neg<Output = T> {}

pub trait ExactScalar: Field + Display {
    fn from_count(count: &Count) -> Option<Self>;

    /// `Some` iff the value is a non-negative integer.
    fn to_count(&self) -> Option<Count>;

    fn to_rational(&self) -> Rational;

    fn from_rational(value: &Rational) -> Option<Self>;
}

impl ExactScalar for Rational {
    fn from_count(count: &Count) -> Option<Self> {
        Some(Rational::from_integer(BigInt::from(count.clone())))
    }

    fn to_count(&self) -> Option<Count> {
        if !self.is_integer() || self.numer().sign() == Sign::Minus {
            return None;
        }
        self.numer().to_biguint()
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn from_rational(value: &Rational) -> Option<Self> {
        Some(value.clone())
    }
}

impl ExactScalar for Ratio<i64> {
    fn from_count(count: &Count) -> Option<Self> {
        count.to_i64().map(Ratio::from_integer)
    }

    fn to_count(&self) -> Option<Count> {
        if !self.is_integer() || *self.numer() < 0 {
            return None;
        }
        Some(BigUint::from(*self.numer() as u64))
    }

    fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }

    fn from_rational(value: &Rational) -> Option<Self> {
        let numer = value.numer().to_i64()?;
        let denom = value.denom().to_i64()?;
        if denom.is_zero() {
            return None;
        }
        Some(Ratio::new(numer, denom))
    }
}
