//! Arbitrary-precision rational scalars for formula evaluation.
//!
//! Formula-side arithmetic (the closed-form ML-degree polynomials and the
//! intersection-number assembly) runs over exact rationals; integer results
//! are asserted, never rounded. Storage is `num`'s `BigRational`, which keeps
//! the reduced-form/positive-denominator invariant for us.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use thiserror::Error;

use crate::field::{FieldElement, FieldError, PrimeModulus};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalError {
    #[error("zero denominator")]
    ZeroDenominator,
}

/// Exact rational number: reduced form, positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den` in reduced form with positive denominator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, RationalError> {
        let den = den.into();
        if den.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as an integer; `None` if the denominator is not 1.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.to_integer())
    }

    /// Reduction map into `F_p`: `num * den^-1 mod p`.
    ///
    /// Fails when the denominator vanishes mod p.
    pub fn to_field(&self, p: PrimeModulus) -> Result<FieldElement, FieldError> {
        let m = BigInt::from(p.get());
        let num = self.0.numer().mod_floor(&m);
        let den = self.0.denom().mod_floor(&m);
        let num = p.elem(num.try_into().expect("reduced residue fits u64"));
        let den = p.elem(den.try_into().expect("reduced residue fits u64"));
        Ok(num * den.inv()?)
    }
}

/// Spec-level constructor: reduced form, positive denominator, error on `den = 0`.
pub fn rational_normalize(num: i64, den: i64) -> Result<Rational, RationalError> {
    Rational::new(num, den)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl std::ops::$trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl std::ops::Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl std::ops::Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Rational {
    /// Exact division; error on zero divisor.
    pub fn div(&self, rhs: &Rational) -> Result<Rational, RationalError> {
        if rhs.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use crate::rng::SplitMix64;

    #[test]
    fn normalize_examples() {
        let r = rational_normalize(2, 4).unwrap();
        assert_eq!((r.numerator(), r.denominator()), (&BigInt::from(1), &BigInt::from(2)));
        let r = rational_normalize(-3, -9).unwrap();
        assert_eq!((r.numerator(), r.denominator()), (&BigInt::from(1), &BigInt::from(3)));
        let r = rational_normalize(0, 5).unwrap();
        assert_eq!((r.numerator(), r.denominator()), (&BigInt::from(0), &BigInt::from(1)));
        assert_eq!(rational_normalize(1, 0), Err(RationalError::ZeroDenominator));
    }

    #[test]
    fn sign_always_in_numerator() {
        let r = rational_normalize(3, -7).unwrap();
        assert_eq!(r, rational_normalize(-3, 7).unwrap());
        assert!(r.denominator() > &BigInt::from(0));
    }

    // Reduction map commutes with arithmetic whenever denominators stay invertible.
    #[test]
    fn reduction_map_is_homomorphism() {
        let p = PrimeModulus::new(DEFAULT_PRIME).unwrap();
        let mut rng = SplitMix64::new(0xABCD);
        for _ in 0..2_000 {
            let a = rational_normalize(rng.next_below(2_000) as i64 - 1_000, 1 + rng.next_below(50) as i64).unwrap();
            let b = rational_normalize(rng.next_below(2_000) as i64 - 1_000, 1 + rng.next_below(50) as i64).unwrap();
            let sum = &a + &b;
            let prod = &a * &b;
            assert_eq!(sum.to_field(p).unwrap(), a.to_field(p).unwrap() + b.to_field(p).unwrap());
            assert_eq!(prod.to_field(p).unwrap(), a.to_field(p).unwrap() * b.to_field(p).unwrap());
        }
    }

    #[test]
    fn reduction_fails_on_denominator_divisible_by_p() {
        let p7 = PrimeModulus::new(7).unwrap();
        let r = rational_normalize(3, 14).unwrap();
        assert_eq!(r.to_field(p7), Err(FieldError::DivisionByZero));
    }
}
