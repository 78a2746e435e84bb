//! Word-sized prime field arithmetic.
//!
//! All solver arithmetic happens in `F_p` for a prime `2 < p < 2^31`, so every
//! product fits in a `u64` intermediate and no value is ever rounded.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default solving prime, the Mersenne prime `2^31 - 1`.
pub const DEFAULT_PRIME: u32 = 2_147_483_647;

/// Primes used by the multi-prime verification harness (all just below `2^31`).
pub const VERIFICATION_PRIMES: [u32; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} outside supported range (2, 2^31)")]
    OutOfRange(u32),
    #[error("division by zero in F_p")]
    DivisionByZero,
}

/// A validated prime modulus `2 < p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    /// Validates the range and primality (deterministic Miller-Rabin).
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if p <= 2 || p >= 1 << 31 {
            return Err(FieldError::OutOfRange(p));
        }
        if !is_prime_u32(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeModulus(p))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Embeds an unsigned integer, reducing mod p.
    pub fn elem(self, value: u64) -> FieldElement {
        FieldElement {
            value: (value % self.0 as u64) as u32,
            modulus: self,
        }
    }

    /// Embeds a signed integer, reducing into `[0, p)`.
    pub fn elem_i64(self, value: i64) -> FieldElement {
        let p = self.0 as i64;
        self.elem(value.rem_euclid(p) as u64)
    }

    pub fn zero(self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(self) -> FieldElement {
        self.elem(1)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of `F_p`, stored in canonical form `[0, p)`.
///
/// Elements are immutable `Copy` values carrying their modulus; mixing moduli
/// in an arithmetic operation panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    modulus: PrimeModulus,
}

impl FieldElement {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_one(self) -> bool {
        self.value == 1
    }

    /// Multiplicative inverse via Fermat: `a^(p-2)`.
    pub fn inv(self) -> Result<FieldElement, FieldError> {
        if self.value == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(self.modulus.0 as u64 - 2))
    }

    pub fn pow(self, mut exp: u64) -> FieldElement {
        let mut base = self;
        let mut acc = self.modulus.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            exp >>= 1;
            if exp > 0 {
                base = base * base;
            }
        }
        acc
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.modulus, rhs.modulus, "field modulus mismatch");
        let p = self.modulus.0;
        let s = self.value as u64 + rhs.value as u64;
        FieldElement {
            value: if s >= p as u64 { (s - p as u64) as u32 } else { s as u32 },
            modulus: self.modulus,
        }
    }
}

impl std::ops::Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.modulus, rhs.modulus, "field modulus mismatch");
        let p = self.modulus.0;
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + p - rhs.value
        };
        FieldElement {
            value: v,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.modulus, rhs.modulus, "field modulus mismatch");
        // p < 2^31, so the product of two canonical values fits in u64.
        let prod = self.value as u64 * rhs.value as u64;
        FieldElement {
            value: (prod % self.modulus.0 as u64) as u32,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let v = if self.value == 0 { 0 } else { self.modulus.0 - self.value };
        FieldElement {
            value: v,
            modulus: self.modulus,
        }
    }
}

/// Deterministic Miller-Rabin, exact for all `n < 2^32` with witnesses {2, 7, 61}.
pub fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u32, 3, 5, 7, 11, 13] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = (n - 1) as u64;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 7, 61] {
        let mut x = pow_mod_u64(a, d, n as u64);
        if x == 1 || x == n as u64 - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = x * x % n as u64;
            if x == n as u64 - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod_u64(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    base %= modulus;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn p() -> PrimeModulus {
        PrimeModulus::new(DEFAULT_PRIME).unwrap()
    }

    #[test]
    fn modulus_validation() {
        assert!(PrimeModulus::new(7).is_ok());
        assert_eq!(PrimeModulus::new(9), Err(FieldError::NotPrime(9)));
        assert_eq!(PrimeModulus::new(2), Err(FieldError::OutOfRange(2)));
        assert_eq!(
            PrimeModulus::new(1 << 31),
            Err(FieldError::OutOfRange(1 << 31))
        );
        for q in VERIFICATION_PRIMES {
            assert!(PrimeModulus::new(q).is_ok());
        }
    }

    #[test]
    fn inv_identity() {
        let p = p();
        assert_eq!(p.one().inv().unwrap(), p.one());
    }

    #[test]
    fn inv_two_mod_seven() {
        let p7 = PrimeModulus::new(7).unwrap();
        assert_eq!(p7.elem(2).inv().unwrap(), p7.elem(4));
    }

    #[test]
    fn inv_minus_one_is_self() {
        let p = p();
        let m1 = p.elem(DEFAULT_PRIME as u64 - 1);
        assert_eq!(m1.inv().unwrap(), m1);
    }

    #[test]
    fn inv_zero_fails() {
        assert_eq!(p().zero().inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn signed_embedding() {
        let p = p();
        assert_eq!(p.elem_i64(-1), p.elem(DEFAULT_PRIME as u64 - 1));
        assert_eq!(p.elem_i64(-(DEFAULT_PRIME as i64)), p.zero());
    }

    // Field axioms on random triples, one of the criterion-8 property suites.
    #[test]
    fn field_axioms_random() {
        let mut rng = SplitMix64::new(0xF1E1D);
        for q in VERIFICATION_PRIMES {
            let p = PrimeModulus::new(q).unwrap();
            for _ in 0..4_000 {
                let a = p.elem(rng.next_u64());
                let b = p.elem(rng.next_u64());
                let c = p.elem(rng.next_u64());
                assert_eq!((a + b) + c, a + (b + c));
                assert_eq!((a * b) * c, a * (b * c));
                assert_eq!(a * (b + c), a * b + a * c);
                assert_eq!(a + (-a), p.zero());
                assert_eq!(a - b, a + (-b));
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), p.one());
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "field modulus mismatch")]
    fn mixed_moduli_panic() {
        let a = PrimeModulus::new(7).unwrap().elem(3);
        let b = PrimeModulus::new(11).unwrap().elem(3);
        let _ = a + b;
    }
}
