//! Monomials with graded reverse lexicographic order.
//!
//! Exponents are 16-bit slots (degrees in the generated systems stay far below
//! 2^16) stored inline for up to 24 variables, which covers every system this
//! crate builds without heap traffic.

use std::cmp::Ordering;

use smallvec::{smallvec, SmallVec};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonomialError {
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCountMismatch(usize, usize),
}

type Exponents = SmallVec<[u16; 24]>;

/// A power product `x_1^{e_1} ... x_k^{e_k}` with cached total degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Exponents,
    total_degree: u32,
}

impl Monomial {
    pub fn new(exponents: impl IntoIterator<Item = u16>) -> Self {
        let exponents: Exponents = exponents.into_iter().collect();
        let total_degree = exponents.iter().map(|&e| e as u32).sum();
        Monomial {
            exponents,
            total_degree,
        }
    }

    /// The constant monomial in `nvars` variables.
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exponents: smallvec![0; nvars],
            total_degree: 0,
        }
    }

    /// The single variable `x_index`.
    pub fn variable(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut exponents: Exponents = smallvec![0; nvars];
        exponents[index] = 1;
        Monomial {
            exponents,
            total_degree: 1,
        }
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.total_degree
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exponents
    }

    pub fn exponent(&self, var: usize) -> u16 {
        self.exponents[var]
    }

    pub fn is_one(&self) -> bool {
        self.total_degree == 0
    }

    /// True when all exponents sit on a single variable (includes the constant 1).
    pub fn is_pure_power_of(&self, var: usize) -> bool {
        self.exponents
            .iter()
            .enumerate()
            .all(|(i, &e)| i == var || e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a + b)
            .collect();
        Monomial {
            exponents,
            total_degree: self.total_degree + other.total_degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.total_degree <= other.total_degree
            && self
                .exponents
                .iter()
                .zip(&other.exponents)
                .all(|(a, b)| a <= b)
    }

    /// `self / other`, or `None` when not divisible.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a - b)
            .collect();
        Some(Monomial {
            exponents,
            total_degree: self.total_degree - other.total_degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        let exponents: Exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| *a.max(b))
            .collect();
        let total_degree = exponents.iter().map(|&e| e as u32).sum();
        Monomial {
            exponents,
            total_degree,
        }
    }

    /// True when the leading monomials share no variable, so the S-pair
    /// reduces to zero by Buchberger's first criterion.
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Graded reverse lexicographic comparison.
///
/// Higher total degree wins; on ties the monomial whose exponent difference
/// vector has a negative last nonzero entry is the larger one.
pub fn grevlex_cmp(a: &Monomial, b: &Monomial) -> Result<Ordering, MonomialError> {
    if a.nvars() != b.nvars() {
        return Err(MonomialError::VariableCountMismatch(a.nvars(), b.nvars()));
    }
    Ok(grevlex_cmp_unchecked(a, b))
}

pub(crate) fn grevlex_cmp_unchecked(a: &Monomial, b: &Monomial) -> Ordering {
    match a.total_degree.cmp(&b.total_degree) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for (x, y) in a.exponents.iter().rev().zip(b.exponents.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            // Smaller exponent in the last differing slot means larger monomial.
            ord => return ord.reverse(),
        }
    }
    Ordering::Equal
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.nvars(), other.nvars(), "variable count mismatch");
        grevlex_cmp_unchecked(self, other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn m(exps: &[u16]) -> Monomial {
        Monomial::new(exps.iter().copied())
    }

    #[test]
    fn grevlex_spec_cases() {
        // Equal degree 3; difference (1,0,-1) has negative last nonzero entry.
        assert_eq!(grevlex_cmp(&m(&[2, 1, 0]), &m(&[1, 1, 1])).unwrap(), Ordering::Greater);
        // Degree dominates.
        assert_eq!(grevlex_cmp(&m(&[0, 0, 2]), &m(&[1, 0, 0])).unwrap(), Ordering::Greater);
        let x = m(&[3, 1, 2]);
        assert_eq!(grevlex_cmp(&x, &x).unwrap(), Ordering::Equal);
    }

    #[test]
    fn grevlex_length_mismatch() {
        assert_eq!(
            grevlex_cmp(&m(&[1, 2]), &m(&[1, 2, 0])),
            Err(MonomialError::VariableCountMismatch(2, 3))
        );
    }

    #[test]
    fn grevlex_two_vars() {
        // In two variables grevlex degree ties: x^a y^b > x^c y^d iff b < d.
        assert_eq!(grevlex_cmp(&m(&[2, 1]), &m(&[1, 2])).unwrap(), Ordering::Greater);
        assert_eq!(grevlex_cmp(&m(&[3, 0]), &m(&[0, 3])).unwrap(), Ordering::Greater);
    }

    #[test]
    fn div_and_lcm() {
        let a = m(&[3, 1, 0]);
        let b = m(&[1, 1, 0]);
        assert_eq!(a.div(&b).unwrap(), m(&[2, 0, 0]));
        assert!(a.div(&m(&[0, 2, 0])).is_none());
        assert_eq!(a.lcm(&m(&[1, 2, 1])), m(&[3, 2, 1]));
        assert!(m(&[1, 0, 0]).coprime(&m(&[0, 2, 1])));
        assert!(!m(&[1, 1, 0]).coprime(&m(&[0, 1, 0])));
    }

    // Criterion-8 suite: total order laws on random monomials.
    #[test]
    fn grevlex_total_order_laws() {
        let mut rng = SplitMix64::new(0x6E3);
        let sample = |rng: &mut SplitMix64| {
            let exps: Vec<u16> = (0..5).map(|_| rng.next_below(6) as u16).collect();
            Monomial::new(exps)
        };
        for _ in 0..10_000 {
            let a = sample(&mut rng);
            let b = sample(&mut rng);
            let c = sample(&mut rng);
            // Antisymmetry.
            assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
            // Transitivity.
            if a.cmp(&b) != Ordering::Greater && b.cmp(&c) != Ordering::Greater {
                assert_ne!(a.cmp(&c), Ordering::Greater);
            }
            // Compatibility with multiplication (monomial order axiom).
            assert_eq!(a.mul(&c).cmp(&b.mul(&c)), a.cmp(&b));
            // 1 is the minimum.
            assert_ne!(Monomial::one(5).cmp(&a), Ordering::Greater);
            // Consistency with equality.
            assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
        }
    }
}
