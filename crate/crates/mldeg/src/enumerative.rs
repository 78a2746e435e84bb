//! Closed-form ML-degrees and the complete-quadrics intersection assembly.
//!
//! Everything here is exact rational arithmetic; integer results are asserted
//! and never rounded. Two independent routes to the same numbers live side by
//! side:
//!
//! * [`ml_formula`] evaluates the closed-form polynomials in `n`, and
//! * [`ml_via_intersection`] reassembles them from the intersection-number
//!   table on the space of complete quadrics, correcting for the
//!   exceptional-divisor contributions.
//!
//! [`ml_naive`] keeps the uncorrected degeneracy-locus count around on
//! purpose: it strictly overcounts, and the test suite pins the gap.

use std::fmt;

use num::bigint::BigInt;
use num::{One, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerativeError {
    #[error("no closed form for model dimension m = {0} (supported: 2, 3, 4)")]
    UnsupportedDimension(usize),
    #[error("intersection number H_1^{a} H_2^{b} not established for a + b > 3")]
    UnsupportedExponents { a: u32, b: u32 },
    #[error("matrix size must be at least 2, got {0}")]
    SizeTooSmall(u64),
}

/// ML-degree of a one-dimensional generic model.
///
/// Not one of the closed forms: with a single basis matrix the critical
/// equation is linear in the reciprocal coordinate `1/l` and has exactly one
/// root, so the degree is 1 for every n.
pub const ML_1: u64 = 1;

/// A closed-form ML-degree polynomial in `n`, coefficients ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MLFormula {
    m: usize,
    coefficients: Vec<Rational>,
}

impl MLFormula {
    /// The polynomial for model dimension `m` in {2, 3, 4}:
    ///
    /// * `ML_2 = 2n - 3`
    /// * `ML_3 = 3n^2 - 9n + 7`
    /// * `ML_4 = 11/3 n^3 - 18 n^2 + 85/3 n - 15`
    pub fn for_dimension(m: usize) -> Result<Self, EnumerativeError> {
        let q = |num: i64, den: i64| Rational::new(num, den).expect("nonzero denominator");
        let coefficients = match m {
            2 => vec![q(-3, 1), q(2, 1)],
            3 => vec![q(7, 1), q(-9, 1), q(3, 1)],
            4 => vec![q(-15, 1), q(85, 3), q(-18, 1), q(11, 3)],
            other => return Err(EnumerativeError::UnsupportedDimension(other)),
        };
        Ok(MLFormula { m, coefficients })
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    /// Coefficients in ascending powers of `n`; the degree is `m - 1`.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn eval(&self, n: u64) -> Rational {
        eval_ascending(&self.coefficients, n)
    }
}

fn eval_ascending(coefficients: &[Rational], n: u64) -> Rational {
    let x = Rational::from_integer(BigInt::from(n));
    let mut acc = Rational::zero();
    for c in coefficients.iter().rev() {
        acc = &(&acc * &x) + c;
    }
    acc
}

/// Exact ML-degree of the generic m-dimensional model, `m` in {2, 3, 4},
/// `n >= 2`. The result is provably an integer; the integrality is asserted.
pub fn ml_formula(m: usize, n: u64) -> Result<Rational, EnumerativeError> {
    if n < 2 {
        return Err(EnumerativeError::SizeTooSmall(n));
    }
    let value = MLFormula::for_dimension(m)?.eval(n);
    assert!(
        value.is_integer(),
        "ML_{m}({n}) evaluated to the non-integer {value}"
    );
    Ok(value)
}

/// [`ml_formula`] as a plain integer.
pub fn ml_formula_int(m: usize, n: u64) -> Result<BigInt, EnumerativeError> {
    Ok(ml_formula(m, n)?.to_integer().expect("asserted integer"))
}

/// `delta_n = binom(n+1, 3)`, the degree of the locus of symmetric matrices
/// of corank at least 2.
pub fn delta(n: u64) -> BigInt {
    let n = BigInt::from(n);
    (&n + 1u32) * &n * (&n - 1u32) / 6u32
}

/// The intersection number `H_1^a H_2^b H_{n-1}^(N - a - b)` on complete
/// quadrics: `(n-1)^a (n-2)^b`, with the base-locus correction `-delta_n`
/// when `a = 3`.
///
/// Values with `a + b > 3` are not established and are refused outright
/// rather than extrapolated: deeper base loci interfere beyond degree 3.
pub fn intersection_number(a: u32, b: u32, n: u64) -> Result<BigInt, EnumerativeError> {
    if a + b > 3 {
        return Err(EnumerativeError::UnsupportedExponents { a, b });
    }
    if n < 2 {
        return Err(EnumerativeError::SizeTooSmall(n));
    }
    let n = BigInt::from(n);
    let mut value = (&n - 1u32).pow(a) * (&n - 2u32).pow(b);
    if a == 3 {
        value -= delta_big(&n);
    }
    Ok(value)
}

fn delta_big(n: &BigInt) -> BigInt {
    (n + 1u32) * n * (n - 1u32) / 6u32
}

/// A Segre-class expression `sum coeff * H_1^a H_2^b` of pure degree `m - 1`
/// in the two divisor classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegreClass {
    m: usize,
    monomials: Vec<(u32, u32, BigInt)>,
}

impl SegreClass {
    /// The corrected class `s_(m-1)(H_1, H_2)`: the complete homogeneous
    /// symmetric polynomial, every `H_1^a H_2^b` with `a + b = m - 1` once.
    pub fn corrected(m: usize) -> Result<Self, EnumerativeError> {
        if !(2..=4).contains(&m) {
            return Err(EnumerativeError::UnsupportedDimension(m));
        }
        let d = (m - 1) as u32;
        let monomials = (0..=d).rev().map(|a| (a, d - a, BigInt::one())).collect();
        Ok(SegreClass { m, monomials })
    }

    /// The uncorrected class `s_(m-1)(H_1, 2H_1)`, which collapses to
    /// `(2^m - 1) * H_1^(m-1)` by the geometric sum.
    pub fn naive(m: usize) -> Result<Self, EnumerativeError> {
        if !(2..=4).contains(&m) {
            return Err(EnumerativeError::UnsupportedDimension(m));
        }
        let d = (m - 1) as u32;
        let coeff = BigInt::from((1u64 << m) - 1);
        Ok(SegreClass {
            m,
            monomials: vec![(d, 0, coeff)],
        })
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    /// The `(a, b, coefficient)` triples, all with `a + b = m - 1`.
    pub fn monomials(&self) -> &[(u32, u32, BigInt)] {
        &self.monomials
    }

    /// Integrates against `H_(n-1)^(N-m+1)` via the intersection table.
    pub fn integrate(&self, n: u64) -> Result<BigInt, EnumerativeError> {
        let mut acc = BigInt::zero();
        for (a, b, coeff) in &self.monomials {
            acc += coeff * intersection_number(*a, *b, n)?;
        }
        Ok(acc)
    }
}

/// ML-degree assembled on the space of complete quadrics: the integral of the
/// corrected Segre class, minus the exceptional-divisor contribution, which
/// vanishes except for the corank-2 term `delta_n` at `m = 4`.
pub fn ml_via_intersection(m: usize, n: u64) -> Result<BigInt, EnumerativeError> {
    let mut value = SegreClass::corrected(m)?.integrate(n)?;
    if m == 4 {
        value -= delta(n);
    }
    Ok(value)
}

/// The uncorrected count from the naive degeneracy-locus class. Kept because
/// it is instructively wrong: it strictly overcounts the ML-degree.
pub fn ml_naive(m: usize, n: u64) -> Result<BigInt, EnumerativeError> {
    SegreClass::naive(m)?.integrate(n)
}

/// Univariate polynomial with exact rational coefficients, ascending powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coefficients: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(coefficients: Vec<Rational>) -> Self {
        let mut p = RationalPoly { coefficients };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        RationalPoly {
            coefficients: Vec::new(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The variable `n`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    fn trim(&mut self) {
        while self.coefficients.last().is_some_and(Rational::is_zero) {
            self.coefficients.pop();
        }
    }

    /// Coefficients ascending; empty for the zero polynomial.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn add(&self, other: &RationalPoly) -> RationalPoly {
        let len = self.coefficients.len().max(other.coefficients.len());
        let zero = Rational::zero();
        let coefficients = (0..len)
            .map(|i| {
                let a = self.coefficients.get(i).unwrap_or(&zero);
                let b = other.coefficients.get(i).unwrap_or(&zero);
                a + b
            })
            .collect();
        RationalPoly::new(coefficients)
    }

    pub fn sub(&self, other: &RationalPoly) -> RationalPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &RationalPoly) -> RationalPoly {
        if self.coefficients.is_empty() || other.coefficients.is_empty() {
            return RationalPoly::zero();
        }
        let mut coefficients =
            vec![Rational::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                coefficients[i + j] = &coefficients[i + j] + &(a * b);
            }
        }
        RationalPoly::new(coefficients)
    }

    pub fn scale(&self, c: &Rational) -> RationalPoly {
        RationalPoly::new(self.coefficients.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> RationalPoly {
        let mut acc = RationalPoly::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, n: u64) -> Rational {
        eval_ascending(&self.coefficients, n)
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*n")?,
                _ => write!(f, "({c})*n^{i}")?,
            }
        }
        Ok(())
    }
}

/// Symbolic sum `sum_(a+b=m-1) (n-1)^a (n-2)^b` as an exact polynomial in n.
pub fn power_sum_poly(m: usize) -> RationalPoly {
    let n = RationalPoly::x();
    let u = n.sub(&RationalPoly::constant(Rational::one()));
    let v = n.sub(&RationalPoly::constant(Rational::from(2)));
    let d = (m - 1) as u32;
    let mut acc = RationalPoly::zero();
    for a in 0..=d {
        acc = acc.add(&u.pow(a).mul(&v.pow(d - a)));
    }
    acc
}

/// `binom(n+1, 3)` as an exact polynomial in n: `(n^3 - n)/6`.
pub fn delta_poly() -> RationalPoly {
    let n = RationalPoly::x();
    let third = n
        .pow(3)
        .sub(&n)
        .scale(&Rational::new(1, 6).expect("nonzero"));
    third
}

/// Symbolic expansion of the final ML_4 assembly
/// `(n-2)^3 + (n-1)(n-2)^2 + (n-1)^2(n-2) + (n-1)^3 - 2*binom(n+1,3)`;
/// must match the closed-form cubic coefficient by coefficient.
pub fn expand_ml4_assembly() -> RationalPoly {
    power_sum_poly(4).sub(&delta_poly().scale(&Rational::from(2)))
}
