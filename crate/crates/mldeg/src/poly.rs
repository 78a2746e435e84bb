//! Sparse multivariate polynomials over a prime field.
//!
//! Terms are kept as a sequence sorted strictly descending in grevlex with no
//! zero coefficients and no duplicate monomials; every operation maintains
//! that canonical form, so runs are bit-reproducible. The text grammar
//! (`3*x1^2*x2 + 7`) is documented on [`Polynomial::parse`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::{FieldElement, PrimeModulus};
use crate::monomial::{grevlex_cmp_unchecked, Monomial, MonomialError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial ring mismatch")]
    RingMismatch,
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error("operation requires a nonzero polynomial")]
    ZeroInput,
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

/// Ambient ring data: variable count and coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolyRing {
    nvars: usize,
    modulus: PrimeModulus,
}

impl PolyRing {
    pub fn new(nvars: usize, modulus: PrimeModulus) -> Self {
        PolyRing { nvars, modulus }
    }

    pub fn nvars(self) -> usize {
        self.nvars
    }

    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn zero(self) -> Polynomial {
        Polynomial {
            ring: self,
            terms: Vec::new(),
        }
    }

    pub fn one(self) -> Polynomial {
        self.constant(self.modulus.one())
    }

    pub fn constant(self, c: FieldElement) -> Polynomial {
        assert_eq!(c.modulus(), self.modulus, "field modulus mismatch");
        if c.is_zero() {
            return self.zero();
        }
        Polynomial {
            ring: self,
            terms: vec![(Monomial::one(self.nvars), c)],
        }
    }

    pub fn constant_i64(self, c: i64) -> Polynomial {
        self.constant(self.modulus.elem_i64(c))
    }

    pub fn variable(self, index: usize) -> Polynomial {
        Polynomial {
            ring: self,
            terms: vec![(Monomial::variable(self.nvars, index), self.modulus.one())],
        }
    }

    /// Builds a polynomial from arbitrary (monomial, coefficient) pairs,
    /// canonicalizing: sorted descending, duplicates merged, zeros dropped.
    pub fn from_terms(self, terms: impl IntoIterator<Item = (Monomial, FieldElement)>) -> Polynomial {
        let mut map: BTreeMap<Monomial, FieldElement> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), self.nvars, "variable count mismatch");
            assert_eq!(c.modulus(), self.modulus, "field modulus mismatch");
            match map.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = *e.get() + c;
                    if s.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
            }
        }
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.reverse();
        Polynomial { ring: self, terms }
    }
}

/// A sparse multivariate polynomial in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: PolyRing,
    terms: Vec<(Monomial, FieldElement)>,
}

impl Polynomial {
    pub fn ring(&self) -> PolyRing {
        self.ring
    }

    pub fn terms(&self) -> &[(Monomial, FieldElement)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || self.terms[0].0.is_one()
    }

    /// Leading monomial and coefficient under grevlex.
    pub fn leading(&self) -> Option<(&Monomial, FieldElement)> {
        self.terms.first().map(|(m, c)| (m, *c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn total_degree(&self) -> Option<u32> {
        // Canonical order is degree-first, so the lead carries the degree.
        self.terms.first().map(|(m, _)| m.total_degree())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -*c)).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.ring, other.ring, "polynomial ring mismatch");
        self.merge_scaled(&other.terms, None, self.ring.modulus.one())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.ring, other.ring, "polynomial ring mismatch");
        self.merge_scaled(&other.terms, None, -self.ring.modulus.one())
    }

    /// `self + c * x^q * other` by a sorted merge; the workhorse of division.
    fn merge_scaled(
        &self,
        other: &[(Monomial, FieldElement)],
        q: Option<&Monomial>,
        c: FieldElement,
    ) -> Polynomial {
        if c.is_zero() || other.is_empty() {
            return self.clone();
        }
        let scale = |(m, co): &(Monomial, FieldElement)| {
            let m = match q {
                Some(q) => m.mul(q),
                None => m.clone(),
            };
            (m, *co * c)
        };
        let mut out = Vec::with_capacity(self.terms.len() + other.len());
        let mut i = 0;
        let mut j = 0;
        let mut rhs = scale(&other[0]);
        loop {
            if i == self.terms.len() {
                out.push(rhs);
                out.extend(other[j + 1..].iter().map(scale));
                break;
            }
            match grevlex_cmp_unchecked(&self.terms[i].0, &rhs.0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(rhs);
                    j += 1;
                    if j == other.len() {
                        out.extend_from_slice(&self.terms[i..]);
                        break;
                    }
                    rhs = scale(&other[j]);
                }
                Ordering::Equal => {
                    let coeff = self.terms[i].1 + rhs.1;
                    if !coeff.is_zero() {
                        out.push((rhs.0, coeff));
                    }
                    i += 1;
                    j += 1;
                    if j == other.len() {
                        out.extend_from_slice(&self.terms[i..]);
                        break;
                    }
                    rhs = scale(&other[j]);
                }
            }
        }
        Polynomial {
            ring: self.ring,
            terms: out,
        }
    }

    /// Exact product in canonical form; errors on ring mismatch.
    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::RingMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(self.ring.zero());
        }
        let mut map: BTreeMap<Monomial, FieldElement> = BTreeMap::new();
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms)
        } else {
            (&other.terms, &self.terms)
        };
        for (ma, ca) in small {
            for (mb, cb) in large {
                let m = ma.mul(mb);
                let c = *ca * *cb;
                match map.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = *e.get() + c;
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                }
            }
        }
        let mut terms: Vec<_> = map.into_iter().collect();
        terms.reverse();
        Ok(Polynomial {
            ring: self.ring,
            terms,
        })
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.try_mul(other).expect("polynomial ring mismatch")
    }

    /// Multiplies by the single term `c * x^q`.
    pub fn mul_term(&self, q: &Monomial, c: FieldElement) -> Polynomial {
        if c.is_zero() {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(m, co)| (m.mul(q), *co * c))
                .collect(),
        }
    }

    pub fn scale(&self, c: FieldElement) -> Polynomial {
        self.mul_term(&Monomial::one(self.ring.nvars), c)
    }

    /// Scales so the leading coefficient is 1. Zero stays zero.
    pub fn make_monic(&self) -> Polynomial {
        match self.leading() {
            Some((_, lc)) if !lc.is_one() => self.scale(lc.inv().expect("nonzero lead")),
            _ => self.clone(),
        }
    }
}

/// Remainder of `f` under multivariate division by `basis`.
///
/// No term of the result is divisible by any leading monomial of the basis,
/// and `f - result` lies in the ideal generated by the basis. Ties are broken
/// by always reducing with the first basis element (in input order) whose
/// leading monomial divides, so runs are reproducible.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let refs: Vec<&Polynomial> = basis.iter().collect();
    normal_form_limited(f, &refs, u64::MAX).expect("unlimited")
}

/// Division with a cap on live terms; `Err` carries the term count that
/// tripped the cap. Used by the Groebner engine to meter its memory budget.
pub(crate) fn normal_form_limited(
    f: &Polynomial,
    basis: &[&Polynomial],
    max_live_terms: u64,
) -> Result<Polynomial, u64> {
    let ring = f.ring;
    let mut work = f.terms.clone();
    let mut start = 0;
    let mut remainder: Vec<(Monomial, FieldElement)> = Vec::new();
    'outer: while start < work.len() {
        let held = (work.len() - start + remainder.len()) as u64;
        if held > max_live_terms {
            return Err(held);
        }
        let (lm, lc) = (&work[start].0, work[start].1);
        for g in basis {
            debug_assert_eq!(g.ring, ring, "polynomial ring mismatch");
            let Some((glm, glc)) = g.leading() else { continue };
            if let Some(q) = lm.div(glm) {
                let c = -(lc * glc.inv().expect("nonzero lead"));
                let head = Polynomial {
                    ring,
                    terms: work[start..].to_vec(),
                };
                work = head.merge_scaled(&g.terms, Some(&q), c).terms;
                start = 0;
                continue 'outer;
            }
        }
        remainder.push(work[start].clone());
        start += 1;
    }
    Ok(Polynomial {
        ring,
        terms: remainder,
    })
}

/// The S-polynomial `(lcm/lt(f))*f - (lcm/lt(g))*g`, with coefficients
/// normalized so the leading terms cancel exactly.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, PolyError> {
    if f.ring != g.ring {
        return Err(PolyError::RingMismatch);
    }
    let (Some((fm, fc)), Some((gm, gc))) = (f.leading(), g.leading()) else {
        return Err(PolyError::ZeroInput);
    };
    let lcm = fm.lcm(gm);
    let qf = lcm.div(fm).expect("lcm divisible by lead");
    let qg = lcm.div(gm).expect("lcm divisible by lead");
    let lhs = f.mul_term(&qf, fc.inv().expect("nonzero lead"));
    Ok(lhs.merge_scaled(&g.terms, Some(&qg), -(gc.inv().expect("nonzero lead"))))
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// Default variable names `x1, ..., xk`.
pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("x{i}")).collect()
}

impl Polynomial {
    /// Renders in the text grammar with the given variable names, e.g.
    /// `3*x1^2*x2 + 7`. Coefficients print as canonical residues in `[0, p)`.
    pub fn to_text(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.ring.nvars, "one name per variable");
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !c.is_one() || m.is_one() {
                factors.push(c.value().to_string());
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    _ => factors.push(format!("{}^{}", names[v], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses the text grammar:
    ///
    /// ```text
    /// poly   := ['-'] term (('+'|'-') term)*
    /// term   := integer ('*' factor)* | factor ('*' factor)*
    /// factor := name ('^' integer)?
    /// ```
    ///
    /// Integers may have arbitrarily many digits and are reduced mod p;
    /// whitespace is free between tokens.
    pub fn parse(ring: PolyRing, names: &[String], input: &str) -> Result<Polynomial, PolyError> {
        Parser {
            ring,
            names,
            bytes: input.as_bytes(),
            pos: 0,
        }
        .parse()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(&default_names(self.ring.nvars)))
    }
}

struct Parser<'a> {
    ring: PolyRing,
    names: &'a [String],
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> PolyError {
        PolyError::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Polynomial, PolyError> {
        let mut terms: Vec<(Monomial, FieldElement)> = Vec::new();
        self.skip_ws();
        let mut negate = false;
        if self.peek() == Some(b'-') {
            negate = true;
            self.pos += 1;
        }
        loop {
            let (m, c) = self.parse_term()?;
            terms.push((m, if negate { -c } else { c }));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    negate = false;
                    self.pos += 1;
                }
                Some(b'-') => {
                    negate = true;
                    self.pos += 1;
                }
                Some(c) => return Err(self.error(format!("expected '+' or '-', found {:?}", c as char))),
            }
        }
        Ok(self.ring.from_terms(terms))
    }

    fn parse_term(&mut self) -> Result<(Monomial, FieldElement), PolyError> {
        self.skip_ws();
        let mut coeff = self.ring.modulus().one();
        let mut exps = vec![0u16; self.ring.nvars()];
        let mut saw_factor = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            coeff = self.parse_integer()?;
            saw_factor = true;
        } else if matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            let (var, e) = self.parse_factor()?;
            exps[var] = exps[var].checked_add(e).ok_or_else(|| self.error("exponent overflow"))?;
            saw_factor = true;
        }
        if !saw_factor {
            return Err(self.error("expected a coefficient or variable"));
        }
        loop {
            self.skip_ws();
            if self.peek() != Some(b'*') {
                break;
            }
            self.pos += 1;
            self.skip_ws();
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                let c = self.parse_integer()?;
                coeff = coeff * c;
            } else {
                let (var, e) = self.parse_factor()?;
                exps[var] = exps[var].checked_add(e).ok_or_else(|| self.error("exponent overflow"))?;
            }
        }
        Ok((Monomial::new(exps), coeff))
    }

    fn parse_factor(&mut self) -> Result<(usize, u16), PolyError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a variable name"));
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        let var = self
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| self.error(format!("unknown variable '{name}'")))?;
        self.skip_ws();
        let mut exp = 1u16;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected an exponent"));
            }
            let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
            exp = digits
                .parse::<u16>()
                .map_err(|_| self.error("exponent out of range"))?;
        }
        Ok((var, exp))
    }

    fn parse_integer(&mut self) -> Result<FieldElement, PolyError> {
        let p = self.ring.modulus();
        let mut acc = p.zero();
        let ten = p.elem(10);
        let mut any = false;
        while let Some(c) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            // Running reduction mod p handles arbitrarily long literals exactly.
            acc = acc * ten + p.elem((c - b'0') as u64);
            self.pos += 1;
            any = true;
        }
        if !any {
            return Err(self.error("expected an integer"));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use crate::rng::SplitMix64;
    use proptest::prelude::*;

    fn ring2() -> PolyRing {
        PolyRing::new(2, PrimeModulus::new(DEFAULT_PRIME).unwrap())
    }

    fn parse2(s: &str) -> Polynomial {
        let names = vec!["x".into(), "y".into()];
        Polynomial::parse(ring2(), &names, s).unwrap()
    }

    #[test]
    fn product_of_conjugates() {
        let f = parse2("x + y").mul(&parse2("x - y"));
        assert_eq!(f, parse2("x^2 - y^2"));
    }

    #[test]
    fn mul_identities() {
        let f = parse2("3*x^2*y + 7");
        assert_eq!(f.mul(&ring2().one()), f);
        assert!(f.mul(&ring2().zero()).is_zero());
    }

    #[test]
    fn mul_ring_mismatch() {
        let other = PolyRing::new(3, PrimeModulus::new(DEFAULT_PRIME).unwrap());
        assert_eq!(
            parse2("x").try_mul(&other.zero()),
            Err(PolyError::RingMismatch)
        );
    }

    #[test]
    fn normal_form_spec_cases() {
        let b1 = vec![parse2("x^2 - y")];
        assert_eq!(normal_form(&parse2("x^2"), &b1), parse2("y"));
        assert_eq!(normal_form(&parse2("y"), &b1), parse2("y"));
        // x^4 -> y^2 -> x by two reductions.
        let b2 = vec![parse2("x^2 - y"), parse2("y^2 - x")];
        assert_eq!(normal_form(&parse2("x^4"), &b2), parse2("x"));
    }

    #[test]
    fn s_polynomial_spec_cases() {
        let f = parse2("x^2 - y");
        let g = parse2("y^2 - x");
        assert_eq!(s_polynomial(&f, &g).unwrap(), parse2("x^3 - y^3"));
        assert!(s_polynomial(&parse2("x"), &parse2("y")).unwrap().is_zero());
        assert!(s_polynomial(&f, &f).unwrap().is_zero());
        assert_eq!(
            s_polynomial(&f, &ring2().zero()),
            Err(PolyError::ZeroInput)
        );
    }

    #[test]
    fn text_round_trip() {
        for s in ["3*x^2*y + 7", "x^2 + 2147483646*y", "x*y", "42", "0", "y^11 + x"] {
            let f = parse2(s);
            assert_eq!(parse2(&f.to_text(&["x".into(), "y".into()])), f);
        }
        // Long literals reduce mod p.
        assert_eq!(parse2("4294967294"), parse2("2147483647 + 2147483647"));
        assert_eq!(parse2("- x + x"), ring2().zero());
    }

    #[test]
    fn parse_errors() {
        let names = vec!["x".into(), "y".into()];
        assert!(Polynomial::parse(ring2(), &names, "x + z").is_err());
        assert!(Polynomial::parse(ring2(), &names, "x + ").is_err());
        assert!(Polynomial::parse(ring2(), &names, "x ^").is_err());
        assert!(Polynomial::parse(ring2(), &names, "").is_err());
    }

    fn random_poly(rng: &mut SplitMix64, ring: PolyRing, max_terms: u64, max_deg: u64) -> Polynomial {
        let n_terms = rng.next_below(max_terms + 1);
        let terms: Vec<_> = (0..n_terms)
            .map(|_| {
                let exps: Vec<u16> = (0..ring.nvars())
                    .map(|_| rng.next_below(max_deg + 1) as u16)
                    .collect();
                (Monomial::new(exps), rng.next_field(ring.modulus()))
            })
            .collect();
        ring.from_terms(terms)
    }

    #[test]
    fn division_leaves_reducible_nothing() {
        let ring = ring2();
        let mut rng = SplitMix64::new(0xD17);
        for _ in 0..500 {
            let f = random_poly(&mut rng, ring, 8, 5);
            let basis: Vec<_> = (0..2)
                .map(|_| random_poly(&mut rng, ring, 4, 3))
                .filter(|g| !g.is_zero())
                .collect();
            let r = normal_form(&f, &basis);
            for (m, _) in r.terms() {
                for g in &basis {
                    assert!(!g.leading_monomial().unwrap().divides(m));
                }
            }
            // f - r re-divides to zero: the quotient part lies in the ideal.
            let diff = f.sub(&r);
            assert!(normal_form(&diff, &basis).is_zero());
        }
    }

    proptest! {
        #[test]
        fn canonical_form_add_sub(seed in any::<u64>()) {
            let ring = ring2();
            let mut rng = SplitMix64::new(seed);
            let f = random_poly(&mut rng, ring, 10, 6);
            let g = random_poly(&mut rng, ring, 10, 6);
            let back = f.add(&g).sub(&g);
            prop_assert_eq!(&back, &f);
            // Canonical invariants: strictly descending, no zeros.
            for w in back.terms().windows(2) {
                prop_assert!(w[0].0 > w[1].0);
            }
            prop_assert!(back.terms().iter().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn mul_distributes(seed in any::<u64>()) {
            let ring = ring2();
            let mut rng = SplitMix64::new(seed);
            let f = random_poly(&mut rng, ring, 6, 4);
            let g = random_poly(&mut rng, ring, 6, 4);
            let h = random_poly(&mut rng, ring, 6, 4);
            prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        }
    }
}
