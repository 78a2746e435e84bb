//! Buchberger's algorithm and exact solution counting.
//!
//! The solver computes a reduced grevlex Groebner basis with the
//! Gebauer-Moeller pair update (coprime-lead and chain criteria) and the
//! normal selection strategy: pairs are processed in ascending grevlex order
//! of their lcm, so lowest degree first. Solution counts come from the
//! dimension of the quotient ring, enumerated over the leading-term
//! staircase.
//!
//! Everything here is deterministic: identical input sequences produce
//! identical bases, independent of thread count.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::monomial::Monomial;
use crate::poly::{normal_form, normal_form_limited, s_polynomial, PolyRing, Polynomial};

/// Resource limits for a Groebner run. Exceeding any limit aborts with a
/// [`GroebnerError::BudgetExhausted`] carrying diagnostics, never a silently
/// truncated basis.
#[derive(Debug, Clone)]
pub struct Budget {
    /// Maximum number of S-pair reductions.
    pub max_pair_reductions: u64,
    /// Maximum number of live polynomial terms (basis plus the current
    /// reduction intermediate). The default corresponds to roughly 8 GiB at
    /// 64 bytes per term.
    pub max_terms: u64,
    /// Optional hard wall-clock limit.
    pub wall_clock: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pair_reductions: 1_000_000,
            max_terms: 134_217_728,
            wall_clock: None,
        }
    }
}

impl Budget {
    pub fn with_wall_clock(mut self, limit: Duration) -> Self {
        self.wall_clock = Some(limit);
        self
    }

    pub fn with_max_pairs(mut self, limit: u64) -> Self {
        self.max_pair_reductions = limit;
        self
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("empty generator list")]
    EmptyGeneratorList,
    #[error("generators come from different rings")]
    RingMismatch,
    #[error(
        "budget exhausted ({reason}) after {pairs_reduced} pair reductions, \
         basis size {basis_size}, {live_terms} live terms"
    )]
    BudgetExhausted {
        reason: BudgetKind,
        pairs_reduced: u64,
        basis_size: usize,
        live_terms: u64,
    },
    #[error("ideal is not zero-dimensional")]
    PositiveDimensional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetKind {
    PairReductions,
    Terms,
    WallClock,
}

impl std::fmt::Display for BudgetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BudgetKind::PairReductions => write!(f, "pair-reduction limit"),
            BudgetKind::Terms => write!(f, "term limit"),
            BudgetKind::WallClock => write!(f, "wall-clock limit"),
        }
    }
}

/// A reduced Groebner basis: monic generators with pairwise indivisible
/// leading monomials, no term of any generator divisible by another's lead.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    generators: Vec<Polynomial>,
    staircase: Vec<Monomial>,
    nvars: usize,
    pairs_reduced: u64,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// Leading monomials of the generators, ascending in grevlex.
    pub fn staircase(&self) -> &[Monomial] {
        &self.staircase
    }

    /// Number of S-pair reductions the computation performed.
    pub fn pairs_reduced(&self) -> u64 {
        self.pairs_reduced
    }

    /// True for the unit ideal (basis `{1}`), whose variety is empty.
    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1
            && !self.generators[0].is_zero()
            && self.generators[0].is_constant()
    }

    /// Ideal membership via reduction to zero.
    pub fn contains(&self, f: &Polynomial) -> bool {
        normal_form(f, &self.generators).is_zero()
    }

    /// Standard criterion: the variety is finite iff every variable has a
    /// pure power among the leading monomials. The unit ideal passes (empty
    /// variety).
    pub fn is_zero_dimensional(&self) -> bool {
        (0..self.nvars).all(|v| {
            self.staircase
                .iter()
                .any(|m| m.is_pure_power_of(v) && (m.exponent(v) > 0 || m.is_one()))
        })
    }

    /// Dimension of the quotient ring: the number of monomials divisible by
    /// no leading monomial, i.e. the number of solutions counted with
    /// multiplicity.
    pub fn quotient_dimension(&self) -> Result<u64, GroebnerError> {
        if !self.is_zero_dimensional() {
            return Err(GroebnerError::PositiveDimensional);
        }
        let mut exps = vec![0u16; self.nvars];
        let mut count = 0u64;
        if self.nvars == 0 {
            return Ok(if self.is_unit() { 0 } else { 1 });
        }
        self.count_standard(&mut exps, 0, &mut count);
        Ok(count)
    }

    fn count_standard(&self, exps: &mut [u16], var: usize, count: &mut u64) {
        loop {
            // Divisibility is monotone in each exponent: once a staircase
            // generator divides at this level it keeps dividing for every
            // larger exponent, so the loop can stop.
            let divisible = self.staircase.iter().any(|m| {
                m.exponents()
                    .iter()
                    .enumerate()
                    .all(|(v, &e)| e <= if v <= var { exps[v] } else { 0 })
            });
            if divisible {
                exps[var] = 0;
                return;
            }
            if var + 1 < self.nvars {
                self.count_standard(exps, var + 1, count);
            } else {
                *count += 1;
            }
            exps[var] += 1;
        }
    }
}

/// Solver outcome for one polynomial system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionCount {
    /// Zero-dimensional proper ideal: number of solutions with multiplicity.
    Count(u64),
    /// Unit ideal, no solutions.
    Empty,
    /// The solution set has positive dimension.
    PositiveDimensional,
}

/// Diagnostics of one [`count_solutions`] run.
#[derive(Debug, Clone)]
pub struct CountReport {
    pub outcome: SolutionCount,
    pub gb_size: usize,
    pub pairs_reduced: u64,
    pub elapsed: Duration,
}

/// Runs Buchberger and classifies the ideal: unit ideal is `Empty`,
/// infinitely many solutions is `PositiveDimensional`, otherwise the count is
/// the quotient dimension.
pub fn count_solutions(gens: &[Polynomial], budget: &Budget) -> Result<CountReport, GroebnerError> {
    let start = Instant::now();
    let gb = buchberger(gens, budget)?;
    let outcome = if gb.is_unit() {
        SolutionCount::Empty
    } else if !gb.is_zero_dimensional() {
        SolutionCount::PositiveDimensional
    } else {
        SolutionCount::Count(gb.quotient_dimension()?)
    };
    Ok(CountReport {
        outcome,
        gb_size: gb.generators.len(),
        pairs_reduced: gb.pairs_reduced,
        elapsed: start.elapsed(),
    })
}

/// Computes the reduced Groebner basis of the ideal generated by `gens`
/// under grevlex. Deterministic for a fixed input sequence.
pub fn buchberger(gens: &[Polynomial], budget: &Budget) -> Result<GroebnerBasis, GroebnerError> {
    let ring = gens.first().ok_or(GroebnerError::EmptyGeneratorList)?.ring();
    if gens.iter().any(|g| g.ring() != ring) {
        return Err(GroebnerError::RingMismatch);
    }
    let mut state = State {
        basis: Vec::new(),
        alive: Vec::new(),
        pairs: BTreeSet::new(),
        pairs_reduced: 0,
        basis_terms: 0,
        budget,
        start: Instant::now(),
    };

    for g in gens {
        if g.is_zero() {
            continue;
        }
        match state.reduce(g)? {
            Reduced::Unit => return Ok(state.unit_basis(ring)),
            Reduced::Zero => {}
            Reduced::Poly(r) => state.add(r),
        }
    }

    while let Some((_, i, j)) = state.pairs.pop_first() {
        state.charge_pair()?;
        let s = s_polynomial(&state.basis[i], &state.basis[j]).expect("basis members are nonzero");
        match state.reduce(&s)? {
            Reduced::Unit => return Ok(state.unit_basis(ring)),
            Reduced::Zero => {}
            Reduced::Poly(r) => state.add(r),
        }
    }

    Ok(state.finalize(ring.nvars()))
}

enum Reduced {
    Zero,
    Unit,
    Poly(Polynomial),
}

struct State<'a> {
    basis: Vec<Polynomial>,
    alive: Vec<bool>,
    /// Pending S-pairs keyed by (lcm, i, j); BTreeSet order = normal strategy.
    pairs: BTreeSet<(Monomial, usize, usize)>,
    pairs_reduced: u64,
    basis_terms: u64,
    budget: &'a Budget,
    start: Instant,
}

impl State<'_> {
    fn charge_pair(&mut self) -> Result<(), GroebnerError> {
        self.pairs_reduced += 1;
        if self.pairs_reduced > self.budget.max_pair_reductions {
            return Err(self.exhausted(BudgetKind::PairReductions, 0));
        }
        if let Some(limit) = self.budget.wall_clock {
            if self.start.elapsed() > limit {
                return Err(self.exhausted(BudgetKind::WallClock, 0));
            }
        }
        Ok(())
    }

    fn exhausted(&self, reason: BudgetKind, extra_terms: u64) -> GroebnerError {
        GroebnerError::BudgetExhausted {
            reason,
            pairs_reduced: self.pairs_reduced,
            basis_size: self.basis.len(),
            live_terms: self.basis_terms + extra_terms,
        }
    }

    /// Full normal form against the live part of the basis, metering the
    /// term budget as the intermediate grows.
    fn reduce(&self, f: &Polynomial) -> Result<Reduced, GroebnerError> {
        let live: Vec<&Polynomial> = self
            .basis
            .iter()
            .zip(&self.alive)
            .filter_map(|(g, &a)| a.then_some(g))
            .collect();
        let remaining = self.budget.max_terms.saturating_sub(self.basis_terms);
        match normal_form_limited(f, &live, remaining) {
            Err(held) => Err(self.exhausted(BudgetKind::Terms, held)),
            Ok(r) if r.is_zero() => Ok(Reduced::Zero),
            Ok(r) if r.is_constant() => Ok(Reduced::Unit),
            Ok(r) => Ok(Reduced::Poly(r.make_monic())),
        }
    }

    /// Gebauer-Moeller update: installs a new basis element, prunes old pairs
    /// by the chain criterion, and filters new pairs by the coprime-lead and
    /// lcm-divisibility criteria.
    fn add(&mut self, h: Polynomial) {
        let t = h
            .leading_monomial()
            .expect("new basis member is nonzero")
            .clone();
        let new_index = self.basis.len();

        struct Cand {
            lcm: Monomial,
            index: usize,
            coprime: bool,
        }
        // Candidate pairs against live generators, in index order.
        let cands: Vec<Cand> = self
            .basis
            .iter()
            .enumerate()
            .filter(|(i, _)| self.alive[*i])
            .map(|(i, g)| {
                let lm = g.leading_monomial().expect("nonzero");
                Cand {
                    lcm: lm.lcm(&t),
                    index: i,
                    coprime: lm.coprime(&t),
                }
            })
            .collect();

        // Keep a candidate if its lead is coprime with t (it then shields
        // other candidates before being discarded below), or if no other
        // surviving or unprocessed candidate's lcm divides its lcm.
        let mut kept: Vec<Cand> = Vec::new();
        for (k, c) in cands.iter().enumerate() {
            let dominated = cands[k + 1..]
                .iter()
                .map(|c2| &c2.lcm)
                .chain(kept.iter().map(|c2| &c2.lcm))
                .any(|l| l.divides(&c.lcm));
            if c.coprime || !dominated {
                kept.push(Cand {
                    lcm: c.lcm.clone(),
                    index: c.index,
                    coprime: c.coprime,
                });
            }
        }

        // Chain criterion on the old pair queue.
        let basis = &self.basis;
        self.pairs.retain(|(lcm, i, j)| {
            let chained = t.divides(lcm)
                && basis[*i].leading_monomial().expect("nonzero").lcm(&t) != *lcm
                && basis[*j].leading_monomial().expect("nonzero").lcm(&t) != *lcm;
            !chained
        });

        for c in kept {
            if !c.coprime {
                self.pairs.insert((c.lcm, c.index, new_index));
            }
        }

        // Live generators whose lead t divides become redundant: they stop
        // producing pairs and reducing, but stay stored for pending pairs.
        for (i, g) in self.basis.iter().enumerate() {
            if self.alive[i] && t.divides(g.leading_monomial().expect("nonzero")) {
                self.alive[i] = false;
            }
        }

        self.basis_terms += h.num_terms() as u64;
        self.basis.push(h);
        self.alive.push(true);
    }

    fn unit_basis(&self, ring: PolyRing) -> GroebnerBasis {
        GroebnerBasis {
            generators: vec![ring.one()],
            staircase: vec![Monomial::one(ring.nvars())],
            nvars: ring.nvars(),
            pairs_reduced: self.pairs_reduced,
        }
    }

    fn finalize(self, nvars: usize) -> GroebnerBasis {
        // Live leads are already pairwise indivisible; inter-reduce the tails
        // and sort ascending by lead for a canonical result.
        let mut gens: Vec<Polynomial> = self
            .basis
            .into_iter()
            .zip(self.alive)
            .filter_map(|(g, a)| a.then_some(g))
            .collect();
        gens.sort_by(|a, b| {
            a.leading_monomial()
                .expect("nonzero")
                .cmp(b.leading_monomial().expect("nonzero"))
        });
        for i in 0..gens.len() {
            let mut others = gens.clone();
            others.remove(i);
            gens[i] = normal_form(&gens[i], &others);
        }
        let staircase = gens
            .iter()
            .map(|g| g.leading_monomial().expect("nonzero").clone())
            .collect();
        GroebnerBasis {
            generators: gens,
            staircase,
            nvars,
            pairs_reduced: self.pairs_reduced,
        }
    }
}
