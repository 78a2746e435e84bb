//! Seeded random covariance models and their critical-equation systems.
//!
//! A model is a generic m-dimensional subspace of symmetric n x n matrices,
//! spanned by random symmetric matrices `B_1, ..., B_m` over the prime field,
//! together with a random symmetric sample matrix `S`. The builders emit the
//! critical equations in three encodings whose solution counts must agree:
//!
//! * `PRIMAL`    — unknowns `K` (symmetric) and coordinates `l` of `Sigma` on
//!   the basis; equations `K*Sigma - I = 0` entrywise plus the pairings
//!   `<K*S*K - K, B_i> = 0`.
//! * `REDUCED`   — same unknowns; `S` replaced by the identity, pairings
//!   `<K^2 - K, B_i> = 0`.
//! * `ELIMINATED` — `K` eliminated through the adjugate; unknowns are the
//!   `l` coordinates and a saturation variable `t` with `t*det(Sigma) = 1`
//!   excluding the singular locus.
//!
//! Variable order is fixed and documented for reproducibility: the upper
//! triangle of `K` row-major (`k1_1, k1_2, ..., k2_2, ...`), then
//! `l1, ..., lm`, then `t` where present.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, PrimeModulus};
use crate::matrix::{rank_of_rows, FieldMatrix, PolyMatrix};
use crate::poly::{PolyError, PolyRing, Polynomial};
use crate::rng::SplitMix64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("matrix size must be at least {min}, got {got}")]
    SizeTooSmall { min: usize, got: usize },
    #[error("model dimension {m} outside [1, {max}] for n = {n}")]
    InvalidDimension { m: usize, n: usize, max: usize },
    #[error("basis matrices must be symmetric")]
    NotSymmetric,
    #[error("basis matrices are linearly dependent")]
    DependentBasis,
    #[error("malformed system text: {0}")]
    MalformedText(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Which encoding of the critical equations a system carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Encoding {
    Primal,
    Reduced,
    Eliminated,
    /// The corank-2 determinantal slice used by the delta oracle; not a
    /// critical-equation encoding.
    CorankSlice,
}

impl Encoding {
    /// The three encodings of the critical equations, in verification order.
    pub const MODEL_ENCODINGS: [Encoding; 3] =
        [Encoding::Primal, Encoding::Reduced, Encoding::Eliminated];

    pub fn as_str(self) -> &'static str {
        match self {
            Encoding::Primal => "primal",
            Encoding::Reduced => "reduced",
            Encoding::Eliminated => "eliminated",
            Encoding::CorankSlice => "corank-slice",
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Encoding {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "primal" => Ok(Encoding::Primal),
            "reduced" => Ok(Encoding::Reduced),
            "eliminated" => Ok(Encoding::Eliminated),
            "corank-slice" => Ok(Encoding::CorankSlice),
            other => Err(format!(
                "unknown encoding '{other}' (expected primal, reduced, eliminated, or corank-slice)"
            )),
        }
    }
}

/// Index of entry `(i, j)`, `i <= j`, in the row-major upper triangle.
pub fn sym_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * (2 * n - i + 1) / 2 + (j - i)
}

/// One random generic linear covariance model, a deterministic function of
/// `(n, m, seed, prime)`.
#[derive(Debug, Clone)]
pub struct ModelInstance {
    n: usize,
    m: usize,
    l_basis: Vec<FieldMatrix>,
    sample: FieldMatrix,
    seed: u64,
    prime: PrimeModulus,
}

impl ModelInstance {
    /// Draws the basis `B_1, ..., B_m` and the sample matrix `S` from the
    /// splitmix64 stream of `seed`: upper triangles row-major, `B_1` first.
    /// A linearly dependent draw (probability about m/p) is discarded and the
    /// stream advanced.
    pub fn random(n: usize, m: usize, seed: u64, prime: PrimeModulus) -> Result<Self, ModelError> {
        let max = n * (n + 1) / 2;
        if n < 2 {
            return Err(ModelError::SizeTooSmall { min: 2, got: n });
        }
        if m < 1 || m > max {
            return Err(ModelError::InvalidDimension { m, n, max });
        }
        let mut rng = SplitMix64::new(seed);
        let mut attempts = 0;
        let l_basis = loop {
            let basis: Vec<FieldMatrix> =
                (0..m).map(|_| random_symmetric(&mut rng, n, prime)).collect();
            let rows: Vec<Vec<FieldElement>> =
                basis.iter().map(|b| b.upper_triangle()).collect();
            if rank_of_rows(&rows) == m {
                break basis;
            }
            attempts += 1;
            assert!(attempts < 1000, "dependent draws 1000 times in a row");
        };
        let sample = random_symmetric(&mut rng, n, prime);
        Ok(ModelInstance {
            n,
            m,
            l_basis,
            sample,
            seed,
            prime,
        })
    }

    /// Builds an instance from explicit matrices, validating symmetry and
    /// linear independence. Used for hand-picked models in tests and docs.
    pub fn from_parts(
        l_basis: Vec<FieldMatrix>,
        sample: FieldMatrix,
        seed: u64,
        prime: PrimeModulus,
    ) -> Result<Self, ModelError> {
        let n = sample.size();
        let m = l_basis.len();
        let max = n * (n + 1) / 2;
        if n < 2 {
            return Err(ModelError::SizeTooSmall { min: 2, got: n });
        }
        if m < 1 || m > max {
            return Err(ModelError::InvalidDimension { m, n, max });
        }
        if !sample.is_symmetric() || l_basis.iter().any(|b| !b.is_symmetric() || b.size() != n) {
            return Err(ModelError::NotSymmetric);
        }
        let rows: Vec<Vec<FieldElement>> = l_basis.iter().map(|b| b.upper_triangle()).collect();
        if rank_of_rows(&rows) != m {
            return Err(ModelError::DependentBasis);
        }
        Ok(ModelInstance {
            n,
            m,
            l_basis,
            sample,
            seed,
            prime,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn prime(&self) -> PrimeModulus {
        self.prime
    }

    pub fn basis(&self) -> &[FieldMatrix] {
        &self.l_basis
    }

    pub fn sample(&self) -> &FieldMatrix {
        &self.sample
    }

    pub fn build(&self, encoding: Encoding) -> SymbolicSystem {
        match encoding {
            Encoding::Primal => self.build_primal(),
            Encoding::Reduced => self.build_reduced(),
            Encoding::Eliminated => self.build_eliminated(true),
            Encoding::CorankSlice => panic!("corank slice is not a model encoding"),
        }
    }

    /// The system of Eq.-(1) type: all n^2 entries of `K*Sigma - I` (no
    /// symmetry shortcut; the extra equations cut extraneous components),
    /// then `<K*S*K - K, B_i> = 0` for each basis matrix.
    pub fn build_primal(&self) -> SymbolicSystem {
        let (ring, k, sigma) = self.k_lambda_ring();
        let s = self.sample.to_poly(ring);
        let residual = k.mul(&s).mul(&k).sub(&k);
        self.assemble_k_system(Encoding::Primal, ring, &k, &sigma, &residual)
    }

    /// The sample-free reduction: same shape with `<K^2 - K, B_i> = 0`.
    pub fn build_reduced(&self) -> SymbolicSystem {
        let (ring, k, sigma) = self.k_lambda_ring();
        let residual = k.mul(&k).sub(&k);
        self.assemble_k_system(Encoding::Reduced, ring, &k, &sigma, &residual)
    }

    fn k_lambda_ring(&self) -> (PolyRing, PolyMatrix, PolyMatrix) {
        let t = self.n * (self.n + 1) / 2;
        let ring = PolyRing::new(t + self.m, self.prime);
        let k = PolyMatrix::from_fn(self.n, ring, |i, j| {
            ring.variable(sym_index(self.n, i.min(j), i.max(j)))
        });
        let sigma = self.sigma_matrix(ring, t);
        (ring, k, sigma)
    }

    fn sigma_matrix(&self, ring: PolyRing, lambda_offset: usize) -> PolyMatrix {
        PolyMatrix::from_fn(self.n, ring, |a, b| {
            let mut acc = ring.zero();
            for (i, basis) in self.l_basis.iter().enumerate() {
                let c = basis.get(a, b);
                if !c.is_zero() {
                    acc = acc.add(&ring.variable(lambda_offset + i).scale(c));
                }
            }
            acc
        })
    }

    fn assemble_k_system(
        &self,
        encoding: Encoding,
        ring: PolyRing,
        k: &PolyMatrix,
        sigma: &PolyMatrix,
        residual: &PolyMatrix,
    ) -> SymbolicSystem {
        let inverse_eq = k.mul(sigma).sub(&PolyMatrix::identity(self.n, ring));
        let mut equations = Vec::with_capacity(self.n * self.n + self.m);
        for a in 0..self.n {
            for b in 0..self.n {
                equations.push(inverse_eq.get(a, b).clone());
            }
        }
        for basis in &self.l_basis {
            equations.push(residual.trace_pair(basis));
        }
        let mut variables = k_names(self.n);
        variables.extend(lambda_names(self.m));
        SymbolicSystem {
            encoding,
            ring,
            variables,
            equations,
            n: self.n,
            m: self.m,
            seed: self.seed,
        }
    }

    /// The encoding with `K` eliminated through `adj(Sigma)`: for each basis
    /// matrix, `<adj(Sigma)*S*adj(Sigma) - det(Sigma)*adj(Sigma), B_i> = 0`,
    /// plus the saturation `t*det(Sigma) - 1 = 0` excluding singular `Sigma`.
    /// With `use_sample = false` the identity replaces `S`, mirroring the
    /// reduced encoding.
    pub fn build_eliminated(&self, use_sample: bool) -> SymbolicSystem {
        let ring = PolyRing::new(self.m + 1, self.prime);
        let sigma = self.sigma_matrix(ring, 0);
        let adj = sigma.adjugate();
        let det = sigma.det();
        let middle = if use_sample {
            self.sample.to_poly(ring)
        } else {
            PolyMatrix::identity(self.n, ring)
        };
        let residual = adj.mul(&middle).mul(&adj).sub(&adj.scale(&det));
        let mut equations: Vec<Polynomial> = self
            .l_basis
            .iter()
            .map(|basis| residual.trace_pair(basis))
            .collect();
        let t_var = ring.variable(self.m);
        equations.push(t_var.mul(&det).sub(&ring.one()));
        let mut variables = lambda_names(self.m);
        variables.push("t".to_string());
        SymbolicSystem {
            encoding: Encoding::Eliminated,
            ring,
            variables,
            equations,
            n: self.n,
            m: self.m,
            seed: self.seed,
        }
    }
}

fn random_symmetric(rng: &mut SplitMix64, n: usize, p: PrimeModulus) -> FieldMatrix {
    let upper: Vec<FieldElement> = (0..n * (n + 1) / 2).map(|_| rng.next_field(p)).collect();
    FieldMatrix::from_fn(n, p, |i, j| upper[sym_index(n, i.min(j), i.max(j))])
}

fn k_names(n: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 1..=n {
        for j in i..=n {
            out.push(format!("k{i}_{j}"));
        }
    }
    out
}

fn lambda_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("l{i}")).collect()
}

fn x_names(n: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 1..=n {
        for j in i..=n {
            out.push(format!("x{i}_{j}"));
        }
    }
    out
}

/// The determinantal-slice system behind the delta oracle: all
/// `(n-1) x (n-1)` minors of a symmetric matrix of unknowns cut the corank-2
/// locus, and a random linear slice of complementary dimension reduces it to
/// finitely many points — as many as the degree of that locus.
///
/// The corank-2 locus has codimension 3 in the `binom(n+1,2)`-dimensional
/// space of symmetric matrices, so its affine cone is sliced by
/// `binom(n+1,2) - 4` random homogeneous hyperplanes down to a union of
/// lines through the origin, and one random affine equation `l(X) = 1` picks
/// a point on each line. Slicing with a random affine form rather than
/// setting a coordinate to 1 avoids coordinate hyperplanes tangent to the
/// locus.
pub fn build_corank2_slice(
    n: usize,
    seed: u64,
    prime: PrimeModulus,
) -> Result<SymbolicSystem, ModelError> {
    if n < 3 {
        return Err(ModelError::SizeTooSmall { min: 3, got: n });
    }
    let t = n * (n + 1) / 2;
    let ring = PolyRing::new(t, prime);
    let x = PolyMatrix::from_fn(n, ring, |i, j| {
        ring.variable(sym_index(n, i.min(j), i.max(j)))
    });
    let mut equations = Vec::new();
    let all: Vec<usize> = (0..n).collect();
    for drop_row in 0..n {
        for drop_col in 0..n {
            let rows: Vec<usize> = all.iter().copied().filter(|&r| r != drop_row).collect();
            let cols: Vec<usize> = all.iter().copied().filter(|&c| c != drop_col).collect();
            equations.push(x.submatrix_det(&rows, &cols));
        }
    }
    let mut rng = SplitMix64::new(seed);
    let random_linear = |rng: &mut SplitMix64| {
        let mut acc = ring.zero();
        for v in 0..t {
            acc = acc.add(&ring.variable(v).scale(rng.next_field(prime)));
        }
        acc
    };
    for _ in 0..t - 4 {
        equations.push(random_linear(&mut rng));
    }
    equations.push(random_linear(&mut rng).sub(&ring.one()));
    Ok(SymbolicSystem {
        encoding: Encoding::CorankSlice,
        ring,
        variables: x_names(n),
        equations,
        n,
        m: 0,
        seed,
    })
}

/// A polynomial system together with its provenance, ready for the solver or
/// for export to an external computer-algebra system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicSystem {
    encoding: Encoding,
    ring: PolyRing,
    variables: Vec<String>,
    equations: Vec<Polynomial>,
    n: usize,
    /// Model dimension; 0 for the corank slice, which has none.
    m: usize,
    seed: u64,
}

impl SymbolicSystem {
    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn ring(&self) -> PolyRing {
        self.ring
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Plain-text export: `#`-prefixed header lines carrying the metadata,
    /// then one polynomial per line in the text grammar.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# mldeg system v1\n");
        out.push_str(&format!("# encoding: {}\n", self.encoding));
        out.push_str(&format!("# n: {}\n", self.n));
        out.push_str(&format!("# m: {}\n", self.m));
        out.push_str(&format!("# seed: {}\n", self.seed));
        out.push_str(&format!("# prime: {}\n", self.ring.modulus()));
        out.push_str(&format!("# vars: {}\n", self.variables.join(" ")));
        for eq in &self.equations {
            out.push_str(&eq.to_text(&self.variables));
            out.push('\n');
        }
        out
    }

    /// Parses the [`SymbolicSystem::to_text`] format.
    pub fn from_text(text: &str) -> Result<SymbolicSystem, ModelError> {
        let mut encoding = None;
        let mut n = None;
        let mut m = None;
        let mut seed = None;
        let mut prime = None;
        let mut vars: Option<Vec<String>> = None;
        let mut poly_lines = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some((key, value)) = rest.split_once(':') {
                    let value = value.trim();
                    match key.trim() {
                        "encoding" => {
                            encoding = Some(value.parse::<Encoding>().map_err(ModelError::MalformedText)?)
                        }
                        "n" => n = Some(parse_usize(value)?),
                        "m" => m = Some(parse_usize(value)?),
                        "seed" => {
                            seed = Some(value.parse::<u64>().map_err(|e| {
                                ModelError::MalformedText(format!("bad seed: {e}"))
                            })?)
                        }
                        "prime" => {
                            let raw = value.parse::<u32>().map_err(|e| {
                                ModelError::MalformedText(format!("bad prime: {e}"))
                            })?;
                            prime = Some(PrimeModulus::new(raw).map_err(|e| {
                                ModelError::MalformedText(e.to_string())
                            })?);
                        }
                        "vars" => {
                            vars = Some(value.split_whitespace().map(str::to_string).collect())
                        }
                        _ => {}
                    }
                }
                continue;
            }
            poly_lines.push(line.to_string());
        }
        let missing = |what: &str| ModelError::MalformedText(format!("missing header '{what}'"));
        let encoding = encoding.ok_or_else(|| missing("encoding"))?;
        let prime = prime.ok_or_else(|| missing("prime"))?;
        let variables = vars.ok_or_else(|| missing("vars"))?;
        let ring = PolyRing::new(variables.len(), prime);
        let equations = poly_lines
            .iter()
            .map(|line| Polynomial::parse(ring, &variables, line))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SymbolicSystem {
            encoding,
            ring,
            variables,
            equations,
            n: n.ok_or_else(|| missing("n"))?,
            m: m.ok_or_else(|| missing("m"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
        })
    }
}

fn parse_usize(value: &str) -> Result<usize, ModelError> {
    value
        .parse::<usize>()
        .map_err(|e| ModelError::MalformedText(format!("bad integer: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;

    fn p() -> PrimeModulus {
        PrimeModulus::new(DEFAULT_PRIME).unwrap()
    }

    #[test]
    fn random_instance_is_deterministic() {
        let a = ModelInstance::random(3, 2, 7, p()).unwrap();
        let b = ModelInstance::random(3, 2, 7, p()).unwrap();
        assert_eq!(a.basis(), b.basis());
        assert_eq!(a.sample(), b.sample());
        let c = ModelInstance::random(3, 2, 8, p()).unwrap();
        assert_ne!(a.basis(), c.basis());
    }

    #[test]
    fn full_dimension_basis_spans() {
        // m = 3 equals dim(Sym_2); the basis must span the whole space.
        let inst = ModelInstance::random(2, 3, 1, p()).unwrap();
        let rows: Vec<_> = inst.basis().iter().map(|b| b.upper_triangle()).collect();
        assert_eq!(rank_of_rows(&rows), 3);
    }

    #[test]
    fn four_independent_symmetric_3x3() {
        let inst = ModelInstance::random(3, 4, 5, p()).unwrap();
        assert_eq!(inst.basis().len(), 4);
        let rows: Vec<_> = inst.basis().iter().map(|b| b.upper_triangle()).collect();
        assert_eq!(rank_of_rows(&rows), 4);
    }

    #[test]
    fn dimension_validation() {
        assert!(matches!(
            ModelInstance::random(1, 1, 0, p()),
            Err(ModelError::SizeTooSmall { .. })
        ));
        assert!(matches!(
            ModelInstance::random(2, 4, 0, p()),
            Err(ModelError::InvalidDimension { .. })
        ));
        assert!(matches!(
            ModelInstance::random(2, 0, 0, p()),
            Err(ModelError::InvalidDimension { .. })
        ));
    }

    #[test]
    fn primal_counts_and_degrees() {
        let inst = ModelInstance::random(3, 2, 1, p()).unwrap();
        let sys = inst.build_primal();
        assert_eq!(sys.variables().len(), 8);
        assert_eq!(sys.equations().len(), 11);
        // K*Sigma - I entries are bilinear, the pairings quadratic.
        for eq in sys.equations() {
            assert_eq!(eq.total_degree(), Some(2));
        }

        let inst = ModelInstance::random(3, 4, 1, p()).unwrap();
        let sys = inst.build_primal();
        assert_eq!(sys.variables().len(), 10);
        assert_eq!(sys.equations().len(), 13);
    }

    #[test]
    fn reduced_counts() {
        let inst = ModelInstance::random(3, 2, 9, p()).unwrap();
        let sys = inst.build_reduced();
        assert_eq!(sys.variables().len(), 8);
        assert_eq!(sys.equations().len(), 11);
        assert_eq!(
            sys.variables()[..3],
            ["k1_1".to_string(), "k1_2".to_string(), "k1_3".to_string()]
        );
        assert_eq!(sys.variables()[6..], ["l1".to_string(), "l2".to_string()]);
    }

    #[test]
    fn eliminated_shape() {
        let inst = ModelInstance::random(3, 4, 1, p()).unwrap();
        let sys = inst.build_eliminated(true);
        assert_eq!(sys.variables().len(), 5);
        assert_eq!(sys.equations().len(), 5);
        // Pairing equations have degree 2n - 1 (the det * adj term), the
        // saturation equation degree n + 1.
        for eq in &sys.equations()[..4] {
            assert_eq!(eq.total_degree(), Some(5));
        }
        assert_eq!(sys.equations()[4].total_degree(), Some(4));
    }

    #[test]
    fn trace_pairing_is_symmetric() {
        let p = p();
        let inst = ModelInstance::random(4, 2, 3, p).unwrap();
        let ring = PolyRing::new(1, p);
        let a = inst.basis()[0].clone();
        let b = inst.basis()[1].clone();
        let lhs = a.to_poly(ring).trace_pair(&b);
        let rhs = b.to_poly(ring).trace_pair(&a);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn corank_slice_shape() {
        let sys = build_corank2_slice(3, 1, p()).unwrap();
        assert_eq!(sys.variables().len(), 6);
        // 9 minors + 2 homogeneous forms + 1 affine form.
        assert_eq!(sys.equations().len(), 12);
        assert!(build_corank2_slice(2, 1, p()).is_err());
    }

    #[test]
    fn export_round_trip() {
        let inst = ModelInstance::random(3, 2, 1, p()).unwrap();
        for sys in [inst.build_primal(), inst.build_reduced(), inst.build_eliminated(true)] {
            let text = sys.to_text();
            let back = SymbolicSystem::from_text(&text).unwrap();
            assert_eq!(back, sys);
        }
    }

    #[test]
    fn from_text_rejects_missing_headers() {
        assert!(matches!(
            SymbolicSystem::from_text("# vars: x\nx + 1"),
            Err(ModelError::MalformedText(_))
        ));
    }
}
