//! Small dense matrices over the prime field and over polynomial rings.
//!
//! Sizes here are tiny (n up to about 6), so everything is straightforward
//! dense arithmetic; determinants and adjugates expand by minors, which keeps
//! the polynomial identities exact.

use crate::field::{FieldElement, PrimeModulus};
use crate::poly::{PolyRing, Polynomial};

/// Dense square matrix of field elements, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    n: usize,
    entries: Vec<FieldElement>,
}

impl FieldMatrix {
    pub fn from_fn(n: usize, p: PrimeModulus, mut f: impl FnMut(usize, usize) -> FieldElement) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = f(i, j);
                assert_eq!(e.modulus(), p, "field modulus mismatch");
                entries.push(e);
            }
        }
        FieldMatrix { n, entries }
    }

    pub fn identity(n: usize, p: PrimeModulus) -> Self {
        Self::from_fn(n, p, |i, j| if i == j { p.one() } else { p.zero() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.n + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Flattens the upper triangle row-major: `(0,0), (0,1), ..., (1,1), ...`
    /// A symmetric matrix is determined by this vector.
    pub fn upper_triangle(&self) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for i in 0..self.n {
            for j in i..self.n {
                out.push(self.get(i, j));
            }
        }
        out
    }

    /// Embeds into a polynomial ring as a matrix of constants.
    pub fn to_poly(&self, ring: PolyRing) -> PolyMatrix {
        PolyMatrix::from_fn(self.n, ring, |i, j| ring.constant(self.get(i, j)))
    }
}

/// Rank of a (not necessarily square) row list over `F_p` by Gaussian
/// elimination.
pub fn rank_of_rows(rows: &[Vec<FieldElement>]) -> usize {
    let mut rows: Vec<Vec<FieldElement>> = rows.to_vec();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].inv().expect("pivot nonzero");
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col] * inv;
            for c in col..ncols {
                let sub = factor * rows[rank][c];
                rows[r][c] = rows[r][c] - sub;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Dense square matrix of polynomials over one ring, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    ring: PolyRing,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn from_fn(n: usize, ring: PolyRing, mut f: impl FnMut(usize, usize) -> Polynomial) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = f(i, j);
                assert_eq!(e.ring(), ring, "polynomial ring mismatch");
                entries.push(e);
            }
        }
        PolyMatrix { n, ring, entries }
    }

    pub fn identity(n: usize, ring: PolyRing) -> Self {
        Self::from_fn(n, ring, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> PolyRing {
        self.ring
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        PolyMatrix::from_fn(self.n, self.ring, |i, j| {
            let mut acc = self.ring.zero();
            for k in 0..self.n {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        PolyMatrix::from_fn(self.n, self.ring, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    pub fn scale(&self, f: &Polynomial) -> PolyMatrix {
        PolyMatrix::from_fn(self.n, self.ring, |i, j| self.get(i, j).mul(f))
    }

    /// Determinant by minor expansion along the first row.
    pub fn det(&self) -> Polynomial {
        let rows: Vec<usize> = (0..self.n).collect();
        self.det_rec(&rows, &rows)
    }

    /// Determinant of the square submatrix on the given rows and columns.
    pub fn submatrix_det(&self, rows: &[usize], cols: &[usize]) -> Polynomial {
        assert_eq!(rows.len(), cols.len(), "submatrix must be square");
        self.det_rec(rows, cols)
    }

    fn det_rec(&self, rows: &[usize], cols: &[usize]) -> Polynomial {
        debug_assert_eq!(rows.len(), cols.len());
        match rows.len() {
            0 => self.ring.one(),
            1 => self.get(rows[0], cols[0]).clone(),
            _ => {
                let mut acc = self.ring.zero();
                let sub_rows = &rows[1..];
                for (k, &c) in cols.iter().enumerate() {
                    let entry = self.get(rows[0], c);
                    if entry.is_zero() {
                        continue;
                    }
                    let sub_cols: Vec<usize> = cols
                        .iter()
                        .enumerate()
                        .filter_map(|(idx, &cc)| (idx != k).then_some(cc))
                        .collect();
                    let minor = self.det_rec(sub_rows, &sub_cols);
                    let term = entry.mul(&minor);
                    acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                acc
            }
        }
    }

    /// Transposed cofactor matrix, so that `M * adj(M) = det(M) * I` holds as
    /// an exact polynomial identity.
    pub fn adjugate(&self) -> PolyMatrix {
        let all: Vec<usize> = (0..self.n).collect();
        PolyMatrix::from_fn(self.n, self.ring, |i, j| {
            // adj[i][j] = (-1)^(i+j) * minor(j, i).
            let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
            let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
            let minor = self.det_rec(&rows, &cols);
            if (i + j) % 2 == 0 {
                minor
            } else {
                minor.neg()
            }
        })
    }

    /// The trace pairing `<A, B> = Tr(A * B)` against a constant matrix.
    pub fn trace_pair(&self, other: &FieldMatrix) -> Polynomial {
        assert_eq!(self.n, other.size(), "matrix size mismatch");
        let mut acc = self.ring.zero();
        for a in 0..self.n {
            for b in 0..self.n {
                let c = other.get(b, a);
                if c.is_zero() {
                    continue;
                }
                acc = acc.add(&self.get(a, b).scale(c));
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_PRIME;
    use crate::rng::SplitMix64;

    fn p() -> PrimeModulus {
        PrimeModulus::new(DEFAULT_PRIME).unwrap()
    }

    #[test]
    fn adjugate_2x2_symmetric() {
        // adj([[a,b],[b,c]]) = [[c,-b],[-b,a]] with variables a, b, c.
        let ring = PolyRing::new(3, p());
        let (a, b, c) = (ring.variable(0), ring.variable(1), ring.variable(2));
        let m = PolyMatrix::from_fn(2, ring, |i, j| match (i, j) {
            (0, 0) => a.clone(),
            (1, 1) => c.clone(),
            _ => b.clone(),
        });
        let adj = m.adjugate();
        assert_eq!(adj.get(0, 0), &c);
        assert_eq!(adj.get(0, 1), &b.neg());
        assert_eq!(adj.get(1, 0), &b.neg());
        assert_eq!(adj.get(1, 1), &a);
    }

    #[test]
    fn adjugate_identity() {
        let ring = PolyRing::new(1, p());
        let id = PolyMatrix::identity(3, ring);
        assert_eq!(id.adjugate(), id);
    }

    #[test]
    fn laplace_identity_symbolic_3x3() {
        // M * adj(M) = det(M) * I for a fully symbolic symmetric 3x3.
        let ring = PolyRing::new(6, p());
        let sym_index = |i: usize, j: usize| -> usize {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            i * (7 - i) / 2 + (j - i)
        };
        let m = PolyMatrix::from_fn(3, ring, |i, j| ring.variable(sym_index(i, j)));
        let lhs = m.mul(&m.adjugate());
        let det = m.det();
        let rhs = PolyMatrix::identity(3, ring).scale(&det);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn laplace_identity_random_numeric() {
        let p = p();
        let ring = PolyRing::new(1, p);
        let mut rng = SplitMix64::new(0xADA);
        for n in 2..=5 {
            for _ in 0..40 {
                let fm = FieldMatrix::from_fn(n, p, |_, _| rng.next_field(p));
                let m = fm.to_poly(ring);
                assert_eq!(m.mul(&m.adjugate()), PolyMatrix::identity(n, ring).scale(&m.det()));
            }
        }
    }

    #[test]
    fn rank_detects_dependence() {
        let p = p();
        let e = |v: u64| p.elem(v);
        let rows = vec![
            vec![e(1), e(2), e(3)],
            vec![e(2), e(4), e(6)],
            vec![e(0), e(1), e(1)],
        ];
        assert_eq!(rank_of_rows(&rows), 2);
        let rows = vec![vec![e(1), e(0)], vec![e(7), e(5)]];
        assert_eq!(rank_of_rows(&rows), 2);
        assert_eq!(rank_of_rows(&[vec![e(0), e(0)]]), 0);
    }
}
