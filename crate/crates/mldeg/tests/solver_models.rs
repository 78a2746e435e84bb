//! Solver-level checks on model systems small enough for every encoding.

use std::time::Instant;

use mldeg::field::{PrimeModulus, DEFAULT_PRIME};
use mldeg::groebner::{count_solutions, Budget, SolutionCount};
use mldeg::matrix::FieldMatrix;
use mldeg::model::{build_corank2_slice, Encoding, ModelInstance};

fn p() -> PrimeModulus {
    PrimeModulus::new(DEFAULT_PRIME).unwrap()
}

fn count(n: usize, m: usize, seed: u64, encoding: Encoding) -> SolutionCount {
    let inst = ModelInstance::random(n, m, seed, p()).unwrap();
    let sys = inst.build(encoding);
    let start = Instant::now();
    let report = count_solutions(sys.equations(), &Budget::default()).unwrap();
    println!(
        "n={n} m={m} seed={seed} {encoding}: {:?} in {:?} (gb {}, pairs {})",
        report.outcome,
        start.elapsed(),
        report.gb_size,
        report.pairs_reduced
    );
    report.outcome
}

#[test]
fn ml2_n3_is_3_all_encodings() {
    for encoding in Encoding::MODEL_ENCODINGS {
        assert_eq!(count(3, 2, 1, encoding), SolutionCount::Count(3));
    }
}

#[test]
fn ml4_n3_is_7_all_encodings() {
    for encoding in Encoding::MODEL_ENCODINGS {
        assert_eq!(count(3, 4, 1, encoding), SolutionCount::Count(7));
    }
}

#[test]
fn identity_pencil_has_one_solution() {
    // m = 1 with B_1 = I: K = 1/l * I and <K^2 - K, I> = 0 forces l = 1.
    let prime = p();
    let basis = vec![FieldMatrix::identity(3, prime)];
    let sample = FieldMatrix::identity(3, prime);
    let inst = ModelInstance::from_parts(basis, sample, 0, prime).unwrap();
    let report = count_solutions(inst.build_reduced().equations(), &Budget::default()).unwrap();
    assert_eq!(report.outcome, SolutionCount::Count(1));

    // Same model through the eliminated encoding, n = 2.
    let basis = vec![FieldMatrix::identity(2, prime)];
    let sample = FieldMatrix::identity(2, prime);
    let inst = ModelInstance::from_parts(basis, sample, 0, prime).unwrap();
    let report =
        count_solutions(inst.build_eliminated(false).equations(), &Budget::default()).unwrap();
    assert_eq!(report.outcome, SolutionCount::Count(1));
}

#[test]
fn full_model_dimension_recovers_sample() {
    // m = binom(n+1,2): the orthogonal complement is zero, so K*S*K = K and
    // Sigma = S is the unique solution.
    assert_eq!(count(2, 3, 1, Encoding::Primal), SolutionCount::Count(1));
    assert_eq!(count(2, 3, 2, Encoding::Reduced), SolutionCount::Count(1));
}

#[test]
fn corank_slice_degrees() {
    for (n, expected) in [(3, 4u64), (4, 10)] {
        for seed in [1, 2] {
            let sys = build_corank2_slice(n, seed, p()).unwrap();
            let start = Instant::now();
            let report = count_solutions(sys.equations(), &Budget::default()).unwrap();
            println!(
                "slice n={n} seed={seed}: {:?} in {:?} (gb {}, pairs {})",
                report.outcome,
                start.elapsed(),
                report.gb_size,
                report.pairs_reduced
            );
            assert_eq!(report.outcome, SolutionCount::Count(expected));
        }
    }
}

#[test]
fn basis_change_leaves_count_invariant() {
    // The systems depend only on the subspace spanned by the B_i, not on the
    // chosen basis: replace the basis by an invertible combination.
    let prime = p();
    let inst = ModelInstance::random(3, 2, 11, prime).unwrap();
    let b = inst.basis();
    // [[1, 2], [3, 7]] is invertible (det 1).
    let c = |a: u64, b0: u64| (prime.elem(a), prime.elem(b0));
    let combos = [c(1, 2), c(3, 7)];
    let mixed: Vec<FieldMatrix> = combos
        .iter()
        .map(|(u, v)| {
            FieldMatrix::from_fn(3, prime, |i, j| *u * b[0].get(i, j) + *v * b[1].get(i, j))
        })
        .collect();
    let changed = ModelInstance::from_parts(mixed, inst.sample().clone(), 11, prime).unwrap();
    let before = count_solutions(inst.build_reduced().equations(), &Budget::default()).unwrap();
    let after = count_solutions(changed.build_reduced().equations(), &Budget::default()).unwrap();
    assert_eq!(before.outcome, after.outcome);
    assert_eq!(before.outcome, SolutionCount::Count(3));
}
