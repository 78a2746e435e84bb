//! Exact computation of maximum-likelihood degrees of generic linear
//! covariance models, two independent ways:
//!
//! * **Solver side** — build the critical equations of a random generic model
//!   over a large prime field and count their solutions exactly with a
//!   Groebner basis (`model`, `groebner`).
//! * **Formula side** — evaluate the closed-form ML-degree polynomials and
//!   reassemble them from complete-quadrics intersection numbers in exact
//!   rational arithmetic (`enumerative`).
//!
//! The `harness` module and the `mldeg` CLI cross-check the two sides over
//! seeds, primes, and system encodings.

pub mod enumerative;
pub mod field;
pub mod groebner;
pub mod harness;
pub mod matrix;
pub mod model;
pub mod monomial;
pub mod poly;
pub mod rational;
pub mod rng;

pub use enumerative::{
    delta, expand_ml4_assembly, intersection_number, ml_formula, ml_formula_int, ml_naive,
    ml_via_intersection, MLFormula, RationalPoly, SegreClass, ML_1,
};
pub use enumerative::EnumerativeError;
pub use field::{FieldElement, FieldError, PrimeModulus, DEFAULT_PRIME, VERIFICATION_PRIMES};
pub use groebner::{
    buchberger, count_solutions, Budget, CountReport, GroebnerBasis, GroebnerError, SolutionCount,
};
pub use harness::{
    execute_cell, run_delta_oracle, run_verification, DeltaReport, HarnessError, RunRecord,
    RunStatus, Verdict, VerificationRun, VerifySpec,
};
pub use matrix::{FieldMatrix, PolyMatrix};
pub use model::{build_corank2_slice, Encoding, ModelError, ModelInstance, SymbolicSystem};
pub use monomial::{grevlex_cmp, Monomial, MonomialError};
pub use poly::{normal_form, s_polynomial, PolyError, PolyRing, Polynomial};
pub use rational::{rational_normalize, Rational, RationalError};
