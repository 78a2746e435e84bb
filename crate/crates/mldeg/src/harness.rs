//! Verification sweeps: solver counts against the closed forms.
//!
//! A sweep runs the full cross product of (cell, seed, prime, encoding)
//! tasks, each task independent and the merge deterministic, and grades every
//! cell: `MATCH` when each completed run equals the formula value, `MISMATCH`
//! the moment one completed run disagrees, `INCONCLUSIVE` only when every
//! attempt for the cell hit its budget. Disagreements are surfaced, never
//! averaged away.
//!
//! The run-record schema `{n, m, seed, prime, encoding, count, status,
//! gb_size, pairs_reduced, elapsed_ms, tool_version}` is stable; the JSON
//! (one object per line) and CSV emitters carry identical data.

use std::collections::BTreeMap;
use std::io::{BufRead, Read, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerative::{ml_formula_int, EnumerativeError, ML_1};
use crate::field::{FieldError, PrimeModulus, VERIFICATION_PRIMES};
use crate::groebner::{count_solutions, Budget, GroebnerError, SolutionCount};
use crate::model::{build_corank2_slice, Encoding, ModelError, ModelInstance};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable supplying the default worker-thread count.
pub const THREADS_ENV: &str = "MLDEG_THREADS";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("empty verification spec: at least one (n, m) cell is required")]
    EmptySpec,
    #[error("no reference value for m = {0} (supported: 1..=4)")]
    NoReferenceValue(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("solver failed: {0}")]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Enumerative(#[from] EnumerativeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Outcome labels in the record schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Counted,
    Empty,
    PositiveDimensional,
    BudgetExhausted,
}

/// One solver run in the stable output schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub prime: u32,
    pub encoding: Encoding,
    /// Present exactly when `status` is `counted`.
    pub count: Option<u64>,
    pub status: RunStatus,
    pub gb_size: usize,
    pub pairs_reduced: u64,
    pub elapsed_ms: u64,
    pub tool_version: String,
}

impl RunRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    /// Equality ignoring the timing field, for determinism checks.
    pub fn same_modulo_timing(&self, other: &RunRecord) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.elapsed_ms = 0;
        b.elapsed_ms = 0;
        a == b
    }

    fn sort_key(&self) -> (usize, usize, u64, u32, Encoding) {
        (self.n, self.m, self.seed, self.prime, self.encoding)
    }
}

/// Builds the instance for `(n, m, seed, prime)`, assembles the system in the
/// requested encoding, runs the solver, and wraps the outcome in the record
/// schema. Budget exhaustion becomes a `budget-exhausted` record, not an
/// error.
pub fn execute_cell(
    n: usize,
    m: usize,
    seed: u64,
    prime: PrimeModulus,
    encoding: Encoding,
    budget: &Budget,
) -> Result<RunRecord, HarnessError> {
    let instance = ModelInstance::random(n, m, seed, prime)?;
    let system = instance.build(encoding);
    let start = Instant::now();
    let record = match count_solutions(system.equations(), budget) {
        Ok(report) => {
            let (count, status) = match report.outcome {
                SolutionCount::Count(c) => (Some(c), RunStatus::Counted),
                SolutionCount::Empty => (None, RunStatus::Empty),
                SolutionCount::PositiveDimensional => (None, RunStatus::PositiveDimensional),
            };
            RunRecord {
                n,
                m,
                seed,
                prime: prime.get(),
                encoding,
                count,
                status,
                gb_size: report.gb_size,
                pairs_reduced: report.pairs_reduced,
                elapsed_ms: start.elapsed().as_millis() as u64,
                tool_version: TOOL_VERSION.to_string(),
            }
        }
        Err(GroebnerError::BudgetExhausted {
            pairs_reduced,
            basis_size,
            ..
        }) => RunRecord {
            n,
            m,
            seed,
            prime: prime.get(),
            encoding,
            count: None,
            status: RunStatus::BudgetExhausted,
            gb_size: basis_size,
            pairs_reduced,
            elapsed_ms: start.elapsed().as_millis() as u64,
            tool_version: TOOL_VERSION.to_string(),
        },
        Err(other) => return Err(other.into()),
    };
    Ok(record)
}

/// A verification sweep: which cells to run and how.
#[derive(Debug, Clone)]
pub struct VerifySpec {
    /// `(n, m)` cells; must be nonempty.
    pub cells: Vec<(usize, usize)>,
    pub seeds: Vec<u64>,
    pub primes: Vec<u32>,
    pub encodings: Vec<Encoding>,
    pub budget: Budget,
    /// Worker threads; `None` falls back to `MLDEG_THREADS`, then to the
    /// machine default.
    pub threads: Option<usize>,
}

impl Default for VerifySpec {
    fn default() -> Self {
        VerifySpec {
            cells: Vec::new(),
            seeds: vec![1, 2, 3],
            primes: VERIFICATION_PRIMES.to_vec(),
            encodings: vec![Encoding::Reduced, Encoding::Eliminated],
            budget: Budget::default(),
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Match,
    Mismatch,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Match => write!(f, "MATCH"),
            Verdict::Mismatch => write!(f, "MISMATCH"),
            Verdict::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

/// Per-cell grade against the closed form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellVerdict {
    pub n: usize,
    pub m: usize,
    pub expected: u64,
    pub verdict: Verdict,
}

/// All records of a sweep (sorted by task key) plus the per-cell grades.
#[derive(Debug, Clone)]
pub struct VerificationRun {
    pub records: Vec<RunRecord>,
    pub verdicts: Vec<CellVerdict>,
}

impl VerificationRun {
    pub fn overall(&self) -> Verdict {
        if self.verdicts.iter().any(|v| v.verdict == Verdict::Mismatch) {
            Verdict::Mismatch
        } else if self.verdicts.iter().any(|v| v.verdict == Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else {
            Verdict::Match
        }
    }

    /// Exit-code contract: 0 all MATCH, 1 any MISMATCH, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.overall() {
            Verdict::Match => 0,
            Verdict::Mismatch => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

/// The reference ML-degree the solver must reproduce for dimension `m`.
pub fn expected_count(m: usize, n: u64) -> Result<u64, HarnessError> {
    match m {
        1 => Ok(ML_1),
        2..=4 => {
            let v = ml_formula_int(m, n)?;
            Ok(u64::try_from(v).expect("ML-degree is a small positive integer"))
        }
        other => Err(HarnessError::NoReferenceValue(other)),
    }
}

/// Runs the full cross product of the spec, in parallel, and grades each
/// cell. The result is deterministic: records are merged in sorted task
/// order regardless of thread count.
pub fn run_verification(spec: &VerifySpec) -> Result<VerificationRun, HarnessError> {
    if spec.cells.is_empty() {
        return Err(HarnessError::EmptySpec);
    }
    let mut expected: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for &(n, m) in &spec.cells {
        expected.insert((n, m), expected_count(m, n as u64)?);
    }
    let primes: Vec<PrimeModulus> = spec
        .primes
        .iter()
        .map(|&p| PrimeModulus::new(p))
        .collect::<Result<_, _>>()?;

    let mut tasks: Vec<(usize, usize, u64, PrimeModulus, Encoding)> = Vec::new();
    for &(n, m) in &spec.cells {
        for &seed in &spec.seeds {
            for &prime in &primes {
                for &encoding in &spec.encodings {
                    tasks.push((n, m, seed, prime, encoding));
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(effective_threads(spec.threads))
        .build()
        .expect("thread pool");
    let mut records: Vec<RunRecord> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(n, m, seed, prime, encoding)| {
                execute_cell(n, m, seed, prime, encoding, &spec.budget)
            })
            .collect::<Result<_, _>>()
    })?;
    records.sort_by_key(|r| r.sort_key());

    let mut verdicts = Vec::new();
    for (&(n, m), &reference) in &expected {
        let cell: Vec<&RunRecord> = records
            .iter()
            .filter(|r| r.n == n && r.m == m)
            .collect();
        let completed: Vec<&&RunRecord> = cell
            .iter()
            .filter(|r| r.status != RunStatus::BudgetExhausted)
            .collect();
        let verdict = if completed.is_empty() {
            Verdict::Inconclusive
        } else if completed
            .iter()
            .all(|r| r.status == RunStatus::Counted && r.count == Some(reference))
        {
            Verdict::Match
        } else {
            Verdict::Mismatch
        };
        verdicts.push(CellVerdict {
            n,
            m,
            expected: reference,
            verdict,
        });
    }
    Ok(VerificationRun { records, verdicts })
}

/// Requested threads, falling back to `MLDEG_THREADS`, then `0` which lets
/// the pool pick the machine default.
pub fn effective_threads(requested: Option<usize>) -> usize {
    requested
        .or_else(|| {
            std::env::var(THREADS_ENV)
                .ok()
                .and_then(|s| s.parse::<usize>().ok())
        })
        .unwrap_or(0)
}

/// Outcome of one delta-oracle run: the corank-2 slice count against
/// `binom(n+1, 3)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaReport {
    pub n: usize,
    pub seed: u64,
    pub prime: u32,
    pub count: Option<u64>,
    pub status: RunStatus,
    pub expected: u64,
    pub matches: bool,
    pub gb_size: usize,
    pub pairs_reduced: u64,
    pub elapsed_ms: u64,
    pub tool_version: String,
}

impl DeltaReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// Counts the corank-2 slice for `(n, seed, prime)` and compares with the
/// binomial formula.
pub fn run_delta_oracle(
    n: usize,
    seed: u64,
    prime: PrimeModulus,
    budget: &Budget,
) -> Result<DeltaReport, HarnessError> {
    let system = build_corank2_slice(n, seed, prime)?;
    let expected = u64::try_from(crate::enumerative::delta(n as u64))
        .expect("delta is a small positive integer");
    let start = Instant::now();
    let (count, status, gb_size, pairs_reduced) = match count_solutions(system.equations(), budget)
    {
        Ok(report) => {
            let (count, status) = match report.outcome {
                SolutionCount::Count(c) => (Some(c), RunStatus::Counted),
                SolutionCount::Empty => (None, RunStatus::Empty),
                SolutionCount::PositiveDimensional => (None, RunStatus::PositiveDimensional),
            };
            (count, status, report.gb_size, report.pairs_reduced)
        }
        Err(GroebnerError::BudgetExhausted {
            pairs_reduced,
            basis_size,
            ..
        }) => (None, RunStatus::BudgetExhausted, basis_size, pairs_reduced),
        Err(other) => return Err(other.into()),
    };
    Ok(DeltaReport {
        n,
        seed,
        prime: prime.get(),
        count,
        status,
        expected,
        matches: count == Some(expected),
        gb_size,
        pairs_reduced,
        elapsed_ms: start.elapsed().as_millis() as u64,
        tool_version: TOOL_VERSION.to_string(),
    })
}

// ---------------------------------------------------------------------------
// Report files
// ---------------------------------------------------------------------------

/// Writes records as JSON, one object per line.
pub fn write_json_records(records: &[RunRecord], mut w: impl Write) -> Result<(), HarnessError> {
    for r in records {
        writeln!(w, "{}", r.to_json_line())?;
    }
    Ok(())
}

pub fn read_json_records(r: impl Read) -> Result<Vec<RunRecord>, HarnessError> {
    let reader = std::io::BufReader::new(r);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

/// Writes records as CSV with a header row; same columns as the JSON.
pub fn write_csv_records(records: &[RunRecord], w: impl Write) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_writer(w);
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv_records(r: impl Read) -> Result<Vec<RunRecord>, HarnessError> {
    let mut reader = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for row in reader.deserialize() {
        out.push(row?);
    }
    Ok(out)
}
