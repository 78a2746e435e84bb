//! `mldeg` — count and cross-check ML-degrees of generic linear covariance
//! models.
//!
//! Subcommands: `count` (one solver run), `formula` (closed-form table),
//! `verify` (solver-vs-formula sweep with exit codes 0/1/2), `delta-oracle`
//! (corank-2 slice degree check), `export-system` (plain-text system dump).
//! `MLDEG_THREADS` sets the default worker-thread count for `verify`.

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mldeg::field::{PrimeModulus, DEFAULT_PRIME};
use mldeg::groebner::Budget;
use mldeg::harness::{self, RunStatus, VerifySpec};
use mldeg::model::{build_corank2_slice, Encoding, ModelInstance};
use mldeg::{ml_formula_int, ml_naive, ml_via_intersection};

#[derive(Parser)]
#[command(name = "mldeg", version, about = "ML-degrees of generic linear covariance models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Maximum S-pair reductions per Groebner run.
    #[arg(long, default_value_t = 1_000_000)]
    budget_pairs: u64,
    /// Hard wall-clock limit per Groebner run, in seconds.
    #[arg(long)]
    budget_seconds: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let mut budget = Budget::default().with_max_pairs(self.budget_pairs);
        if let Some(secs) = self.budget_seconds {
            budget = budget.with_wall_clock(Duration::from_secs(secs));
        }
        budget
    }
}

#[derive(Subcommand)]
enum Command {
    /// Count the critical solutions of one random instance.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u32,
        #[arg(long, default_value = "reduced")]
        encoding: Encoding,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Tabulate the closed form, the intersection assembly, and the naive
    /// (uncorrected) count.
    Formula {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n_min: u64,
        #[arg(long, default_value_t = 10)]
        n_max: u64,
    },
    /// Sweep (cell, seed, prime, encoding) tasks and grade each cell against
    /// the formula. Exit code 0: all MATCH, 1: any MISMATCH, 2: inconclusive.
    Verify {
        /// A cell to verify, as `n,m`; repeatable.
        #[arg(long = "cell", value_parser = parse_cell, required = true)]
        cells: Vec<(usize, usize)>,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3])]
        seeds: Vec<u64>,
        /// Comma-separated primes (all must be prime and below 2^31).
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u32>>,
        /// Comma-separated encodings to run per cell.
        #[arg(long, value_delimiter = ',', default_values = ["reduced", "eliminated"])]
        encodings: Vec<Encoding>,
        /// Worker threads (default: MLDEG_THREADS, then all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Write all run records as JSON, one object per line.
        #[arg(long)]
        out_json: Option<PathBuf>,
        /// Write all run records as CSV (same data as the JSON).
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Count the corank-2 determinantal slice and compare with binom(n+1,3).
    /// Exit code 1 on disagreement.
    DeltaOracle {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Write a system in the plain-text polynomial format.
    ExportSystem {
        #[arg(long)]
        n: usize,
        /// Model dimension; ignored for the corank slice.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u32,
        #[arg(long, default_value = "reduced")]
        encoding: Encoding,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_cell(s: &str) -> Result<(usize, usize), String> {
    let (n, m) = s
        .split_once(',')
        .ok_or_else(|| format!("expected 'n,m', got '{s}'"))?;
    let n = n.trim().parse().map_err(|e| format!("bad n: {e}"))?;
    let m = m.trim().parse().map_err(|e| format!("bad m: {e}"))?;
    Ok((n, m))
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Count {
            n,
            m,
            seed,
            prime,
            encoding,
            budget,
        } => {
            if encoding == Encoding::CorankSlice {
                bail!("corank-slice is not a model encoding; see delta-oracle");
            }
            let prime = PrimeModulus::new(prime)?;
            let record = harness::execute_cell(n, m, seed, prime, encoding, &budget.budget())?;
            println!("{}", record.to_json_line());
            Ok(if record.status == RunStatus::Counted { 0 } else { 1 })
        }
        Command::Formula { m, n_min, n_max } => {
            if n_min < 2 || n_min > n_max {
                bail!("need 2 <= n-min <= n-max");
            }
            println!("{:>5} {:>14} {:>18} {:>14}", "n", "ml_formula", "ml_intersection", "ml_naive");
            for n in n_min..=n_max {
                println!(
                    "{:>5} {:>14} {:>18} {:>14}",
                    n,
                    ml_formula_int(m, n)?,
                    ml_via_intersection(m, n)?,
                    ml_naive(m, n)?
                );
            }
            Ok(0)
        }
        Command::Verify {
            cells,
            seeds,
            primes,
            encodings,
            threads,
            out_json,
            out_csv,
            budget,
        } => {
            if encodings.iter().any(|&e| e == Encoding::CorankSlice) {
                bail!("corank-slice is not a model encoding; see delta-oracle");
            }
            let spec = VerifySpec {
                cells,
                seeds,
                primes: primes.unwrap_or_else(|| mldeg::VERIFICATION_PRIMES.to_vec()),
                encodings,
                budget: budget.budget(),
                threads,
            };
            let run = harness::run_verification(&spec)?;
            for record in &run.records {
                println!("{}", record.to_json_line());
            }
            for v in &run.verdicts {
                println!("cell n={} m={} expected={} verdict={}", v.n, v.m, v.expected, v.verdict);
            }
            println!("overall: {}", run.overall());
            if let Some(path) = out_json {
                let file = File::create(&path)
                    .with_context(|| format!("creating {}", path.display()))?;
                harness::write_json_records(&run.records, file)?;
            }
            if let Some(path) = out_csv {
                let file = File::create(&path)
                    .with_context(|| format!("creating {}", path.display()))?;
                harness::write_csv_records(&run.records, file)?;
            }
            Ok(run.exit_code())
        }
        Command::DeltaOracle {
            n,
            seed,
            prime,
            budget,
        } => {
            let prime = PrimeModulus::new(prime)?;
            let report = harness::run_delta_oracle(n, seed, prime, &budget.budget())?;
            println!("{}", report.to_json_line());
            Ok(if report.matches { 0 } else { 1 })
        }
        Command::ExportSystem {
            n,
            m,
            seed,
            prime,
            encoding,
            out,
        } => {
            let prime = PrimeModulus::new(prime)?;
            let system = match encoding {
                Encoding::CorankSlice => build_corank2_slice(n, seed, prime)?,
                other => {
                    let m = m.context("--m is required for model encodings")?;
                    ModelInstance::random(n, m, seed, prime)?.build(other)
                }
            };
            let text = system.to_text();
            match out {
                Some(path) => {
                    let mut file = File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    file.write_all(text.as_bytes())?;
                }
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}
