//! `tropen` — exact entropy tools for tropical (min-plus) holonomic
//! sequences, on the command line.
//!
//! Exit codes: 0 success, 1 validation failure (a check fails, lemma
//! violations found), 2 input error (unreadable or malformed files, wrong
//! order, bad ranges).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use tropen::dimension::{entropy_scan, lemma_predicates, max_cell};
use tropen::poly::{format_rational, parse_rational, Rational};
use tropen::tropical::{
    case1_slack_count, case2_slack_count, check_sequence, classify, extend_greedy, witness_case1,
    witness_case2, EntropyCase, EntropyClass, HolonomicSystem, Sequence,
};

#[derive(Parser)]
#[command(
    name = "tropen",
    version,
    about = "Exact entropy tools for tropical (min-plus) holonomic sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a second-order system into the entropy trichotomy
    Classify {
        /// System JSON file: {"order": 2, "coeffs": [[..], [..], [..]]}
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check a sequence against the min-attained-twice relation
    Check {
        #[arg(long)]
        system: PathBuf,
        /// Sequence JSON file: array of rational strings
        #[arg(long)]
        sequence: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Generate a member of the witness family of a positive-entropy system
    Witness {
        #[arg(long)]
        system: PathBuf,
        /// Length of the generated sequence
        #[arg(long)]
        n: usize,
        /// Seed for randomized nonnegative slacks (used when --slacks is absent)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Slack JSON file: array of nonnegative rational strings
        #[arg(long)]
        slacks: Option<PathBuf>,
        /// Prefix sequence JSON file (case 2); defaults to a greedily built one
        #[arg(long)]
        prefix: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compute dim(W_N) exactly
    Dim {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        n: usize,
        /// Worker threads for the pattern search
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Scan dim(W_N) over a range of N
    Scan {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Validate the structural interval lemmas over all feasible patterns
    Lemmas {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        n: usize,
        /// Accepted for symmetry; the lemma enumeration runs sequentially
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

const OK: ExitCode = ExitCode::SUCCESS;

fn validation_failed() -> ExitCode {
    ExitCode::from(1)
}

#[derive(Serialize)]
struct ClassifyOut {
    case: String,
    entropy: String,
    #[serde(rename = "D")]
    d: Vec<String>,
    #[serde(rename = "E")]
    e: Vec<String>,
    j0: String,
}

#[derive(Serialize)]
struct CheckOut {
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_failing_window: Option<usize>,
}

#[derive(Serialize)]
struct WitnessOut {
    case: String,
    n: usize,
    sequence: Vec<String>,
    verified: bool,
}

#[derive(Serialize)]
struct DimOut {
    n: usize,
    dim: usize,
    witness: Vec<String>,
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Classify { system, format } => {
            json_only(format, "classify")?;
            let sys = load_system(&system)?;
            let class = classify_second_order(&sys)?;
            let out = ClassifyOut {
                case: class.case.to_string(),
                entropy: format_rational(&class.entropy),
                d: class.d.clone().into(),
                e: class.e.clone().into(),
                j0: class.j0.to_string(),
            };
            print_json(&out);
            Ok(OK)
        }
        Command::Check {
            system,
            sequence,
            format,
        } => {
            json_only(format, "check")?;
            let sys = load_system(&system)?;
            let seq = load_sequence(&sequence)?;
            let result = check_sequence(&sys, &seq);
            let out = CheckOut {
                valid: result.is_valid(),
                first_failing_window: result.first_failure(),
            };
            print_json(&out);
            if result.is_valid() {
                Ok(OK)
            } else {
                Ok(validation_failed())
            }
        }
        Command::Witness {
            system,
            n,
            seed,
            slacks,
            prefix,
            format,
        } => {
            json_only(format, "witness")?;
            let sys = load_system(&system)?;
            let class = classify_second_order(&sys)?;
            let (a, b, c) = sys.second_order_coeffs().expect("validated order 2");
            let w = match class.case {
                EntropyCase::Case1 => {
                    let slacks =
                        resolve_slacks(slacks.as_deref(), case1_slack_count(n), seed)?;
                    witness_case1(a, b, c, n, Rational::from_integer(0.into()), &slacks)
                        .map_err(|e| e.to_string())?
                }
                EntropyCase::Case2 => {
                    let j0 = class.j0_usize().map_err(|e| e.to_string())?;
                    let prefix = match prefix {
                        Some(path) => load_sequence(&path)?,
                        None => default_prefix(&sys, 4 * j0 + 1)?,
                    };
                    let slacks =
                        resolve_slacks(slacks.as_deref(), case2_slack_count(n, j0), seed)?;
                    witness_case2(a, b, c, n, &prefix, &slacks).map_err(|e| e.to_string())?
                }
                EntropyCase::Case3 => {
                    return Err(
                        "witness generation needs a positive-entropy system (case 1 or 2); \
                         this one classifies as Case3"
                            .to_string(),
                    )
                }
            };
            let verified = check_sequence(&sys, &w).is_valid();
            let out = WitnessOut {
                case: class.case.to_string(),
                n,
                sequence: w.into(),
                verified,
            };
            print_json(&out);
            if verified {
                Ok(OK)
            } else {
                eprintln!("error: generated sequence failed self-verification");
                Ok(validation_failed())
            }
        }
        Command::Dim {
            system,
            n,
            jobs,
            format,
        } => {
            let sys = load_system(&system)?;
            let jobs = check_jobs(jobs)?;
            let cell = max_cell(&sys, n, jobs);
            match format {
                Format::Json => print_json(&DimOut {
                    n,
                    dim: cell.dim,
                    witness: cell.witness.into(),
                }),
                Format::Csv => print!("N,dim\n{},{}\n", n, cell.dim),
            }
            Ok(OK)
        }
        Command::Scan {
            system,
            n_min,
            n_max,
            jobs,
            format,
        } => {
            let sys = load_system(&system)?;
            let jobs = check_jobs(jobs)?;
            let report = entropy_scan(&sys, n_min, n_max, jobs).map_err(|e| e.to_string())?;
            match format {
                Format::Json => print_json(&report),
                Format::Csv => print!("{}", report.to_csv()),
            }
            Ok(OK)
        }
        Command::Lemmas {
            system,
            n,
            jobs,
            format,
        } => {
            json_only(format, "lemmas")?;
            check_jobs(jobs)?;
            let sys = load_system(&system)?;
            let report = lemma_predicates(&sys, n).map_err(|e| e.to_string())?;
            let clean = report.violations.is_empty();
            print_json(&report);
            if clean {
                Ok(OK)
            } else {
                Ok(validation_failed())
            }
        }
    }
}

fn json_only(format: Format, command: &str) -> Result<(), String> {
    if format == Format::Csv {
        return Err(format!("{command} only supports --format json"));
    }
    Ok(())
}

fn check_jobs(jobs: usize) -> Result<usize, String> {
    if jobs == 0 {
        return Err("--jobs must be at least 1".to_string());
    }
    Ok(jobs)
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("report serializes")
    );
}

fn load_system(path: &Path) -> Result<HolonomicSystem, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid system in {}: {e}", path.display()))
}

fn load_sequence(path: &Path) -> Result<Sequence, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid sequence in {}: {e}", path.display()))
}

fn classify_second_order(sys: &HolonomicSystem) -> Result<EntropyClass, String> {
    let (a, b, c) = sys.second_order_coeffs().ok_or_else(|| {
        format!(
            "this command needs a second-order system, got order {}",
            sys.order()
        )
    })?;
    Ok(classify(a, b, c))
}

/// Slacks from a file, or reproducible nonnegative rationals from the seed.
fn resolve_slacks(
    path: Option<&Path>,
    count: usize,
    seed: u64,
) -> Result<Vec<Rational>, String> {
    match path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let strings: Vec<String> = serde_json::from_str(&text)
                .map_err(|e| format!("invalid slack list in {}: {e}", path.display()))?;
            let slacks = strings
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| format!("invalid slack in {}: {e}", path.display()))?;
            if let Some(bad) = slacks.iter().position(|s| s.is_negative()) {
                return Err(format!("slack {bad} is negative"));
            }
            if slacks.len() != count {
                return Err(format!(
                    "expected {count} slacks for this length, got {}",
                    slacks.len()
                ));
            }
            Ok(slacks)
        }
        None => {
            let mut rng = StdRng::seed_from_u64(seed);
            Ok((0..count)
                .map(|_| {
                    Rational::new(rng.gen_range(0i64..=12).into(), rng.gen_range(1i64..=4).into())
                })
                .collect())
        }
    }
}

/// A valid prefix of the requested length, grown greedily from zeros.
fn default_prefix(sys: &HolonomicSystem, len: usize) -> Result<Sequence, String> {
    let mut w = Sequence::new(vec![
        Rational::from_integer(0.into());
        len.min(sys.order())
    ]);
    while w.len() < len {
        w = extend_greedy(sys, &w).map_err(|e| e.to_string())?;
    }
    Ok(w)
}
