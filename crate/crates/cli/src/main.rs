//! `bilv`: command-line access to the index sets, brackets, integrals, Lax
//! operators and flows of the deformed Bogoyavlenskij–Itoh systems.

mod commands;
mod input;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bilv_core::exactalg::{parse_rational, Rational};
use bilv_core::poisson::ConstantStructure;
use bilv_core::sampler::DEFAULT_SEED;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commands::{LaxCheck, OutFormat, Outcome, SimulateArgs};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or input files; exit status 2.
    Config(String),
    /// The computation ran but could not finish; exit status 1.
    Failed(String),
}

impl From<bilv_core::Error> for CliError {
    fn from(e: bilv_core::Error) -> CliError {
        CliError::Config(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "bilv", version, about = "Deformed Bogoyavlenskij–Itoh Lotka–Volterra systems")]
struct Cli {
    /// Seed for every sampled point.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    /// Output path; `-` writes to standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Subcommand)]
enum Command {
    /// Print the tuples of S_ℓ (or S'_ℓ), one per line.
    Sets {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        prime: bool,
    },
    /// Report the triples where the Jacobi identity fails for {,} + {,}_b.
    Jacobi {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        b_file: PathBuf,
        /// Accept pairs outside the admissible set.
        #[arg(long)]
        any_pair: bool,
    },
    /// Write the integrals K_0^b, …, K_k^b as JSON.
    Integrals {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with_all = ["c", "free"])]
        b_file: Option<PathBuf>,
        /// Deformation constants `c1,...,cn`, summing to zero.
        #[arg(long)]
        c: Option<String>,
        #[arg(long, requires = "c")]
        free: Option<String>,
    },
    /// Check the Lax equation, the determinant or the characteristic polynomial.
    Lax {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        b_file: Option<PathBuf>,
        #[arg(long, value_enum)]
        check: LaxCheck,
    },
    /// Integrate the deformed flow and record the integrals along the way.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        c: String,
        #[arg(long, default_value = "0")]
        free: String,
        /// Initial state; sampled from the seed when omitted.
        #[arg(long)]
        x0: Option<String>,
        #[arg(long)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
        #[arg(long, default_value_t = 1e-12)]
        abs_tol: f64,
        #[arg(long)]
        stride: Option<f64>,
        #[arg(long, value_enum, default_value = "csv")]
        out_format: OutFormat,
    },
    /// Check the correspondence with the Veselov–Shabat chain.
    VsCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        b_file: Option<PathBuf>,
    },
    /// Run every identity check for one k.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

fn rational(flag: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Config(format!("--{flag}: {e}")))
}

fn structure(k: usize, b_file: Option<&PathBuf>) -> Result<ConstantStructure, CliError> {
    match b_file {
        Some(p) => input::read_b_file(p, k, true)?.admissible(),
        None => Ok(ConstantStructure::symbolic(k)),
    }
}

fn dispatch(command: Command, seed: u64) -> Result<(Outcome, String), CliError> {
    let outcome = |c: &Common, o: Outcome| (o, c.out.clone());
    let k_of = |c: &Common| c.k as usize;
    Ok(match command {
        Command::Sets { common, ell, prime } => outcome(&common, commands::sets(k_of(&common), ell, prime)?),
        Command::Jacobi { common, b_file, any_pair } => {
            let params = input::read_b_file(&b_file, k_of(&common), !any_pair)?;
            outcome(&common, commands::jacobi(&params.any_support()?))
        }
        Command::Integrals { common, b_file, c, free } => {
            let k = k_of(&common);
            let b = match (&b_file, &c) {
                (Some(_), _) => structure(k, b_file.as_ref())?,
                (None, Some(c)) => {
                    let free = rational("free", free.as_deref().unwrap_or("0"))?;
                    commands::structure_from_c(k, input::parse_rational_list(c)?, &free)?
                }
                (None, None) => ConstantStructure::symbolic(k),
            };
            outcome(&common, commands::integrals(&b))
        }
        Command::Lax { common, b_file, check } => {
            let b = structure(k_of(&common), b_file.as_ref())?;
            outcome(&common, commands::lax(&b, check))
        }
        Command::Simulate { common, c, free, x0, t_end, rel_tol, abs_tol, stride, out_format } => {
            let args = SimulateArgs {
                c: input::parse_rational_list(&c)?,
                free: rational("free", &free)?,
                x0: x0.as_deref().map(input::parse_f64_list).transpose()?,
                t_end,
                rel_tol,
                abs_tol,
                stride,
                format: out_format,
                seed,
            };
            outcome(&common, commands::simulate(k_of(&common), args)?)
        }
        Command::VsCheck { common, b_file } => {
            let b = structure(k_of(&common), b_file.as_ref())?;
            outcome(&common, commands::vs_check(&b))
        }
        Command::Verify { common } => {
            let k = k_of(&common);
            let results = verify::run(k, seed);
            let failed: Vec<_> = results.iter().filter(|r| r.status == verify::Status::Fail).map(|r| r.name).collect();
            let passed = results.iter().filter(|r| r.status == verify::Status::Pass).count();
            let mut report = serde_json::to_string_pretty(&json!({ "k": k, "seed": seed, "checks": results })).unwrap();
            report.push('\n');
            let summary = if failed.is_empty() {
                format!("verify k = {k}: {passed} passed, {} skipped", results.len() - passed)
            } else {
                format!("verify k = {k}: failed {}", failed.join(", "))
            };
            outcome(&common, Outcome { report, summary, ok: failed.is_empty() })
        }
    })
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("BILV_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("BILV_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn emit(outcome: &Outcome, out: &str) -> Result<(), CliError> {
    if out == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout
            .write_all(outcome.report.as_bytes())
            .map_err(|e| CliError::Failed(e.to_string()))?;
        eprintln!("{}", outcome.summary);
    } else {
        std::fs::write(out, &outcome.report).map_err(|e| CliError::Config(format!("cannot write {out}: {e}")))?;
        println!("{}", outcome.summary);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads()
        .and_then(|_| dispatch(cli.command, cli.seed))
        .and_then(|(outcome, out)| emit(&outcome, &out).map(|_| outcome.ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
