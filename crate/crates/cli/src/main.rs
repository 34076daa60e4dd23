//! `coset-spectra`: builds codes, computes spectra and checks the coset
//! bounds, writing JSON or CSV reports.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use coset_spectra::experiments::DEFAULT_COSET_BUDGET_LOG2;
use coset_spectra::{CodeFamily, DEFAULT_ENUMERATION_BUDGET};

#[derive(Debug, Parser)]
#[command(
    name = "coset-spectra",
    version,
    about = "Weight spectra of binary codes and their cosets"
)]
struct Cli {
    /// Number of worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Simplex,
    Hamming,
    Bch,
    ExtHadamard,
    ExtDualBch,
    Random,
}

/// Selects a code, either by family or from a file in the text format.
#[derive(Debug, Clone, Args)]
struct CodeArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Seed for random codes and for sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Read the code from a file written by `construct`.
    #[arg(long, conflicts_with = "family")]
    input: Option<PathBuf>,
    /// Largest number of codewords enumerated.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a generator matrix in the code text format.
    Construct(CodeArgs),
    /// Weight distribution as CSV.
    Spectrum {
        #[command(flatten)]
        code: CodeArgs,
        /// Spectrum of the dual code, through the MacWilliams transform.
        #[arg(long)]
        dual: bool,
    },
    /// Average distance of coset spectra from the binomial law.
    CosetAvg {
        #[command(flatten)]
        code: CodeArgs,
        /// Sample this many cosets instead of visiting all of them.
        #[arg(long)]
        samples: Option<u64>,
        /// Grid size of the L∞ certificate.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Largest redundancy averaged exhaustively.
        #[arg(long, default_value_t = DEFAULT_COSET_BUDGET_LOG2)]
        coset_budget: usize,
        /// Write one CSV row per coset to this file.
        #[arg(long)]
        dump_per_coset: Option<PathBuf>,
    },
    /// Check the dominating polynomials, the linear program and the
    /// mean-square bound on a grid of c values. Without a code, `--n` and
    /// `--t` give the parameters.
    VerifyBounds {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 201)]
        grid: usize,
    },
    /// Primal and dual weight enumerators with the dual bilateral distance.
    Macwilliams(CodeArgs),
    /// Compare the coset mean-square deviation with its spectral form.
    MseIdentity {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 65)]
        grid: usize,
    },
    /// Mean squared distance of random codes of size 2^k from the binomial law.
    Ensemble {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fraction of random codes of size n^c whose dual has the expected
    /// bilateral distance.
    GvCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Everything needed to reproduce a run; embedded in every report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub version: &'static str,
    pub code: Option<CodeFamily>,
    pub input: Option<PathBuf>,
    pub n: Option<usize>,
    pub t: Option<usize>,
    pub k: Option<usize>,
    pub c: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub grid: Option<usize>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub enumeration_budget: Option<u64>,
    pub coset_budget_log2: Option<usize>,
}

/// A finished run: the report text and whether every checked inequality held.
pub struct Outcome {
    pub text: String,
    pub verified: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| commands::run(&cli)),
            Err(e) => Err(format!("cannot start {threads} threads: {e}")),
        },
        None => commands::run(&cli),
    };
    let outcome = match result {
        Ok(outcome) => outcome,
        Err(message) => {
            let _ = writeln!(std::io::stderr(), "error: {message}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => {
            std::fs::write(path, &outcome.text).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => std::io::stdout()
            .write_all(outcome.text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(message) = written {
        let _ = writeln!(std::io::stderr(), "error: {message}");
        return ExitCode::from(2);
    }
    if outcome.verified {
        ExitCode::SUCCESS
    } else {
        let _ = writeln!(std::io::stderr(), "verification failed; see the report");
        ExitCode::from(1)
    }
}
