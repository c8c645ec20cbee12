mod commands;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use minorweave::reconstruct::Method;

#[derive(Parser, Debug)]
#[command(name = "minorweave", version, about = "Matrix entries from connected minors: paths, tilings, elliptope")]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Catalan,
    Schroder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Catalan,
    Schroder,
    Tiling,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Catalan => Method::Catalan,
            MethodArg::Schroder => Method::Schroder,
            MethodArg::Tiling => Method::Tiling,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Relation,
    Roundtrip,
    Bijection,
    Fibers,
    Elliptope,
    Counts,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate Catalan or Schröder paths between two nodes, one JSON object per line.
    Paths {
        #[arg(long, value_enum, default_value_t = Variant::Catalan)]
        variant: Variant,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Enumerate domino tilings of the half Aztec diamond with black boxes `from` and `to`.
    Tilings {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Print the Laurent polynomial for entry (i, j).
    Formula {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Catalan)]
        method: MethodArg,
    },
    /// Run a verification suite; exits 1 on the first failing trial.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rebuild a matrix from a minor table, or round-trip a rational matrix.
    Reconstruct {
        /// Minor table JSON (keys like "p[2,3]", values "num/den").
        #[arg(long, conflicts_with = "matrix_file", required_unless_present = "matrix_file")]
        table_file: Option<PathBuf>,
        /// Rational matrix JSON (rows of "num/den" strings); runs the round trip.
        #[arg(long)]
        matrix_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MethodArg::Catalan)]
        method: MethodArg,
    },
    /// Apply Ψ to a partial-correlation vector (JSON object keyed "i,j").
    Psi {
        #[arg(long)]
        rho_file: PathBuf,
    },
    /// Recover partial correlations from a correlation matrix (JSON rows of floats).
    PsiInv {
        #[arg(long)]
        matrix_file: PathBuf,
    },
    /// Draw correlation matrices as Ψ of seeded partial correlations.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        low: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        high: f64,
        /// Use the point mass at this value for every coordinate.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<f64>,
    },
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    /// A check ran and did not hold.
    Verification(String),
    /// Bad flags or unreadable input.
    Usage(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("MINORWEAVE_THREADS") {
        match threads.parse::<usize>() {
            Ok(t) if t > 0 => {
                rayon::ThreadPoolBuilder::new().num_threads(t).build_global().ok();
            }
            _ => {
                eprintln!("error: MINORWEAVE_THREADS must be a positive integer, got {threads:?}");
                return ExitCode::from(2);
            }
        }
    }
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: --out {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = commands::run(&cli, &mut out);
    let flushed = out.flush();
    match result {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(2),
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
