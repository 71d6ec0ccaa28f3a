mod builders;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use qarith_core::Error;

/// Build, simulate and inspect quantum arithmetic circuits.
#[derive(Debug, Parser)]
#[command(name = "qarith", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Measurement shots.
    #[arg(long, global = true, default_value_t = 1024)]
    pub shots: u64,

    /// Seed for sampling (ChaCha8).
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Signed ripple-carry addition a + b.
    #[command(allow_negative_numbers = true)]
    Add {
        a: i64,
        b: i64,
        /// Magnitude bits per operand.
        #[arg(long)]
        width: Option<usize>,
    },
    /// Signed subtraction a - b.
    #[command(allow_negative_numbers = true)]
    Sub {
        a: i64,
        b: i64,
        #[arg(long)]
        width: Option<usize>,
    },
    /// Shift-and-add multiplication (signed when an operand is negative).
    #[command(allow_negative_numbers = true)]
    Mul {
        a: i64,
        b: i64,
        #[arg(long)]
        width: Option<usize>,
    },
    /// Quotient and remainder a / b.
    Div {
        a: u64,
        b: u64,
        #[arg(long)]
        width: Option<usize>,
    },
    /// Fourier-basis addition of a constant, x + a mod 2^width.
    ConstAdd {
        x: u64,
        a: u64,
        #[arg(long)]
        width: Option<usize>,
    },
    /// (x + a) mod N with a classical constant a.
    ModAdd {
        x: u64,
        a: u64,
        #[arg(long)]
        modulus: u64,
    },
    /// a·x mod N with a classical constant a.
    ModMul {
        x: u64,
        a: u64,
        #[arg(long)]
        modulus: u64,
    },
    /// a^x mod N.
    ModExp {
        a: u64,
        x: u64,
        #[arg(long)]
        modulus: u64,
    },
    /// (x + y) mod N with both operands quantum.
    VarModAdd {
        x: u64,
        y: u64,
        #[arg(long)]
        modulus: u64,
    },
    /// 2x mod N for odd N.
    ModDouble {
        x: u64,
        #[arg(long)]
        modulus: u64,
    },
    /// x·y mod N for odd N.
    VarModMul {
        x: u64,
        y: u64,
        #[arg(long)]
        modulus: u64,
    },
    /// x² mod N for odd N.
    ModSquare {
        x: u64,
        #[arg(long)]
        modulus: u64,
    },
    /// Compare x against a constant: lt, le, ge, gt or eq.
    Compare {
        x: u64,
        a: u64,
        #[arg(long, default_value = "lt")]
        relation: String,
        #[arg(long)]
        width: Option<usize>,
    },
    /// x mod M and the flag x < M, with M in [2^(n-1), 2^n).
    ModReduce {
        x: u64,
        #[arg(long)]
        modulus: u64,
    },
    /// Phase estimation of Phase(2π·theta) with a |1⟩ eigenstate.
    Qpe {
        /// Phase in turns, in [0, 1).
        theta: f64,
        /// Counting qubits.
        #[arg(long, default_value_t = 3)]
        width: usize,
    },
    /// Factor N by order finding.
    Factor {
        n: u64,
        /// full, fast or auto.
        #[arg(long, default_value = "auto")]
        backend: String,
        /// Fix the base instead of drawing it at random.
        #[arg(long)]
        base: Option<u64>,
        /// Counting register width (default 2⌈log₂N⌉).
        #[arg(long)]
        t: Option<usize>,
        /// Use the most likely nonzero outcome instead of sampling.
        #[arg(long)]
        argmax: bool,
        #[arg(long, default_value_t = qarith_core::shor::DEFAULT_MAX_ATTEMPTS)]
        max_attempts: usize,
    },
    /// Gate census of a named builder.
    Resources(BuilderArgs),
    /// Text dump of a named builder's circuit.
    Dump(BuilderArgs),
}

#[derive(Debug, Args)]
pub struct BuilderArgs {
    /// Builder name (qft, compare, clean-adder, shor, ...).
    pub builder: String,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub modulus: Option<u64>,
    /// Classical constant (or base for mod-exp and shor).
    #[arg(long)]
    pub constant: Option<u64>,
    /// Phase in turns for the qpe builder.
    #[arg(long, default_value_t = 0.125)]
    pub theta: f64,
}

const EXIT_USAGE: u8 = 64;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Domain(_) => 2,
        Error::Capacity(_) => 3,
        Error::Structural(_) => EXIT_USAGE,
        Error::Exhausted { .. } => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let (Error::Exhausted { report }, true) = (&e, cli.common.json) {
                print!("{}", commands::pretty(report.as_ref()));
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
