use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lsl_core::arith::Rational;
use num_bigint::BigInt;

#[derive(Debug, Parser)]
#[command(name = "lsl", version, about = "Farey sequences, lattice counts and large sieve bound verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for random instances and amplitudes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output format; `selftest` prints one line per criterion unless this is given.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Farey sequence of order Q as "num/den" strings.
    Farey {
        #[arg(long)]
        order: u64,
    },
    /// r(n), or the largest r(n) for n up to a bound.
    Rsum(RsumArgs),
    /// Box points on a circle and the three coefficient bounds.
    Circle(CircleArgs),
    /// Additive counts A_Y(k) for y_i = q i^2 + p i, M < i <= M + N.
    Ay(WindowArgs),
    /// Single-sum inequality on a spec file, or on a random sweep.
    VerifyLemma(VerifyArgs),
    /// Quadratic-form inequality on a spec file, or on a random sweep.
    VerifyTheorem(VerifyArgs),
    /// Farey-form inequality on an instance spec, or on a random sweep.
    VerifyCorollary(VerifyArgs),
    /// Ratio table lhs / ((NQ + Q^2) ||a||^2) for P(T) = T^2, a_i = 1.
    Sharpness {
        #[arg(long = "Qmax")]
        qmax: u64,
        #[arg(long = "Nmax")]
        nmax: u64,
    },
    /// Runs the acceptance suite.
    Selftest,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct RsumArgs {
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long = "sup-upto")]
    pub sup_upto: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CircleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c1: BigInt,
    #[arg(long, allow_hyphen_values = true)]
    pub c2: BigInt,
    #[arg(long, allow_hyphen_values = true)]
    pub c3: BigInt,
    /// Slope m as "num/den" or an integer.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Rational,
    /// Box half-width, "num/den" or an integer.
    #[arg(long = "H")]
    pub h: Rational,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long)]
    pub q: BigInt,
    #[arg(long, allow_hyphen_values = true)]
    pub p: BigInt,
    #[arg(long = "M", allow_hyphen_values = true)]
    pub m: BigInt,
    #[arg(long = "N")]
    pub n: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON instance file; without it a seeded random sweep is run.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Number of random instances when no spec is given.
    #[arg(long, default_value_t = 100, conflicts_with = "spec")]
    pub n: u64,
}
