//! `zpadd` command-line front end. Every command prints line-delimited
//! records (`kind key=value ...`) in a fixed field order, or CSV where a
//! table is requested. Exit codes: 0 success, 1 a counterexample or
//! violation record was printed, 2 invalid input.

mod commands;
mod record;

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use zpadd::ZpSet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "zpadd", version, about = "Sumsets, small-doubling checks and m-sum-free sets in Z/pZ")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// CSV output for tabular commands.
    #[arg(long, global = true)]
    pub csv: bool,
}

/// A set literal `p:a1,...,ak` with an optional `--p` that must agree.
#[derive(Debug, Clone, Args)]
pub struct SetArg {
    #[arg(long)]
    pub p: Option<u64>,
    /// Set literal `p:a1,a2,...,ak`.
    #[arg(long)]
    pub set: ZpSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileName {
    Conj11,
    Thm12,
    Thm13,
    Thm21,
    Stress,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Standard,
    Alternative,
    Best,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sumset, doubling data and covering witness of a set.
    Sumset {
        #[command(flatten)]
        set: SetArg,
        /// Second summand; defaults to the set itself.
        #[arg(long)]
        with: Option<ZpSet>,
    },
    /// Premise/conclusion check over all subsets or seeded samples.
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "conj11")]
        profile: ProfileName,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        /// Fixed density for thm13; omitted means η = |A|/p per set.
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long, default_value_t = 0.75)]
        epsilon: f64,
        /// Doubling allowance for the stress profile.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Numeric constants with residuals.
    Constants {
        #[command(subcommand)]
        which: ConstantCommand,
    },
    /// Explicit m-sum-free constructions.
    Construct {
        #[command(subcommand)]
        which: ConstructCommand,
    },
    /// Maximum m-sum-free density: exact search or lower/upper bounds.
    Dm {
        #[arg(long)]
        p: u64,
        /// Omitted with --csv sweeps m over [2, p−2].
        #[arg(long)]
        m: Option<i64>,
        #[arg(long, conflicts_with = "bounds")]
        exact: bool,
        #[arg(long)]
        bounds: bool,
        /// Hill-climb rounds for the lower bound beyond exact range.
        #[arg(long, default_value_t = 2000)]
        rounds: u32,
    },
    /// Exhaustive progression-intersection check.
    Apinter {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        alpha: f64,
        /// Every interval length above the minimum, not only the minimum.
        #[arg(long)]
        all_j: bool,
    },
    /// Exponential sums, the Parseval-type identity and half-arc bounds.
    Spectral {
        #[command(flatten)]
        set: SetArg,
        /// Single frequency; omitted means every nonzero frequency.
        #[arg(long)]
        d: Option<i64>,
    },
    /// Smallest dilate of a set inside [|A|, p − |A|].
    SumfreeStructure {
        #[command(flatten)]
        set: SetArg,
    },
    /// Structure check on seeded dense sum-free samples.
    SumfreeHarness {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0.313)]
        density: f64,
        #[arg(long, default_value_t = 100)]
        samples: u64,
    },
    /// The ratio set (A + A)/A and its coverage of F_p minus {−1, 0, 1}.
    RatioSet {
        #[command(flatten)]
        set: SetArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConstantCommand {
    /// Positive root of the doubling cubic for a given ε.
    Alpha {
        #[arg(long, default_value_t = 0.75)]
        epsilon: f64,
    },
    /// α(η, p); with --csv a curve over η.
    AlphaEta {
        #[arg(long)]
        p: u64,
        /// Omitted with --csv samples η on a grid.
        #[arg(long)]
        eta: Option<f64>,
    },
    /// γ(p, η).
    Gamma {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        eta: f64,
    },
    /// Fixed point c(p) bounding m-sum-free densities.
    Cp {
        #[arg(long)]
        p: u64,
    },
    /// Limit of c(p) as p grows.
    Limit,
}

#[derive(Debug, Subcommand)]
pub enum ConstructCommand {
    /// The interval (2p/(m²−4), mp/(m²−4)).
    Interval {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
    },
    /// Residue-class construction modulo p = 4m²n + 1.
    Schoen {
        #[arg(long)]
        m: u64,
        #[arg(long, required_unless_present = "auto_n", conflicts_with = "auto_n")]
        n: Option<u64>,
        /// Smallest n making 4m²n + 1 prime.
        #[arg(long)]
        auto_n: bool,
        #[arg(long, value_enum, default_value = "best")]
        variant: Variant,
    },
}

#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Io(io::Error),
}

impl From<zpadd::Error> for Failure {
    fn from(e: zpadd::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Whether the command printed a counterexample or violation record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Clean,
    Violation,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match commands::dispatch(&cli, out, err) {
        Ok(Status::Clean) => EXIT_OK,
        Ok(Status::Violation) => EXIT_VIOLATION,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}
