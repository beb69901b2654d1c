//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serrelab_core::numth::DEFAULT_SIEVE_LIMIT;
use serrelab_core::Rational;

#[derive(Debug, Parser)]
#[command(name = "serrelab", version, about = "Audits the numerical skeleton of the level-one Serre induction")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::JsonLines)]
    pub format: Format,
    /// Cache directory for sieves and bases.
    #[arg(long, global = true, env = "SERRELAB_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Compute everything in memory.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=1024))]
    pub threads: Option<u32>,
    /// Largest bound any sieve may be asked for.
    #[arg(long, global = true, default_value_t = DEFAULT_SIEVE_LIMIT)]
    pub sieve_limit: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    JsonLines,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Induction-step certificates.
    #[command(subcommand)]
    Ladder(LadderCommand),
    /// Nebentype exponent selection for one weight.
    Neben {
        #[arg(long = "P")]
        big_p: u64,
        #[arg(long)]
        pn: u64,
        #[arg(long)]
        k: u64,
    },
    /// Prime-counting and prime-gap audits.
    #[command(subcommand)]
    Cheb(ChebCommand),
    /// Serre-weight twists and the dihedral criterion.
    #[command(subcommand)]
    Weights(WeightsCommand),
    /// Count level-one eigensystems mod p.
    Census {
        #[arg(long)]
        p: u64,
        /// Separator bound override.
        #[arg(long = "L")]
        bound: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum LadderCommand {
    /// Certificate for one prime.
    Cert { p: u64 },
    /// Verify every prime in a range.
    Verify {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Follow the ladder upward.
    Chain {
        #[arg(long)]
        start: u64,
        #[arg(long)]
        limit: u64,
    },
    /// The small-weight exponent table.
    PaperTable {
        /// Exit 1 when a tabulated exponent is flagged.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum ChebCommand {
    /// Count primes up to x.
    Pi {
        #[arg(long)]
        x: u64,
    },
    /// Audit A x / ln x <= pi(x) <= B x / ln x for 30 < x <= max.
    Audit {
        #[arg(long)]
        max: u64,
        #[arg(long = "A", value_parser = parse_rational, default_value = "921/1000")]
        a: Rational,
        #[arg(long = "B", value_parser = parse_rational, default_value = "5526/5000")]
        b: Rational,
    },
    /// Audit p_next <= a p over consecutive primes.
    Gaps {
        #[arg(long, value_parser = parse_rational)]
        a: Rational,
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum WeightsCommand {
    /// Twist a weight into the ordinary range.
    Twist {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        shape: Shape,
    },
    /// Dihedral criterion and class number.
    Dihedral {
        #[arg(long)]
        p: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    OrdinaryNonsplit,
    Split,
    Irreducible,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}
