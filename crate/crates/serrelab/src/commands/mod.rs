//! Subcommand handlers. Each one validates its input, computes, and streams
//! payloads into a [`Sink`] in input order.

pub mod census;
pub mod cheb;
pub mod ladder;
pub mod weights;

use std::io::Write;

use rayon::ThreadPool;
use serrelab_core::numth::SieveConfig;

use crate::args::{Command, Format};
use crate::cache::Cache;
use crate::output::{EmitError, Sink};

/// Shared state for one invocation.
pub struct Ctx {
    pub cache: Cache,
    pub pool: ThreadPool,
    pub sieve: SieveConfig,
    pub format: Format,
}

/// How a command ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Clean,
    /// Ran to completion but found failures.
    Failures,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input, reported before or instead of any output.
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Emit(#[from] EmitError),
}

impl CliError {
    pub fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Subcommand name as it appears in the `command` field.
pub fn command_name(cmd: &Command) -> &'static str {
    use crate::args::{ChebCommand::*, LadderCommand::*, WeightsCommand::*};
    match cmd {
        Command::Ladder(Cert { .. }) => "ladder cert",
        Command::Ladder(Verify { .. }) => "ladder verify",
        Command::Ladder(Chain { .. }) => "ladder chain",
        Command::Ladder(PaperTable { .. }) => "ladder paper-table",
        Command::Neben { .. } => "neben",
        Command::Cheb(Pi { .. }) => "cheb pi",
        Command::Cheb(Audit { .. }) => "cheb audit",
        Command::Cheb(Gaps { .. }) => "cheb gaps",
        Command::Weights(Twist { .. }) => "weights twist",
        Command::Weights(Dihedral { .. }) => "weights dihedral",
        Command::Census { .. } => "census",
    }
}

/// Whether the command's records are flat enough for csv.
pub fn supports_csv(cmd: &Command) -> bool {
    !matches!(cmd, Command::Ladder(_) | Command::Neben { .. })
}

pub fn dispatch<W: Write>(ctx: &Ctx, cmd: &Command, sink: &mut Sink<W>) -> Result<Status, CliError> {
    match cmd {
        Command::Ladder(c) => ladder::run(ctx, c, sink),
        Command::Neben { big_p, pn, k } => ladder::neben(*big_p, *pn, *k, sink),
        Command::Cheb(c) => cheb::run(ctx, c, sink),
        Command::Weights(c) => weights::run(c, sink),
        Command::Census { p, bound } => census::run(ctx, *p, *bound, sink),
    }
}
