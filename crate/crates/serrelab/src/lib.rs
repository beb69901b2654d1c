//! Command-line verifier for `serrelab-core`: argument handling, json-lines
//! and csv output, a content-addressed cache, and a worker pool.
//!
//! Exit codes: 0 on success, 1 when a verification finds failures, 2 on a
//! usage error.

pub mod args;
pub mod cache;
pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use serrelab_core::numth::SieveConfig;

use crate::args::{Cli, Format};
use crate::cache::Cache;
use crate::commands::{command_name, dispatch, supports_csv, CliError, Ctx, Status};
use crate::output::Sink;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn default_cache_dir() -> Option<PathBuf> {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("serrelab"))
}

/// Parses `argv`, runs the command and writes records to `out` and
/// diagnostics to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                let _ = writeln!(err, "error: a subcommand is required; see --help");
                return EXIT_USAGE;
            }
            let text = e.to_string();
            let _ = writeln!(err, "{}", text.lines().next().unwrap_or("error: invalid arguments"));
            return EXIT_USAGE;
        }
    };
    let g = &cli.global;
    if g.format == Format::Csv && !supports_csv(&cli.command) {
        let _ = writeln!(err, "error: {} records are nested; use --format json-lines", command_name(&cli.command));
        return EXIT_USAGE;
    }
    let threads = g.threads.map(|t| t as usize).unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    });
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start {threads} worker threads: {e}");
            return EXIT_FAILURES;
        }
    };
    let cache = match (g.no_cache, g.cache_dir.clone().or_else(default_cache_dir)) {
        (false, Some(dir)) => Cache::new(dir),
        _ => Cache::disabled(),
    };
    let ctx = Ctx { cache, pool, sieve: SieveConfig { limit: g.sieve_limit, ..SieveConfig::default() }, format: g.format };
    let mut sink = Sink::new(g.format, command_name(&cli.command), out);
    let status = dispatch(&ctx, &cli.command, &mut sink);
    let flushed = sink.finish();
    let status = status.and_then(|s| flushed.map(|()| s).map_err(CliError::from));
    match status {
        Ok(Status::Clean) => EXIT_OK,
        Ok(Status::Failures) => EXIT_FAILURES,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURES
        }
    }
}

/// [`run_with`] on the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let code = run_with(argv, &mut out, &mut std::io::stderr());
    let _ = out.flush();
    code
}
