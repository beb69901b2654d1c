use std::io::Write;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serrelab_core::chebyshev::{
    audit_gap_ratio, audit_pi_bounds_range, pi, GapAudit, GapAuditRecord, PiAuditRecord, TriState, AUDIT_START,
    POINT_PREC,
};
use serrelab_core::enclosure::{Enclosure, LogContext};
use serrelab_core::Rational;

use super::{CliError, Ctx, Status};
use crate::args::ChebCommand;
use crate::output::{FlatRecord, Sink};

/// Width of the fixed range shards; results never depend on the thread count.
const SHARD: u64 = 1 << 16;
/// Fractional digits of the emitted bound enclosures.
const DIGITS: usize = 9;

#[derive(Debug, Default, Serialize)]
pub struct PiRecord {
    pub x: u64,
    pub pi_x: u64,
}
impl FlatRecord for PiRecord {}

/// One `x` at which a bound fails or cannot be decided, with enclosures of
/// `A x / ln x` and `B x / ln x` as decimal strings.
#[derive(Debug, Default, Serialize)]
pub struct PiAuditRow {
    pub x: u64,
    pub pi_x: u64,
    pub lower_ok: &'static str,
    pub upper_ok: &'static str,
    pub lower_bound_enclosure_lo: String,
    pub lower_bound_enclosure_hi: String,
    pub upper_bound_enclosure_lo: String,
    pub upper_bound_enclosure_hi: String,
}
impl FlatRecord for PiAuditRow {}

#[derive(Debug, Default, Serialize)]
pub struct GapRow {
    /// `max-ratio` or `violation`.
    pub role: &'static str,
    pub p: u64,
    pub p_next: u64,
    pub bound_num: String,
    pub bound_den: String,
    pub violated: bool,
}
impl FlatRecord for GapRow {}

fn shards(from: u64, to: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut lo = from;
    while lo <= to {
        let hi = to.min(lo.saturating_add(SHARD - 1));
        out.push((lo, hi));
        if hi == u64::MAX {
            break;
        }
        lo = hi + 1;
    }
    out
}

fn bound_enclosure(c: &Rational, x: u64, ln: &Enclosure) -> (String, String) {
    let cx = c * &Rational::from_integer(BigInt::from(x));
    let inv = ln.recip_positive().expect("ln x > 0 for x > 30");
    Enclosure::from_rational(&cx, ln.prec()).mul(&inv).to_decimal(DIGITS)
}

fn audit_row(r: &PiAuditRecord, a: &Rational, b: &Rational, ln: &LogContext) -> PiAuditRow {
    let l = ln.ln_u64(r.x);
    let (lower_lo, lower_hi) = bound_enclosure(a, r.x, &l);
    let (upper_lo, upper_hi) = bound_enclosure(b, r.x, &l);
    PiAuditRow {
        x: r.x,
        pi_x: r.pi_x,
        lower_ok: r.lower_ok.as_str(),
        upper_ok: r.upper_ok.as_str(),
        lower_bound_enclosure_lo: lower_lo,
        lower_bound_enclosure_hi: lower_hi,
        upper_bound_enclosure_lo: upper_lo,
        upper_bound_enclosure_hi: upper_hi,
    }
}

fn gap_row(role: &'static str, r: &GapAuditRecord) -> GapRow {
    GapRow {
        role,
        p: r.p,
        p_next: r.p_next,
        bound_num: r.bound.numer().to_string(),
        bound_den: r.bound.denom().to_string(),
        violated: r.violated,
    }
}

/// Concatenates shard audits; a later maximum replaces an earlier one only
/// when strictly larger, so ties keep the smaller `p`.
fn merge_gaps(parts: Vec<GapAudit>) -> GapAudit {
    let mut out = GapAudit { max_ratio_pair: None, violations: Vec::new() };
    for part in parts {
        out.violations.extend(part.violations);
        if let Some(cand) = part.max_ratio_pair {
            let better = out.max_ratio_pair.as_ref().is_none_or(|best| {
                cand.p_next as u128 * best.p as u128 > best.p_next as u128 * cand.p as u128
            });
            if better {
                out.max_ratio_pair = Some(cand);
            }
        }
    }
    out
}

pub fn run<W: Write>(ctx: &Ctx, cmd: &ChebCommand, sink: &mut Sink<W>) -> Result<Status, CliError> {
    match cmd {
        ChebCommand::Pi { x } => {
            sink.begin::<PiRecord>()?;
            let pi_x = pi(*x, &ctx.sieve).map_err(CliError::usage)?;
            sink.emit(&PiRecord { x: *x, pi_x })?;
            Ok(Status::Clean)
        }
        ChebCommand::Audit { max, a, b } => {
            if !a.is_positive() || !b.is_positive() {
                return Err(CliError::Usage("--A and --B must be positive".into()));
            }
            let table = ctx.cache.prime_table(*max, &ctx.sieve).map_err(CliError::usage)?;
            sink.begin::<PiAuditRow>()?;
            let parts: Result<Vec<Vec<PiAuditRecord>>, _> = ctx.pool.install(|| {
                shards(AUDIT_START + 1, *max)
                    .into_par_iter()
                    .map(|(lo, hi)| audit_pi_bounds_range(&table, lo, hi, a, b))
                    .collect()
            });
            let records: Vec<PiAuditRecord> = parts.map_err(CliError::usage)?.into_iter().flatten().collect();
            let ln = LogContext::new(POINT_PREC);
            let rows: Vec<PiAuditRow> = ctx.pool.install(|| records.par_iter().map(|r| audit_row(r, a, b, &ln)).collect());
            for row in &rows {
                sink.emit(row)?;
            }
            let failed = records.iter().any(|r| r.lower_ok == TriState::Fails || r.upper_ok == TriState::Fails);
            Ok(if failed { Status::Failures } else { Status::Clean })
        }
        ChebCommand::Gaps { a, lo, hi } => {
            if *lo < 2 || lo > hi {
                return Err(CliError::Usage(format!("need 2 <= --lo <= --hi, got {lo}..{hi}")));
            }
            if !a.is_positive() {
                return Err(CliError::Usage("--a must be positive".into()));
            }
            sink.begin::<GapRow>()?;
            let parts: Result<Vec<GapAudit>, _> = ctx.pool.install(|| {
                shards(*lo, *hi).into_par_iter().map(|(s, t)| audit_gap_ratio(a, s, t, &ctx.sieve)).collect()
            });
            let audit = merge_gaps(parts.map_err(CliError::usage)?);
            if let Some(best) = &audit.max_ratio_pair {
                sink.emit(&gap_row("max-ratio", best))?;
            }
            for v in &audit.violations {
                sink.emit(&gap_row("violation", v))?;
            }
            Ok(if audit.violations.is_empty() { Status::Clean } else { Status::Failures })
        }
    }
}
