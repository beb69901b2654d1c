use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use serrelab_core::ladder::{
    chain, check_inequality, nebentype_choice, primes_in, reproduce_paper_choices, verify_prime, Certificate,
    PaperVerdict, StepFailure, StepReport,
};
use serrelab_core::numth::{exact_odd_prime_power_divisors, is_prime};

use super::{CliError, Ctx, Status};
use crate::args::LadderCommand;
use crate::output::Sink;

/// Primes verified per parallel batch; output is flushed batch by batch.
const BATCH: usize = 4096;

#[derive(Debug, Serialize)]
pub struct WeightRecord {
    pub k: u64,
    pub c: u64,
    pub j: u64,
    pub weights: [u64; 2],
    pub contained: bool,
}

#[derive(Debug, Serialize)]
pub struct CertificateRecord {
    pub kind: &'static str,
    pub p_n: u64,
    #[serde(rename = "P")]
    pub big_p: u64,
    pub ell: u64,
    pub r: u32,
    pub prime_power: u64,
    pub m: u64,
    pub s: u64,
    pub inequality_holds: bool,
    pub inequality_lhs: u128,
    pub inequality_rhs: u128,
    pub weights: Vec<WeightRecord>,
}

#[derive(Debug, Serialize)]
pub struct FailureReason {
    pub reason: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hits: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct FailureRecord {
    pub kind: &'static str,
    pub p_n: u64,
    pub reasons: Vec<FailureReason>,
}

#[derive(Debug, Serialize)]
pub struct SummaryRecord {
    pub kind: &'static str,
    pub from: u64,
    pub to: u64,
    pub checked: u64,
    pub failures: u64,
}

fn certificate_record(cert: &Certificate, report: &StepReport) -> CertificateRecord {
    CertificateRecord {
        kind: "certificate",
        p_n: cert.p_n,
        big_p: cert.big_p,
        ell: cert.ell,
        r: cert.r,
        prime_power: cert.prime_power(),
        m: cert.m,
        s: cert.s,
        inequality_holds: cert.inequality_lhs() <= cert.inequality_rhs(),
        inequality_lhs: cert.inequality_lhs(),
        inequality_rhs: cert.inequality_rhs(),
        weights: report
            .weights
            .iter()
            .map(|w| WeightRecord { k: w.k, c: w.c, j: w.j, weights: [w.weights.0, w.weights.1], contained: w.contained })
            .collect(),
    }
}

fn failure_record(report: &StepReport) -> FailureRecord {
    let reasons = report
        .failures
        .iter()
        .map(|f| match *f {
            StepFailure::NoCertificate => FailureReason { reason: "no-certificate", k: None, hits: None },
            StepFailure::WeightNotContained { k } => FailureReason { reason: "weight-not-contained", k: Some(k), hits: None },
            StepFailure::WindowNotUnique { k, hits } => {
                FailureReason { reason: "window-not-unique", k: Some(k), hits: Some(hits) }
            }
        })
        .collect();
    FailureRecord { kind: "failure", p_n: report.p_n, reasons }
}

/// Emits the certificate (if any) and the failure record (if any).
fn emit_step<W: Write>(report: &StepReport, sink: &mut Sink<W>) -> Result<bool, CliError> {
    if let Some(cert) = &report.certificate {
        sink.emit(&certificate_record(cert, report))?;
    }
    if !report.passed() {
        sink.emit(&failure_record(report))?;
    }
    Ok(report.passed())
}

pub fn run<W: Write>(ctx: &Ctx, cmd: &LadderCommand, sink: &mut Sink<W>) -> Result<Status, CliError> {
    match *cmd {
        LadderCommand::Cert { p } => {
            if !is_prime(p) {
                return Err(CliError::Usage(format!("{p} is not prime")));
            }
            let ok = emit_step(&verify_prime(p), sink)?;
            Ok(if ok { Status::Clean } else { Status::Failures })
        }
        LadderCommand::Verify { from, to } => {
            if from > to {
                return Err(CliError::Usage(format!("--from {from} exceeds --to {to}")));
            }
            let table = ctx.cache.prime_table(to, &ctx.sieve).map_err(CliError::usage)?;
            let primes = primes_in(&table, from, to).map_err(CliError::usage)?;
            let mut failures = 0u64;
            for batch in primes.chunks(BATCH) {
                let reports: Vec<StepReport> =
                    ctx.pool.install(|| batch.par_iter().map(|&p| verify_prime(p as u64)).collect());
                for report in &reports {
                    failures += !emit_step(report, sink)? as u64;
                }
            }
            sink.emit(&SummaryRecord { kind: "summary", from, to, checked: primes.len() as u64, failures })?;
            Ok(if failures == 0 { Status::Clean } else { Status::Failures })
        }
        LadderCommand::Chain { start, limit } => {
            let certs = chain(start, limit).map_err(CliError::usage)?;
            let reports: Vec<StepReport> = ctx.pool.install(|| certs.par_iter().map(|c| verify_prime(c.p_n)).collect());
            let mut ok = true;
            for report in &reports {
                ok &= emit_step(report, sink)?;
            }
            Ok(if ok { Status::Clean } else { Status::Failures })
        }
        LadderCommand::PaperTable { strict } => paper_table(strict, sink),
    }
}

#[derive(Debug, Serialize)]
pub struct PaperCaseRecord {
    /// `paper-case`, or `flag` when a tabulated exponent is not admissible.
    pub kind: &'static str,
    #[serde(rename = "P")]
    pub big_p: u64,
    pub p_n: u64,
    pub k: u64,
    pub ell: u64,
    pub r: u32,
    pub tabulated: Vec<u64>,
    pub admissible: Vec<u64>,
    pub selected_j: u64,
    pub selected_weights: Vec<u64>,
    pub tabulated_contained: bool,
    pub verdict: &'static str,
}

fn paper_table<W: Write>(strict: bool, sink: &mut Sink<W>) -> Result<Status, CliError> {
    let mut flagged = false;
    for case in reproduce_paper_choices() {
        let verdict = match case.verdict {
            PaperVerdict::Pass => "pass",
            PaperVerdict::OutsideCoset => "outside-coset",
            PaperVerdict::NotContained => "not-contained",
        };
        let flag = case.verdict != PaperVerdict::Pass;
        flagged |= flag;
        sink.emit(&PaperCaseRecord {
            kind: if flag { "flag" } else { "paper-case" },
            big_p: case.big_p,
            p_n: case.p_n,
            k: case.k,
            ell: case.ell,
            r: case.r,
            tabulated: case.tabulated,
            admissible: case.admissible,
            selected_j: case.selected_j,
            selected_weights: case.selected_weights,
            tabulated_contained: case.tabulated_contained,
            verdict,
        })?;
    }
    Ok(if strict && flagged { Status::Failures } else { Status::Clean })
}

#[derive(Debug, Serialize)]
pub struct NebentypeRecord {
    pub kind: &'static str,
    #[serde(rename = "P")]
    pub big_p: u64,
    pub p_n: u64,
    pub k: u64,
    pub ell: u64,
    pub r: u32,
    pub c: u64,
    pub s: u64,
    pub m: u64,
    pub window_lo: u64,
    pub window_hi: u64,
    pub j: u64,
    pub weights: Vec<u64>,
    pub contained: bool,
    pub admissible: Vec<u64>,
}

/// Uses the largest `ell^r || P - 1` that passes the step inequality for
/// `(P, p_n)`, as the certificate search does.
pub fn neben<W: Write>(big_p: u64, p_n: u64, k: u64, sink: &mut Sink<W>) -> Result<Status, CliError> {
    for (name, v) in [("--P", big_p), ("--pn", p_n)] {
        if !is_prime(v) || v < 3 {
            return Err(CliError::Usage(format!("{name} {v} is not an odd prime")));
        }
    }
    if big_p <= p_n {
        return Err(CliError::Usage(format!("--P {big_p} must exceed --pn {p_n}")));
    }
    if k % 2 != 0 || k < 2 || k > big_p + 1 {
        return Err(CliError::Usage(format!("--k {k} must be even with 2 <= k <= P + 1")));
    }
    let pp = exact_odd_prime_power_divisors(big_p - 1)
        .into_iter()
        .filter(|pp| check_inequality(big_p, p_n, (pp.value - 1) / 2))
        .max_by_key(|pp| pp.value)
        .ok_or_else(|| CliError::Usage(format!("no ell^r || {} satisfies the step inequality for p_n = {p_n}", big_p - 1)))?;
    let choice = nebentype_choice(k, big_p, p_n, pp.ell, pp.r).map_err(CliError::usage)?;
    let sel = &choice.selection;
    sink.emit(&NebentypeRecord {
        kind: "nebentype",
        big_p,
        p_n,
        k,
        ell: pp.ell,
        r: pp.r,
        c: sel.c,
        s: sel.s,
        m: sel.m,
        window_lo: sel.window_lo,
        window_hi: sel.window_hi,
        j: sel.j,
        weights: vec![sel.weights.0, sel.weights.1],
        contained: sel.contained_in(p_n),
        admissible: choice.admissible.clone(),
    })?;
    Ok(Status::Clean)
}
