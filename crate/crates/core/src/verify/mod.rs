//! Executable claims checked over integer ranges.
//!
//! Each [`Claim`] is a predicate `hypothesis(n) ⇒ lhs ⋈ rhs` with `⋈` one of
//! `>` or `≥`. Rational comparisons are exact. Where logarithms or roots
//! appear the double-precision difference must clear a guard band of
//! [`GUARD_ABS`] plus its error bound; otherwise the difference is recomputed
//! in fixed point at 256 to 2048 bits, and cases that still cannot be decided
//! are listed as undecided instead of being counted either way.

mod claims;

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::time::Instant;

use glob::Pattern;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use claims::{claim, registry, Claim};

use crate::context::ScanContext;
use crate::error::{Error, Result};
use crate::format::fmt_sig;

/// Absolute guard band for comparisons involving transcendental values.
pub const GUARD_ABS: f64 = 1e-12;

/// At most this many violations, exception hits and undecided n are listed.
pub const MAX_LISTED: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    /// A proved statement; a violation is a bug.
    Proved,
    /// Violations are findings, not failures.
    Conjecture,
    /// A statement known to fail; violations are the expected witnesses.
    ExpectedFalse,
    /// Checked and reported but not asserted.
    Reported,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strictness {
    Strict,
    NonStrict,
}

impl Strictness {
    fn accepts(self, ord: Ordering) -> bool {
        match self {
            Strictness::Strict => ord == Ordering::Greater,
            Strictness::NonStrict => ord != Ordering::Less,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub n: u64,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub n: u64,
    /// lhs − rhs; non-negative when the claim held.
    pub margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    Held,
    /// No n in range satisfied the hypothesis.
    Vacuous,
    /// A proved claim failed.
    Violated,
    /// A conjecture or reported claim failed somewhere.
    Finding,
    /// An expected-false statement failed, as expected.
    ExpectedNegative,
    /// An expected-false statement held everywhere in range.
    NotRefuted,
    /// No violation, but some n could not be decided.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim_id: String,
    pub kind: ClaimKind,
    pub statement: String,
    pub range: (u64, u64),
    pub hypothesis_count: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub exception_hits: Vec<u64>,
    pub undecided: Vec<u64>,
    pub tightest_witness: Option<Witness>,
    pub elapsed_ms: u64,
    pub status: ReportStatus,
}

impl VerificationReport {
    /// True only for violations of proved claims.
    pub fn is_failure(&self) -> bool {
        self.kind == ClaimKind::Proved && self.violation_count > 0
    }
}

pub fn any_failure(reports: &[VerificationReport]) -> bool {
    reports.iter().any(VerificationReport::is_failure)
}

pub(crate) enum Outcome {
    /// Holds with margin lhs − rhs, if meaningful.
    Holds(Option<f64>),
    Violated,
    Undecided,
}

pub(crate) struct Check {
    pub n: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub outcome: Outcome,
    pub detail: Option<String>,
}

pub(crate) struct Env<'a> {
    pub ctx: &'a ScanContext,
    pub hi: u64,
}

#[derive(Default)]
struct Acc {
    hypothesis_count: u64,
    violation_count: u64,
    violations: Vec<Violation>,
    exception_hits: Vec<u64>,
    undecided: Vec<u64>,
    tightest: Option<Witness>,
}

impl Acc {
    fn push(&mut self, exceptions: &[u64], c: Check) {
        self.hypothesis_count += 1;
        match c.outcome {
            Outcome::Holds(margin) => {
                if let Some(m) = margin {
                    let w = Witness {
                        n: c.n,
                        margin: m,
                        detail: c.detail,
                    };
                    self.tightest = pick_tighter(self.tightest.take(), Some(w));
                }
            }
            Outcome::Violated | Outcome::Undecided if exceptions.contains(&c.n) => {
                if self.exception_hits.last() != Some(&c.n) {
                    self.exception_hits.push(c.n);
                }
            }
            Outcome::Violated => {
                self.violation_count += 1;
                if self.violations.len() < MAX_LISTED {
                    self.violations.push(Violation {
                        n: c.n,
                        lhs: c.lhs,
                        rhs: c.rhs,
                        detail: c.detail,
                    });
                }
            }
            Outcome::Undecided => {
                if self.undecided.len() < MAX_LISTED && self.undecided.last() != Some(&c.n) {
                    self.undecided.push(c.n);
                }
            }
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.hypothesis_count += other.hypothesis_count;
        self.violation_count += other.violation_count;
        extend_capped(&mut self.violations, other.violations);
        self.exception_hits.extend(other.exception_hits);
        self.exception_hits.dedup();
        extend_capped(&mut self.undecided, other.undecided);
        self.undecided.dedup();
        self.tightest = pick_tighter(self.tightest, other.tightest);
        self
    }
}

fn extend_capped<T>(v: &mut Vec<T>, more: Vec<T>) {
    let room = MAX_LISTED.saturating_sub(v.len());
    v.extend(more.into_iter().take(room));
}

/// Smaller margin wins; ties keep the earlier (left) witness.
fn pick_tighter(a: Option<Witness>, b: Option<Witness>) -> Option<Witness> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.margin < a.margin { b } else { a }),
        (a, b) => a.or(b),
    }
}

/// Checks one claim on `lo..=hi`.
pub fn verify_claim(ctx: &ScanContext, claim: &Claim, lo: u64, hi: u64) -> Result<VerificationReport> {
    let lo = lo.max(1);
    if lo <= hi && hi > ctx.limit() {
        return Err(Error::Usage(format!(
            "range end {hi} exceeds the sieve limit {}",
            ctx.limit()
        )));
    }
    let start = Instant::now();
    let env = Env { ctx, hi };
    let acc = if lo > hi {
        Acc::default()
    } else {
        (lo..=hi)
            .into_par_iter()
            .fold(Acc::default, |mut acc, n| {
                (claim.eval)(&env, n, &mut |c| acc.push(claim.exception_set, c));
                acc
            })
            .reduce(Acc::default, Acc::merge)
    };
    let status = if acc.hypothesis_count == 0 {
        ReportStatus::Vacuous
    } else if acc.violation_count > 0 {
        match claim.kind {
            ClaimKind::Proved => ReportStatus::Violated,
            ClaimKind::Conjecture | ClaimKind::Reported => ReportStatus::Finding,
            ClaimKind::ExpectedFalse => ReportStatus::ExpectedNegative,
        }
    } else if !acc.undecided.is_empty() {
        ReportStatus::Undecided
    } else if claim.kind == ClaimKind::ExpectedFalse {
        ReportStatus::NotRefuted
    } else {
        ReportStatus::Held
    };
    Ok(VerificationReport {
        claim_id: claim.id.to_string(),
        kind: claim.kind,
        statement: claim.statement.to_string(),
        range: (lo, hi),
        hypothesis_count: acc.hypothesis_count,
        violation_count: acc.violation_count,
        violations: acc.violations,
        exception_hits: acc.exception_hits,
        undecided: acc.undecided,
        tightest_witness: acc.tightest,
        elapsed_ms: start.elapsed().as_millis() as u64,
        status,
    })
}

/// Claims whose id matches any of the glob `patterns` (all claims if empty).
///
/// A pattern that matches no registered id is a usage error.
pub fn select_claims(patterns: &[String]) -> Result<Vec<&'static Claim>> {
    let all = registry();
    if patterns.is_empty() {
        return Ok(all.iter().collect());
    }
    let compiled = patterns
        .iter()
        .map(|p| Pattern::new(p).map_err(|e| Error::Usage(format!("bad claim pattern {p:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    for (p, raw) in compiled.iter().zip(patterns) {
        if !all.iter().any(|c| p.matches(c.id)) {
            return Err(Error::Usage(format!("no claim matches {raw:?}")));
        }
    }
    Ok(all
        .iter()
        .filter(|c| compiled.iter().any(|p| p.matches(c.id)))
        .collect())
}

/// Whether any claim selected by `patterns` needs KL(n) values.
pub fn needs_kl(patterns: &[String]) -> Result<bool> {
    Ok(select_claims(patterns)?.iter().any(|c| c.needs_kl))
}

/// Runs every selected claim on `lo..=hi`, reports in registry order.
pub fn verify_all(ctx: &ScanContext, lo: u64, hi: u64, patterns: &[String]) -> Result<Vec<VerificationReport>> {
    select_claims(patterns)?
        .into_par_iter()
        .map(|c| verify_claim(ctx, c, lo, hi))
        .collect()
}

/// Aligned plain-text table, one line per report.
pub fn render_text(reports: &[VerificationReport], digits: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:<15} {:>21} {:>10} {:>9} {:>5} {:>5} {:<17} {:<28} {:>8}",
        "claim", "kind", "range", "hypothesis", "violation", "exc", "undec", "status", "tightest", "ms"
    );
    for r in reports {
        let tightest = r
            .tightest_witness
            .as_ref()
            .map(|w| format!("n={} margin={}", w.n, fmt_sig(w.margin, digits)))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:<24} {:<15} {:>21} {:>10} {:>9} {:>5} {:>5} {:<17} {:<28} {:>8}",
            r.claim_id,
            kind_name(r.kind),
            format!("[{}, {}]", r.range.0, r.range.1),
            r.hypothesis_count,
            r.violation_count,
            r.exception_hits.len(),
            r.undecided.len(),
            status_name(r.status),
            tightest,
            r.elapsed_ms
        );
        for v in &r.violations {
            let _ = writeln!(
                out,
                "    violation n={} lhs={} rhs={}{}",
                v.n,
                fmt_sig(v.lhs, digits),
                fmt_sig(v.rhs, digits),
                v.detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default()
            );
        }
        if !r.exception_hits.is_empty() {
            let hits: Vec<String> = r.exception_hits.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "    exception hits: {}", hits.join(", "));
        }
    }
    out
}

fn kind_name(k: ClaimKind) -> &'static str {
    match k {
        ClaimKind::Proved => "proved",
        ClaimKind::Conjecture => "conjecture",
        ClaimKind::ExpectedFalse => "expected_false",
        ClaimKind::Reported => "reported",
    }
}

fn status_name(s: ReportStatus) -> &'static str {
    match s {
        ReportStatus::Held => "held",
        ReportStatus::Vacuous => "vacuous",
        ReportStatus::Violated => "VIOLATED",
        ReportStatus::Finding => "finding",
        ReportStatus::ExpectedNegative => "expected_negative",
        ReportStatus::NotRefuted => "not_refuted",
        ReportStatus::Undecided => "undecided",
    }
}
