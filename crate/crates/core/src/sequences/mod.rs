//! Record-setter scans over `1..=limit`.
//!
//! | id       | candidates                         | record statistic          |
//! |----------|------------------------------------|---------------------------|
//! | `B1`     | odd non-deficient                  | g(n) = S(n)·√n, new max   |
//! | `B2`     | odd primitive non-deficient        | g(n), new max             |
//! | `T`      | KL(n) > 0                          | h(n), new strict min      |
//! | `To`     | odd, KL(n) > 0                     | h(n), new strict min      |
//! | `KLPrim` | KL-primitive                       | (filter, every member)    |
//!
//! Per-n work runs in parallel over fixed blocks; record filtering is a
//! sequential pass over each block in order, so output never depends on the
//! thread count. All record comparisons are exact.

mod checkpoint;
mod output;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use checkpoint::{
    checkpoint_load, checkpoint_load_path, checkpoint_save, checkpoint_save_atomic, ScanCheckpoint,
    CHECKPOINT_FORMAT_VERSION,
};
pub use output::{render_csv_row, render_json_row, write_csv, write_jsonl, CSV_HEADER};

use crate::arithmetic::Ratio;
use crate::context::ScanContext;
use crate::divergence::KlSign;
use crate::error::{Error, Result};

pub const DEFAULT_BLOCK_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SequenceId {
    B1,
    B2,
    T,
    To,
    #[serde(rename = "KLPrim")]
    KlPrim,
}

impl SequenceId {
    pub const ALL: [SequenceId; 5] = [
        SequenceId::B1,
        SequenceId::B2,
        SequenceId::T,
        SequenceId::To,
        SequenceId::KlPrim,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SequenceId::B1 => "B1",
            SequenceId::B2 => "B2",
            SequenceId::T => "T",
            SequenceId::To => "To",
            SequenceId::KlPrim => "KLPrim",
        }
    }

    /// Whether scanning this sequence needs KL(n) for every n.
    pub fn needs_kl(self) -> bool {
        matches!(self, SequenceId::T | SequenceId::To | SequenceId::KlPrim)
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SequenceId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SequenceId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Usage(format!("unknown sequence {s:?} (expected B1, B2, T, To, KLPrim)")))
    }
}

/// One row of a sequence; statistics that do not apply are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordEntry {
    pub sequence: SequenceId,
    pub n: u64,
    pub g: Option<f64>,
    pub h: f64,
    pub kl: Option<f64>,
}

/// Which odd numbers compete for a B₁ record.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum B1Class {
    /// Odd non-deficient k only.
    #[default]
    OddNonDeficient,
    /// Every odd k with S(k) > 0 (sensitivity variant).
    OddPositiveSurplus,
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub b1_class: B1Class,
    pub block_size: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            b1_class: B1Class::default(),
            block_size: DEFAULT_BLOCK_SIZE,
        }
    }
}

/// Incremental record scanner; can be checkpointed after any block.
pub struct Scanner<'a> {
    ctx: &'a ScanContext,
    sequence: SequenceId,
    options: ScanOptions,
    scanned_up_to: u64,
    record_n: Option<u64>,
    entries_emitted: u64,
}

impl<'a> Scanner<'a> {
    pub fn new(ctx: &'a ScanContext, sequence: SequenceId, options: ScanOptions) -> Result<Self> {
        if sequence.needs_kl() && ctx.kl_table().is_none() {
            return Err(Error::Usage(format!("{sequence} scan needs a context with the KL table")));
        }
        Ok(Scanner {
            ctx,
            sequence,
            options,
            scanned_up_to: 0,
            record_n: None,
            entries_emitted: 0,
        })
    }

    /// Continues from a checkpoint written by [`Scanner::checkpoint`].
    pub fn resume(ctx: &'a ScanContext, cp: &ScanCheckpoint, block_size: u64) -> Result<Self> {
        let mut s = Scanner::new(
            ctx,
            cp.sequence_id,
            ScanOptions {
                b1_class: cp.b1_class,
                block_size,
            },
        )?;
        if cp.scanned_up_to > ctx.limit() || cp.record_n.is_some_and(|r| r > cp.scanned_up_to) {
            return Err(Error::Usage(format!(
                "checkpoint at {} does not fit a context of limit {}",
                cp.scanned_up_to,
                ctx.limit()
            )));
        }
        s.scanned_up_to = cp.scanned_up_to;
        s.record_n = cp.record_n;
        s.entries_emitted = cp.entries_emitted;
        Ok(s)
    }

    pub fn scanned_up_to(&self) -> u64 {
        self.scanned_up_to
    }

    pub fn checkpoint(&self) -> ScanCheckpoint {
        ScanCheckpoint {
            format_version: CHECKPOINT_FORMAT_VERSION,
            sequence_id: self.sequence,
            scanned_up_to: self.scanned_up_to,
            current_record: self.record_n.map(|r| self.record_value(r)),
            record_n: self.record_n,
            entries_emitted: self.entries_emitted,
            b1_class: self.options.b1_class,
        }
    }

    /// Scans through `hi`, calling `on_block` after every block with the new
    /// entries and a checkpoint of the state so far. Returning `false` stops
    /// the scan after that block.
    pub fn run<F>(&mut self, hi: u64, mut on_block: F) -> Result<()>
    where
        F: FnMut(&[RecordEntry], &ScanCheckpoint) -> Result<bool>,
    {
        if hi > self.ctx.limit() {
            return Err(Error::Usage(format!(
                "scan limit {hi} exceeds context limit {}",
                self.ctx.limit()
            )));
        }
        let block = self.options.block_size.max(1);
        while self.scanned_up_to < hi {
            let lo = self.scanned_up_to + 1;
            let end = (lo + block - 1).min(hi);
            let entries = self.scan_block(lo, end);
            self.scanned_up_to = end;
            if !on_block(&entries, &self.checkpoint())? {
                break;
            }
        }
        Ok(())
    }

    /// Scans through `hi` and returns every new entry.
    pub fn advance_to(&mut self, hi: u64) -> Result<Vec<RecordEntry>> {
        let mut all = Vec::new();
        self.run(hi, |e, _| {
            all.extend_from_slice(e);
            Ok(true)
        })?;
        Ok(all)
    }

    fn scan_block(&mut self, lo: u64, hi: u64) -> Vec<RecordEntry> {
        let candidates: Vec<u64> = (lo..=hi)
            .into_par_iter()
            .filter(|&n| self.is_candidate(n))
            .collect();
        let mut out = Vec::new();
        for n in candidates {
            let is_record = match (self.sequence, self.record_n) {
                (SequenceId::KlPrim, _) | (_, None) => true,
                (SequenceId::B1 | SequenceId::B2, Some(r)) => g_greater(self.ctx, n, r),
                (SequenceId::T | SequenceId::To, Some(r)) => h_less(self.ctx, n, r),
            };
            if is_record {
                self.record_n = Some(n);
                self.entries_emitted += 1;
                out.push(self.entry(n));
            }
        }
        out
    }

    fn is_candidate(&self, n: u64) -> bool {
        let t = self.ctx.tables();
        let odd = n % 2 == 1;
        match self.sequence {
            SequenceId::B1 => {
                odd && match self.options.b1_class {
                    B1Class::OddNonDeficient => t.is_non_deficient(n),
                    B1Class::OddPositiveSurplus => t.surplus(n).signum().is_gt(),
                }
            }
            SequenceId::B2 => odd && is_primitive_non_deficient(self.ctx, n),
            SequenceId::T => self.ctx.kl_sign(n) == KlSign::Positive,
            SequenceId::To => odd && self.ctx.kl_sign(n) == KlSign::Positive,
            SequenceId::KlPrim => is_kl_primitive(self.ctx, n),
        }
    }

    fn entry(&self, n: u64) -> RecordEntry {
        let t = self.ctx.tables();
        let h = t.h(n).to_f64();
        match self.sequence {
            SequenceId::B1 | SequenceId::B2 => RecordEntry {
                sequence: self.sequence,
                n,
                g: Some(g_value(self.ctx, n)),
                h,
                kl: None,
            },
            SequenceId::T | SequenceId::To | SequenceId::KlPrim => RecordEntry {
                sequence: self.sequence,
                n,
                g: None,
                h,
                kl: Some(self.ctx.kl_precise(n)),
            },
        }
    }

    fn record_value(&self, n: u64) -> f64 {
        match self.sequence {
            SequenceId::B1 | SequenceId::B2 => g_value(self.ctx, n),
            _ => self.ctx.tables().h(n).to_f64(),
        }
    }
}

/// g(n) = S(n)·√n.
pub fn g_value(ctx: &ScanContext, n: u64) -> f64 {
    ctx.tables().surplus(n).to_f64() * (n as f64).sqrt()
}

/// g(a) > g(b) for S(a), S(b) > 0, decided exactly as S(a)²·a > S(b)²·b.
fn g_greater(ctx: &ScanContext, a: u64, b: u64) -> bool {
    let sa = ctx.tables().surplus(a);
    let sb = ctx.tables().surplus(b);
    let lhs = BigInt::from(sa.num).pow(2) * a * BigInt::from(sb.den).pow(2);
    let rhs = BigInt::from(sb.num).pow(2) * b * BigInt::from(sa.den).pow(2);
    lhs > rhs
}

/// h(a) < h(b), by σ(a)·b < σ(b)·a.
fn h_less(ctx: &ScanContext, a: u64, b: u64) -> bool {
    let t = ctx.tables();
    (t.sigma(a) as u128) * (b as u128) < (t.sigma(b) as u128) * (a as u128)
}

pub(crate) fn is_primitive_non_deficient(ctx: &ScanContext, n: u64) -> bool {
    let t = ctx.tables();
    if !t.is_non_deficient(n) {
        return false;
    }
    let f = ctx.factorize(n);
    let all = f.primes().all(|p| !t.is_non_deficient(n / p));
    all
}

pub(crate) fn is_kl_primitive(ctx: &ScanContext, n: u64) -> bool {
    if !ctx.kl_sign(n).is_non_negative() {
        return false;
    }
    let f = ctx.factorize(n);
    let all = f.primes().all(|p| ctx.kl_sign(n / p) == KlSign::Negative);
    all
}

/// Scans one sequence through `limit` on a prepared context.
pub fn scan_with(ctx: &ScanContext, sequence: SequenceId, limit: u64, options: ScanOptions) -> Result<Vec<RecordEntry>> {
    Scanner::new(ctx, sequence, options)?.advance_to(limit)
}

/// Builds the tables and scans one sequence through `limit`.
pub fn scan(sequence: SequenceId, limit: u64, options: ScanOptions) -> Result<Vec<RecordEntry>> {
    let ctx = ScanContext::new(limit, sequence.needs_kl())?;
    scan_with(&ctx, sequence, limit, options)
}

pub fn scan_b1(limit: u64) -> Result<Vec<RecordEntry>> {
    scan(SequenceId::B1, limit, ScanOptions::default())
}

pub fn scan_b2(limit: u64) -> Result<Vec<RecordEntry>> {
    scan(SequenceId::B2, limit, ScanOptions::default())
}

pub fn scan_t(limit: u64, odd_only: bool) -> Result<Vec<RecordEntry>> {
    let id = if odd_only { SequenceId::To } else { SequenceId::T };
    scan(id, limit, ScanOptions::default())
}

pub fn scan_kl_primitive(limit: u64) -> Result<Vec<u64>> {
    Ok(scan(SequenceId::KlPrim, limit, ScanOptions::default())?
        .into_iter()
        .map(|e| e.n)
        .collect())
}

/// Exact h(n) for callers holding only a context.
pub fn h_exact(ctx: &ScanContext, n: u64) -> Ratio {
    ctx.tables().h(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ns(v: &[RecordEntry]) -> Vec<u64> {
        v.iter().map(|e| e.n).collect()
    }

    #[test]
    fn b1_head() {
        let b1 = scan_b1(10_000).unwrap();
        assert_eq!(ns(&b1), vec![945, 1575, 2205, 2835, 3465, 5775, 8085]);
        assert!((b1[0].g.unwrap() - 5.763_909_805_852_27).abs() < 1e-9 * 5.76);
        assert!(b1.iter().all(|e| e.kl.is_none()));
        assert!(!ns(&b1).contains(&4095));
    }

    #[test]
    fn b2_skips_2835_and_reaches_47355() {
        let b2 = scan_b2(50_000).unwrap();
        let n = ns(&b2);
        assert!(!n.contains(&2835));
        assert_eq!(&n[..4], &[945, 1575, 2205, 3465]);
        let e = b2.iter().find(|e| e.n == 47_355).unwrap();
        assert!((e.h - 2.043_458_980_044_35).abs() < 1e-9);
    }

    #[test]
    fn t_head() {
        let t = scan_t(20_000, false).unwrap();
        assert_eq!(
            ns(&t),
            vec![6, 110, 130, 170, 190, 2950, 3050, 7826, 15554, 15862, 16478, 16786, 17402, 19270]
        );
        assert!(t.iter().all(|e| e.g.is_none()));
    }

    #[test]
    fn kl_primitive_to_1500() {
        let expected = vec![
            6, 20, 28, 70, 88, 104, 110, 130, 136, 152, 170, 190, 315, 368, 464, 496, 572, 592, 656, 688, 748,
            836, 884, 988, 1012, 1078, 1150, 1155, 1196, 1276, 1292, 1364, 1365, 1450,
        ];
        assert_eq!(scan_kl_primitive(1500).unwrap(), expected);
    }

    #[test]
    fn to_head() {
        let to = scan_t(20_000, true).unwrap();
        assert_eq!(ns(&to), vec![315, 1365]);
        assert!((to[1].kl.unwrap() - 16.428_588_851_6).abs() < 1e-8 * 16.43);
    }

    #[test]
    fn kl_primitive_small() {
        assert!(scan_kl_primitive(5).unwrap().is_empty());
        assert!(!scan_kl_primitive(100).unwrap().contains(&12));
    }

    #[test]
    fn sequence_ids_parse() {
        for id in SequenceId::ALL {
            assert_eq!(id.as_str().parse::<SequenceId>().unwrap(), id);
        }
        assert_eq!("klprim".parse::<SequenceId>().unwrap(), SequenceId::KlPrim);
        assert!("B3".parse::<SequenceId>().is_err());
    }

    #[test]
    fn t_scan_requires_kl_table() {
        let ctx = ScanContext::new(100, false).unwrap();
        assert!(Scanner::new(&ctx, SequenceId::T, ScanOptions::default()).is_err());
        assert!(Scanner::new(&ctx, SequenceId::B1, ScanOptions::default()).is_ok());
    }
}
