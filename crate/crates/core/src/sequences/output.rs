//! CSV and JSON-lines renderings of sequence entries.

use std::io::Write;

use super::RecordEntry;
use crate::error::Result;
use crate::format::{fmt_opt, fmt_sig};

pub const CSV_HEADER: &str = "sequence,n,g,h,kl";

pub fn render_csv_row(e: &RecordEntry, digits: usize) -> String {
    format!(
        "{},{},{},{},{}",
        e.sequence,
        e.n,
        fmt_opt(e.g, digits),
        fmt_sig(e.h, digits),
        fmt_opt(e.kl, digits)
    )
}

/// One JSON object; inapplicable statistics are `null`. Numbers are rounded
/// to the same significant digits as the CSV.
pub fn render_json_row(e: &RecordEntry, digits: usize) -> String {
    let round = |x: Option<f64>| x.and_then(|v| fmt_sig(v, digits).parse::<f64>().ok());
    let row = RecordEntry {
        g: round(e.g),
        h: round(Some(e.h)).unwrap_or(f64::NAN),
        kl: round(e.kl),
        ..e.clone()
    };
    serde_json::to_string(&row).expect("entry serializes")
}

pub fn write_csv<W: Write>(entries: &[RecordEntry], digits: usize, header: bool, mut w: W) -> Result<()> {
    if header {
        writeln!(w, "{CSV_HEADER}")?;
    }
    for e in entries {
        writeln!(w, "{}", render_csv_row(e, digits))?;
    }
    Ok(())
}

pub fn write_jsonl<W: Write>(entries: &[RecordEntry], digits: usize, mut w: W) -> Result<()> {
    for e in entries {
        writeln!(w, "{}", render_json_row(e, digits))?;
    }
    Ok(())
}
