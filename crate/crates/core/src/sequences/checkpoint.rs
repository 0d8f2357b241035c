//! Scan checkpoints: a single JSON object, versioned by `format_version`.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "sequence_id": "B1",
//!   "scanned_up_to": 65536,
//!   "current_record": 176.29,
//!   "record_n": 58905,
//!   "entries_emitted": 21,
//!   "b1_class": "odd_non_deficient"
//! }
//! ```
//!
//! `current_record` is informational; resuming uses the exact `record_n`.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{B1Class, SequenceId};
use crate::error::{Error, Result};

pub const CHECKPOINT_FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanCheckpoint {
    pub format_version: u64,
    pub sequence_id: SequenceId,
    pub scanned_up_to: u64,
    pub current_record: Option<f64>,
    pub record_n: Option<u64>,
    pub entries_emitted: u64,
    #[serde(default)]
    pub b1_class: B1Class,
}

pub fn checkpoint_save<W: Write>(cp: &ScanCheckpoint, mut sink: W) -> Result<()> {
    let mut text = serde_json::to_vec_pretty(cp).map_err(|e| Error::Io(e.into()))?;
    text.push(b'\n');
    sink.write_all(&text)?;
    sink.flush()?;
    Ok(())
}

pub fn checkpoint_load<R: Read>(mut source: R) -> Result<ScanCheckpoint> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let value: serde_json::Value = serde_json::from_slice(&bytes).map_err(|e| parse_error(&bytes, &e))?;
    let version = value
        .get("format_version")
        .ok_or_else(|| Error::Parse {
            offset: 0,
            message: "missing format_version".into(),
        })?
        .as_u64()
        .ok_or_else(|| Error::Parse {
            offset: 0,
            message: "format_version is not an unsigned integer".into(),
        })?;
    if version != CHECKPOINT_FORMAT_VERSION {
        return Err(Error::Incompatible {
            found: version,
            expected: CHECKPOINT_FORMAT_VERSION,
        });
    }
    serde_json::from_slice(&bytes).map_err(|e| parse_error(&bytes, &e))
}

/// Writes to a sibling temporary file, then renames it over `path`.
pub fn checkpoint_save_atomic(cp: &ScanCheckpoint, path: &Path) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = Path::new(&tmp);
    {
        let file = fs::File::create(tmp)?;
        checkpoint_save(cp, &file)?;
        file.sync_all()?;
    }
    fs::rename(tmp, path)?;
    Ok(())
}

pub fn checkpoint_load_path(path: &Path) -> Result<ScanCheckpoint> {
    checkpoint_load(fs::File::open(path)?)
}

fn parse_error(bytes: &[u8], e: &serde_json::Error) -> Error {
    Error::Parse {
        offset: byte_offset(bytes, e.line(), e.column()),
        message: e.to_string(),
    }
}

/// Converts serde_json's 1-based line and column to a byte offset.
fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut start = 0usize;
    for _ in 1..line {
        match bytes[start..].iter().position(|&b| b == b'\n') {
            Some(i) => start += i + 1,
            None => return bytes.len(),
        }
    }
    (start + column.saturating_sub(1)).min(bytes.len())
}
