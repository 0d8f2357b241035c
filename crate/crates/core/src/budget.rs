//! Memory budget for sieve-sized allocations.
//!
//! The cap is read from `DIVKL_MEMORY_BUDGET` (bytes, optional `K`/`M`/`G`
//! suffix, powers of 1024) and defaults to 8 GiB.

use crate::error::{Error, Result};

pub const MEMORY_BUDGET_ENV: &str = "DIVKL_MEMORY_BUDGET";
pub const DEFAULT_MEMORY_BUDGET: u64 = 8 << 30;

pub fn memory_budget() -> u64 {
    std::env::var(MEMORY_BUDGET_ENV)
        .ok()
        .and_then(|s| parse_size(&s))
        .unwrap_or(DEFAULT_MEMORY_BUDGET)
}

pub fn parse_size(s: &str) -> Option<u64> {
    let s = s.trim();
    let (digits, mult) = match s.chars().last()?.to_ascii_uppercase() {
        'K' => (&s[..s.len() - 1], 1u64 << 10),
        'M' => (&s[..s.len() - 1], 1 << 20),
        'G' => (&s[..s.len() - 1], 1 << 30),
        _ => (s, 1),
    };
    digits.trim().parse::<u64>().ok()?.checked_mul(mult)
}

/// Fails with [`Error::Resource`] when `entries · bytes_per_entry` exceeds the budget.
pub fn check(what: &str, entries: u64, bytes_per_entry: u64) -> Result<()> {
    let needed = entries.saturating_mul(bytes_per_entry);
    let budget = memory_budget();
    if needed > budget {
        return Err(Error::Resource {
            what: what.to_string(),
            needed,
            budget,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_size("1024"), Some(1024));
        assert_eq!(parse_size("2K"), Some(2048));
        assert_eq!(parse_size("3g"), Some(3 << 30));
        assert_eq!(parse_size("lots"), None);
    }
}
