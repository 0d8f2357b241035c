use crate::arithmetic::{build_sieves, Factorization, MultiplicativeTable, SpfSieve};
use crate::divergence::{kl_n, kl_n_extended, kl_n_sign, kl_sieve, KlSign, KlTable};
use crate::error::Result;

/// Read-only tables shared by every scan and verification worker.
#[derive(Debug)]
pub struct ScanContext {
    sieve: SpfSieve,
    tables: MultiplicativeTable,
    kl: Option<KlTable>,
}

impl ScanContext {
    /// Builds sieves up to `limit`, plus the KL table when `with_kl` is set.
    pub fn new(limit: u64, with_kl: bool) -> Result<Self> {
        let limit = limit.max(2);
        let (sieve, tables) = build_sieves(limit)?;
        let kl = if with_kl { Some(kl_sieve(limit, &tables)?) } else { None };
        Ok(ScanContext { sieve, tables, kl })
    }

    pub fn limit(&self) -> u64 {
        self.sieve.limit()
    }

    pub fn sieve(&self) -> &SpfSieve {
        &self.sieve
    }

    pub fn tables(&self) -> &MultiplicativeTable {
        &self.tables
    }

    pub fn kl_table(&self) -> Option<&KlTable> {
        self.kl.as_ref()
    }

    pub fn factorize(&self, n: u64) -> Factorization {
        self.sieve.factorize(n)
    }

    pub fn kl_value(&self, n: u64) -> f64 {
        match &self.kl {
            Some(t) => t.value(n),
            None => kl_n(&self.factorize(n)).value,
        }
    }

    /// KL(n) correctly rounded to f64, from a 256-bit evaluation.
    pub fn kl_precise(&self, n: u64) -> f64 {
        kl_n_extended(&self.factorize(n), 256).value
    }

    pub fn kl_error_bound(&self, n: u64) -> f64 {
        match &self.kl {
            Some(t) => t.error_bound(n),
            None => kl_n(&self.factorize(n)).abs_error_bound,
        }
    }

    pub fn kl_sign(&self, n: u64) -> KlSign {
        let f = self.factorize(n);
        match &self.kl {
            Some(t) => t.sign(&f),
            None => kl_n_sign(&f),
        }
    }
}
