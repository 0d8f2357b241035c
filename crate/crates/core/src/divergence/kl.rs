use std::collections::HashMap;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{divisors_with_phi, tau, Factorization, MultiplicativeTable, Ratio};
use crate::budget;
use crate::error::{Error, Result};
use crate::extended::{ExtendedSum, Fixed};
use crate::summation::{summation_error_bound, NeumaierSum};

/// Starting precision for sign decisions that double precision cannot settle.
pub const EXTENDED_BITS: u32 = 256;
const MAX_EXTENDED_BITS: u32 = 2048;

/// Resident bytes per entry of a [`KlTable`] (value and error bound).
pub const KL_SIEVE_BYTES_PER_ENTRY: u64 = 16;
const KL_SIEVE_BUILD_BYTES_PER_ENTRY: u64 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Standard,
    Extended,
}

/// A real value with a rigorous absolute error bound.
///
/// With `Extended` precision the bound refers to the fixed-point value in
/// `extended`; `value` is its nearest double.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceValue {
    pub value: f64,
    pub abs_error_bound: f64,
    pub precision: Precision,
    pub extended: Option<Fixed>,
}

impl DivergenceValue {
    /// Sign of the true value if the error bound excludes zero.
    pub fn certain_sign(&self) -> Option<KlSign> {
        if self.value - self.abs_error_bound > 0.0 {
            Some(KlSign::Positive)
        } else if self.value + self.abs_error_bound < 0.0 {
            Some(KlSign::Negative)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KlSign {
    Negative,
    ZeroAmbiguous,
    Positive,
}

impl KlSign {
    /// KL(n) ≥ 0 as far as can be decided; ambiguous zeros count as non-negative.
    pub fn is_non_negative(self) -> bool {
        self != KlSign::Negative
    }
}

#[inline]
fn kl_term(d: u64, phi_d: u64) -> f64 {
    let d = d as f64;
    d * (d / (2.0 * phi_d as f64)).ln()
}

/// Error bound for a double-precision KL(n) built from `terms` terms.
///
/// Each term `d·ln(d/2φ(d))` is off by at most `ε·d + 3ε·|term|` (one
/// rounding in the quotient, one ulp in `ln`, one in the product); the
/// compensated sum adds its own bound on top.
fn standard_bound(value: f64, abs_sum: f64, sigma: f64, terms: u64) -> f64 {
    let eps = f64::EPSILON;
    summation_error_bound(value, abs_sum, terms) + eps * sigma + 3.0 * eps * abs_sum
}

/// KL(n) = Σ_{d|n} d·ln(d / 2φ(d)) in double precision with compensated summation.
pub fn kl_n(f: &Factorization) -> DivergenceValue {
    let mut acc = NeumaierSum::new();
    let mut sigma = 0.0;
    for (d, phi) in divisors_with_phi(f) {
        acc.add(kl_term(d, phi));
        sigma += d as f64;
    }
    let value = acc.value();
    DivergenceValue {
        value,
        abs_error_bound: standard_bound(value, acc.abs_sum(), sigma, acc.terms()),
        precision: Precision::Standard,
        extended: None,
    }
}

/// KL(n) through the rewritten form Σ_{d|n} d·ln(H(d)/2), with H(d) = rad(d)/φ(rad(d)).
pub fn kl_n_h_form(f: &Factorization) -> DivergenceValue {
    // (d, rad(d), φ(rad(d)))
    let mut divs: Vec<(u64, u64, u64)> = vec![(1, 1, 1)];
    for &(p, a) in f.factors() {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..a {
            pk *= p;
            for i in 0..len {
                let (d, r, pr) = divs[i];
                divs.push((d * pk, r * p, pr * (p - 1)));
            }
        }
    }
    divs.sort_unstable();
    let mut acc = NeumaierSum::new();
    let mut sigma = 0.0;
    for (d, r, phi_r) in divs {
        let big_h = r as f64 / phi_r as f64;
        acc.add(d as f64 * (big_h / 2.0).ln());
        sigma += d as f64;
    }
    let value = acc.value();
    DivergenceValue {
        value,
        // H(d)/2 takes one more rounding than d/(2φ(d)).
        abs_error_bound: standard_bound(value, acc.abs_sum(), 2.0 * sigma, acc.terms()),
        precision: Precision::Standard,
        extended: None,
    }
}

/// KL(n) in binary fixed point with `bits` fractional bits.
///
/// Terms are grouped by radical, since d/(2φ(d)) only depends on rad(d).
pub fn kl_n_extended(f: &Factorization, bits: u32) -> DivergenceValue {
    let sum = kl_extended_sum(f, bits);
    DivergenceValue {
        value: sum.value().to_f64(),
        abs_error_bound: sum.error_bound(),
        precision: Precision::Extended,
        extended: Some(sum.value().clone()),
    }
}

pub(crate) fn kl_extended_sum(f: &Factorization, bits: u32) -> ExtendedSum {
    let mut by_radical: HashMap<(u64, u64), u64> = HashMap::new();
    let mut divs: Vec<(u64, u64, u64)> = vec![(1, 1, 1)];
    for &(p, a) in f.factors() {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..a {
            pk *= p;
            for i in 0..len {
                let (d, r, pr) = divs[i];
                divs.push((d * pk, r * p, pr * (p - 1)));
            }
        }
    }
    for (d, r, phi_r) in divs {
        *by_radical.entry((r, phi_r)).or_default() += d;
    }
    let mut groups: Vec<_> = by_radical.into_iter().collect();
    groups.sort_unstable();

    let mut sum = ExtendedSum::new(bits);
    for ((r, phi_r), weight) in groups {
        sum.add_weighted_ln(weight, r as u128, 2 * phi_r as u128);
    }
    sum
}

fn extended_sign(f: &Factorization) -> KlSign {
    let mut bits = EXTENDED_BITS;
    while bits <= MAX_EXTENDED_BITS {
        let v = kl_n_extended(f, bits);
        if let Some(s) = v.certain_sign() {
            return s;
        }
        bits *= 2;
    }
    warn!("KL({}) is zero to within 2^-{MAX_EXTENDED_BITS}; sign is ambiguous", f.n());
    KlSign::ZeroAmbiguous
}

/// Robust sign of KL(n).
///
/// Double precision decides unless the error bound straddles zero; then the
/// sum is recomputed in fixed point at 256 bits and up, and only reported as
/// `ZeroAmbiguous` if even that cannot separate it from zero.
pub fn kl_n_sign(f: &Factorization) -> KlSign {
    kl_n(f).certain_sign().unwrap_or_else(|| extended_sign(f))
}

/// As [`kl_n_sign`], starting from an already computed double-precision value.
pub(crate) fn sign_from_standard(f: &Factorization, value: f64, bound: f64) -> KlSign {
    let v = DivergenceValue {
        value,
        abs_error_bound: bound,
        precision: Precision::Standard,
        extended: None,
    };
    v.certain_sign().unwrap_or_else(|| extended_sign(f))
}

/// KL(n) for every n ≤ limit, from the sieve tables.
#[derive(Debug, Clone)]
pub struct KlTable {
    values: Vec<f64>,
    bounds: Vec<f64>,
}

impl KlTable {
    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    #[inline]
    pub fn value(&self, n: u64) -> f64 {
        self.values[n as usize]
    }

    #[inline]
    pub fn error_bound(&self, n: u64) -> f64 {
        self.bounds[n as usize]
    }

    /// Values indexed by n; index 0 is unused and holds 0.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sign from the tabulated value, escalating to fixed point when needed.
    pub fn sign(&self, f: &Factorization) -> KlSign {
        sign_from_standard(f, self.value(f.n()), self.error_bound(f.n()))
    }

    pub fn divergence(&self, n: u64) -> DivergenceValue {
        DivergenceValue {
            value: self.value(n),
            abs_error_bound: self.error_bound(n),
            precision: Precision::Standard,
            extended: None,
        }
    }
}

#[derive(Clone, Copy, Default)]
struct Cell {
    sum: f64,
    comp: f64,
    abs: f64,
}

/// Tabulates KL(n) for `1 ≤ n ≤ limit` by adding `w(d) = d·ln(d/2φ(d))` to
/// every multiple of d.
///
/// O(N log N) compensated additions. The output range is split into blocks
/// processed in parallel; within a cell terms always arrive in increasing d,
/// so the result is bit-identical for any block size or thread count.
pub fn kl_sieve(limit: u64, tables: &MultiplicativeTable) -> Result<KlTable> {
    if limit > tables.limit() {
        return Err(Error::domain(format!(
            "KL sieve limit {limit} exceeds table limit {}",
            tables.limit()
        )));
    }
    budget::check("KL sieve", limit + 1, KL_SIEVE_BUILD_BYTES_PER_ENTRY)?;
    let len = limit as usize + 1;
    let weights: Vec<f64> = (0..len as u64)
        .map(|d| if d == 0 { 0.0 } else { kl_term(d, tables.phi(d)) })
        .collect();

    let mut cells = vec![Cell::default(); len];
    let block = (len / (rayon::current_num_threads() * 4)).max(1 << 14);
    cells.par_chunks_mut(block).enumerate().for_each(|(bi, chunk)| {
        let lo = (bi * block).max(1);
        let base = bi * block;
        let hi = base + chunk.len();
        for d in 1..hi {
            let w = weights[d];
            let first = lo.div_ceil(d) * d;
            let mut m = first;
            while m < hi {
                let c = &mut chunk[m - base];
                let t = c.sum + w;
                if c.sum.abs() >= w.abs() {
                    c.comp += (c.sum - t) + w;
                } else {
                    c.comp += (w - t) + c.sum;
                }
                c.sum = t;
                c.abs += w.abs();
                m += d;
            }
        }
    });
    drop(weights);

    let mut values = Vec::with_capacity(len);
    let mut bounds = Vec::with_capacity(len);
    for (n, c) in cells.iter().enumerate() {
        let v = c.sum + c.comp;
        values.push(v);
        let b = if n == 0 {
            0.0
        } else {
            standard_bound(v, c.abs, tables.sigma(n as u64) as f64, tables.tau(n as u64))
        };
        bounds.push(b);
    }
    Ok(KlTable { values, bounds })
}

/// v(n) = Σ_{d|n, d>1} (1/d)·ln((τ(n) − 1)/d).
pub fn v_n(f: &Factorization) -> Result<f64> {
    if f.n() < 2 {
        return Err(Error::domain("v(n) is undefined for n = 1"));
    }
    let t = (tau(f) - 1) as f64;
    let acc: NeumaierSum = crate::arithmetic::divisors(f)
        .into_iter()
        .skip(1)
        .map(|d| (t / d as f64).ln() / d as f64)
        .collect();
    Ok(acc.value())
}

/// v(n) in fixed point, for sign decisions close to a threshold.
pub(crate) fn v_n_extended(f: &Factorization, bits: u32) -> ExtendedSum {
    let t = (tau(f) - 1) as u128;
    let mut acc = ExtendedSum::new(bits);
    for d in crate::arithmetic::divisors(f).into_iter().skip(1) {
        acc.add_ln_over(t, d as u128, d);
    }
    acc
}

/// (2φ(n) − n)² / (2n), the Pinsker-derived lower bound on KL(n) for perfect n.
pub fn kl_pinsker_bound(f: &Factorization) -> f64 {
    kl_pinsker_bound_exact(f).to_f64()
}

pub(crate) fn kl_pinsker_bound_exact(f: &Factorization) -> Ratio {
    let n = f.n() as i128;
    let gap = 2 * crate::arithmetic::euler_phi(f) as i128 - n;
    Ratio::new(gap * gap, 2 * n)
}
