//! Exact integer arithmetic: factorization, divisors and the multiplicative
//! functions φ, σ, τ, rad, Pillai's gcd-sum, and the ratios h, H, S.

mod ratio;
mod sieve;

pub use ratio::{cmp_products, Ratio};
pub use sieve::{build_sieves, MultiplicativeTable, SpfSieve, SIEVE_BYTES_PER_ENTRY};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest n accepted by the trial-division fallback.
pub const TRIAL_DIVISION_MAX: u64 = (1 << 63) - 1;

/// `n = p₁^a₁ ⋯ p_k^a_k` with `p₁ < ⋯ < p_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from prime powers, checking order and the product.
    ///
    /// Primality of the supplied primes is checked by trial division.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut n: u64 = 1;
        let mut prev = 1;
        for &(p, a) in &factors {
            if p <= prev || a == 0 || !is_prime(p) {
                return Err(Error::domain(format!("invalid prime power {p}^{a}")));
            }
            prev = p;
            let pa = checked_pow(p, a).ok_or_else(|| Error::range("factorization exceeds 64 bits"))?;
            n = n.checked_mul(pa).ok_or_else(|| Error::range("factorization exceeds 64 bits"))?;
        }
        Ok(Factorization { n, factors })
    }

    pub fn one() -> Self {
        Factorization {
            n: 1,
            factors: Vec::new(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of distinct prime factors, `k` (often written ω(n)).
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn smallest_prime(&self) -> Option<u64> {
        self.factors.first().map(|&(p, _)| p)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_odd(&self) -> bool {
        self.n % 2 == 1
    }

    /// Factorization of `n / p` for a prime `p | n`.
    pub fn without_prime(&self, p: u64) -> Factorization {
        let mut factors = self.factors.clone();
        let i = factors
            .iter()
            .position(|&(q, _)| q == p)
            .expect("prime divides n");
        if factors[i].1 == 1 {
            factors.remove(i);
        } else {
            factors[i].1 -= 1;
        }
        Factorization { n: self.n / p, factors }
    }

    /// Factorization of `n · m` for `m` coprime or not; `None` on overflow.
    pub fn times(&self, other: &Factorization) -> Option<Factorization> {
        let n = self.n.checked_mul(other.n)?;
        let mut factors: Vec<(u64, u32)> = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() || j < other.factors.len() {
            match (self.factors.get(i), other.factors.get(j)) {
                (Some(&(p, a)), Some(&(q, b))) if p == q => {
                    factors.push((p, a + b));
                    i += 1;
                    j += 1;
                }
                (Some(&(p, a)), Some(&(q, _))) if p < q => {
                    factors.push((p, a));
                    i += 1;
                }
                (Some(&(p, a)), None) => {
                    factors.push((p, a));
                    i += 1;
                }
                (_, Some(&(q, b))) => {
                    factors.push((q, b));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Some(Factorization { n, factors })
    }

    /// All divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        divisors(self)
    }
}

fn checked_pow(p: u64, a: u32) -> Option<u64> {
    p.checked_pow(a)
}

/// Deterministic trial-division primality test (used for validation only).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d: u64 = 5;
    while d.checked_mul(d).is_some_and(|dd| dd <= n) {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Factors `n`, using the smallest-prime-factor sieve when it covers `n` and
/// trial division otherwise.
pub fn factorize(n: u64, sieve: Option<&SpfSieve>) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::domain("cannot factor 0"));
    }
    if let Some(s) = sieve {
        if n <= s.limit() {
            return Ok(s.factorize(n));
        }
    }
    if n > TRIAL_DIVISION_MAX {
        return Err(Error::range(format!("{n} exceeds the trial-division cap 2^63-1")));
    }
    Ok(trial_division(n))
}

fn trial_division(mut n: u64) -> Factorization {
    let original = n;
    let mut factors = Vec::new();
    let mut push = |n: &mut u64, p: u64| {
        let mut a = 0;
        while *n % p == 0 {
            *n /= p;
            a += 1;
        }
        if a > 0 {
            factors.push((p, a));
        }
    };
    push(&mut n, 2);
    push(&mut n, 3);
    let mut d: u64 = 5;
    while d * d <= n {
        push(&mut n, d);
        push(&mut n, d + 2);
        d += 6;
    }
    if n > 1 {
        factors.push((n, 1));
    }
    Factorization {
        n: original,
        factors,
    }
}

/// All τ(n) divisors of n in ascending order.
pub fn divisors(f: &Factorization) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, a) in f.factors() {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..a {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Divisors paired with their totients, `(d, φ(d))`, ascending in d.
pub fn divisors_with_phi(f: &Factorization) -> Vec<(u64, u64)> {
    let mut out = vec![(1u64, 1u64)];
    for &(p, a) in f.factors() {
        let len = out.len();
        let mut pk = 1;
        for k in 0..a {
            let phi_pk = if k == 0 { p - 1 } else { pk * (p - 1) };
            pk *= p;
            for i in 0..len {
                let (d, phi) = out[i];
                out.push((d * pk, phi * phi_pk));
            }
        }
    }
    out.sort_unstable();
    out
}

/// φ(n) = n/∏pᵢ · ∏(pᵢ − 1).
pub fn euler_phi(f: &Factorization) -> u64 {
    let mut phi = f.n() / radical(f);
    for p in f.primes() {
        phi *= p - 1;
    }
    phi
}

/// σ(n) = ∏ (p^(a+1) − 1)/(p − 1), overflow-checked.
pub fn sigma(f: &Factorization) -> Result<u64> {
    let mut acc: u128 = 1;
    for &(p, a) in f.factors() {
        let mut s: u128 = 1;
        let mut pk: u128 = 1;
        for _ in 0..a {
            pk *= p as u128;
            s += pk;
        }
        acc = acc
            .checked_mul(s)
            .filter(|&v| v <= u64::MAX as u128)
            .ok_or_else(|| Error::range(format!("σ({}) exceeds 64 bits", f.n())))?;
    }
    Ok(acc as u64)
}

/// τ(n), the number of divisors.
pub fn tau(f: &Factorization) -> u64 {
    f.factors().iter().map(|&(_, a)| a as u64 + 1).product()
}

/// rad(n) = ∏ pᵢ.
pub fn radical(f: &Factorization) -> u64 {
    f.primes().product()
}

/// Abundancy index h(n) = σ(n)/n as the exact pair (σ(n), n).
pub fn abundancy_h(f: &Factorization) -> Result<Ratio> {
    Ok(Ratio::new(sigma(f)? as i128, f.n() as i128))
}

/// H(n) = ∏ p/(p − 1) = n/φ(n), as (∏pᵢ, ∏(pᵢ − 1)).
pub fn totient_index_h(f: &Factorization) -> Ratio {
    let num: u64 = radical(f);
    let den: u64 = f.primes().map(|p| p - 1).product();
    Ratio::new(num as i128, den as i128)
}

/// Surplus S(n) = H(n) − 2; negative for H(n) < 2.
pub fn surplus_s(f: &Factorization) -> Ratio {
    totient_index_h(f).sub_int(2)
}

/// Pillai's gcd-sum Pi(n) = Σₖ gcd(k, n) = Σ_{d|n} d·φ(n/d).
pub fn pillai(f: &Factorization) -> Result<u64> {
    let overflow = || Error::range(format!("Pi({}) exceeds 64 bits", f.n()));
    let mut exps = vec![0u32; f.omega()];
    let mut total: u64 = 0;
    loop {
        // d = ∏ p^e, n/d = ∏ p^(a-e)
        let mut d: u64 = 1;
        let mut phi_cofactor: u64 = 1;
        for (i, &(p, a)) in f.factors().iter().enumerate() {
            d *= p.pow(exps[i]);
            let rest = a - exps[i];
            if rest > 0 {
                phi_cofactor *= p.pow(rest - 1) * (p - 1);
            }
        }
        let term = d.checked_mul(phi_cofactor).ok_or_else(overflow)?;
        total = total.checked_add(term).ok_or_else(overflow)?;

        let mut i = 0;
        loop {
            if i == exps.len() {
                return Ok(total);
            }
            if exps[i] < f.factors()[i].1 {
                exps[i] += 1;
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Whether σ(n) ≥ 2n, exactly.
pub fn is_non_deficient(f: &Factorization) -> Result<bool> {
    Ok(sigma(f)? as u128 >= 2 * f.n() as u128)
}
