use super::{Factorization, Ratio};
use crate::budget;
use crate::error::{Error, Result};

/// Resident bytes per entry of an [`SpfSieve`] plus [`MultiplicativeTable`]
/// (spf, φ, rad, τ as `u32`, σ as `u64`). Construction briefly needs 4 more.
pub const SIEVE_BYTES_PER_ENTRY: u64 = 24;
const SIEVE_BUILD_BYTES_PER_ENTRY: u64 = SIEVE_BYTES_PER_ENTRY + 4;

/// Smallest-prime-factor table for `2 ≤ m ≤ limit`.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Smallest prime factor of `m` (`m ≥ 2`).
    #[inline]
    pub fn spf(&self, m: u64) -> u64 {
        self.spf[m as usize] as u64
    }

    #[inline]
    pub fn is_prime(&self, m: u64) -> bool {
        m >= 2 && self.spf(m) == m
    }

    /// O(log m) factorization by repeated division by the smallest prime factor.
    pub fn factorize(&self, m: u64) -> Factorization {
        assert!(m >= 1 && m <= self.limit(), "{m} outside sieve range");
        let mut factors: Vec<(u64, u32)> = Vec::with_capacity(8);
        let mut rest = m;
        while rest > 1 {
            let p = self.spf(rest);
            let mut a = 0;
            while rest % p == 0 {
                rest /= p;
                a += 1;
            }
            factors.push((p, a));
        }
        Factorization { n: m, factors }
    }
}

/// φ, σ, τ and rad tabulated for `1 ≤ n ≤ limit`.
#[derive(Debug, Clone)]
pub struct MultiplicativeTable {
    phi: Vec<u32>,
    sigma: Vec<u64>,
    tau: Vec<u32>,
    rad: Vec<u32>,
}

impl MultiplicativeTable {
    pub fn limit(&self) -> u64 {
        (self.phi.len() - 1) as u64
    }

    #[inline]
    pub fn phi(&self, n: u64) -> u64 {
        self.phi[n as usize] as u64
    }

    #[inline]
    pub fn sigma(&self, n: u64) -> u64 {
        self.sigma[n as usize]
    }

    #[inline]
    pub fn tau(&self, n: u64) -> u64 {
        self.tau[n as usize] as u64
    }

    #[inline]
    pub fn radical(&self, n: u64) -> u64 {
        self.rad[n as usize] as u64
    }

    /// h(n) = σ(n)/n.
    pub fn h(&self, n: u64) -> Ratio {
        Ratio::new(self.sigma(n) as i128, n as i128)
    }

    /// H(n) = rad(n)/φ(rad(n)), from the tabulated values.
    pub fn big_h(&self, n: u64) -> Ratio {
        let r = self.radical(n);
        Ratio::new(r as i128, self.phi(r) as i128)
    }

    /// S(n) = H(n) − 2.
    pub fn surplus(&self, n: u64) -> Ratio {
        self.big_h(n).sub_int(2)
    }

    #[inline]
    pub fn is_non_deficient(&self, n: u64) -> bool {
        self.sigma(n) >= 2 * n
    }
}

/// Builds the smallest-prime-factor sieve and the multiplicative tables in one
/// linear (Euler) sieve pass.
///
/// Needs about [`SIEVE_BYTES_PER_ENTRY`] bytes per entry; fails with a
/// resource error if that exceeds the configured memory budget.
pub fn build_sieves(limit: u64) -> Result<(SpfSieve, MultiplicativeTable)> {
    if limit < 2 {
        return Err(Error::domain("sieve limit must be at least 2"));
    }
    if limit >= u32::MAX as u64 {
        return Err(Error::domain("sieve limit must be below 2^32"));
    }
    budget::check("sieve", limit + 1, SIEVE_BUILD_BYTES_PER_ENTRY)?;

    let len = limit as usize + 1;
    let mut spf = vec![0u32; len];
    let mut phi = vec![0u32; len];
    let mut sigma = vec![0u64; len];
    let mut tau = vec![0u32; len];
    let mut rad = vec![0u32; len];
    // Largest power of spf(i) dividing i.
    let mut low = vec![0u32; len];
    let mut primes: Vec<u32> = Vec::new();

    phi[1] = 1;
    sigma[1] = 1;
    tau[1] = 1;
    rad[1] = 1;
    low[1] = 1;

    for i in 2..len {
        if spf[i] == 0 {
            let p = i as u32;
            spf[i] = p;
            primes.push(p);
            phi[i] = p - 1;
            sigma[i] = i as u64 + 1;
            tau[i] = 2;
            rad[i] = p;
            low[i] = p;
        }
        let spf_i = spf[i];
        for &p in &primes {
            if p > spf_i {
                break;
            }
            let j = i * p as usize;
            if j >= len {
                break;
            }
            spf[j] = p;
            if p == spf_i {
                let lj = low[i] as u64 * p as u64;
                low[j] = lj as u32;
                if lj == j as u64 {
                    phi[j] = phi[i] * p;
                    sigma[j] = sigma[i] * p as u64 + 1;
                    tau[j] = tau[i] + 1;
                    rad[j] = p;
                } else {
                    let rest = j / lj as usize;
                    let lj = lj as usize;
                    phi[j] = phi[rest] * phi[lj];
                    sigma[j] = sigma[rest] * sigma[lj];
                    tau[j] = tau[rest] * tau[lj];
                    rad[j] = rad[i];
                }
            } else {
                low[j] = p;
                phi[j] = phi[i] * (p - 1);
                sigma[j] = sigma[i] * (p as u64 + 1);
                tau[j] = tau[i] * 2;
                rad[j] = rad[i] * p;
            }
        }
    }
    drop(low);

    Ok((
        SpfSieve { spf },
        MultiplicativeTable {
            phi,
            sigma,
            tau,
            rad,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{euler_phi, factorize, radical, sigma, tau};
    use rand::{Rng, SeedableRng};

    #[test]
    fn small_limit_by_hand() {
        let (s, t) = build_sieves(10).unwrap();
        assert_eq!(s.spf(9), 3);
        assert_eq!(t.phi(9), 6);
        assert_eq!(t.sigma(9), 13);
        assert_eq!(t.tau(8), 4);
        assert_eq!((t.phi(1), t.sigma(1), t.tau(1), t.radical(1)), (1, 1, 1, 1));
        for p in [2u64, 3, 5, 7] {
            assert!(s.is_prime(p));
            assert_eq!((t.phi(p), t.sigma(p), t.tau(p), t.radical(p)), (p - 1, p + 1, 2, p));
        }
        assert!(!s.is_prime(9));
    }

    #[test]
    fn rejects_bad_limits() {
        assert!(matches!(build_sieves(1), Err(Error::Domain(_))));
        assert!(matches!(build_sieves(u32::MAX as u64), Err(Error::Domain(_))));
    }

    #[test]
    fn spf_invariants() {
        let (s, _) = build_sieves(20_000).unwrap();
        for m in 2..=20_000u64 {
            let p = s.spf(m);
            assert_eq!(m % p, 0);
            assert!(crate::arithmetic::is_prime(p));
            assert_eq!(p == m, crate::arithmetic::is_prime(m));
        }
    }

    #[test]
    fn random_entries_match_trial_division() {
        let (s, t) = build_sieves(100_000).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(1..=100_000u64);
            let f = factorize(n, None).unwrap();
            assert_eq!(s.factorize(n), f);
            assert_eq!(t.phi(n), euler_phi(&f));
            assert_eq!(t.sigma(n), sigma(&f).unwrap());
            assert_eq!(t.tau(n), tau(&f));
            assert_eq!(t.radical(n), radical(&f));
        }
    }
}
