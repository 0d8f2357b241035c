//! Sieve and fast-path results against independent per-n computations.

use divkl::arithmetic::{
    build_sieves, divisors, euler_phi, factorize, is_prime, pillai, radical, sigma, tau, totient_index_h,
    surplus_s, abundancy_h, Factorization,
};
use divkl::divergence::{kl_n, kl_n_extended, kl_n_h_form, kl_sieve, EXTENDED_BITS};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const N: u64 = 100_000;

/// Factorization by plain trial division, sharing no code with the library.
fn naive_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut a = 0;
        while n % p == 0 {
            n /= p;
            a += 1;
        }
        if a > 0 {
            out.push((p, a));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn naive_divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn naive_phi(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

#[test]
fn tables_match_trial_division() {
    let (sieve, t) = build_sieves(N).unwrap();
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=N);
        let f = factorize(n, None).unwrap();
        assert_eq!(f.factors(), naive_factors(n).as_slice(), "n = {n}");
        assert_eq!(sieve.factorize(n), f);
        let divs = naive_divisors(n);
        assert_eq!(t.sigma(n), divs.iter().sum::<u64>());
        assert_eq!(t.tau(n), divs.len() as u64);
        assert_eq!(t.phi(n), euler_phi(&f));
        assert_eq!(t.radical(n), naive_factors(n).iter().map(|&(p, _)| p).product::<u64>());
        assert_eq!(t.h(n), abundancy_h(&f).unwrap());
        assert_eq!(t.big_h(n), totient_index_h(&f));
        assert_eq!(t.surplus(n), surplus_s(&f));
        assert_eq!(sieve.is_prime(n), is_prime(n));
    }
    for n in (1..=2000).step_by(7) {
        assert_eq!(t.phi(n), naive_phi(n), "phi({n})");
    }
}

#[test]
fn kl_sieve_matches_per_n() {
    let (_, t) = build_sieves(N).unwrap();
    let kl = kl_sieve(N, &t).unwrap();
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=N);
        let f = factorize(n, None).unwrap();
        let direct = kl_n(&f);
        assert!((kl.value(n) - direct.value).abs() < 1e-6, "n = {n}");
        assert!((kl.value(n) - direct.value).abs() <= kl.error_bound(n) + direct.abs_error_bound);
    }
}

#[test]
fn kl_forms_and_precisions_agree() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    for _ in 0..300 {
        let n = rng.gen_range(1..=N);
        let f = factorize(n, None).unwrap();
        let a = kl_n(&f);
        let b = kl_n_h_form(&f);
        let e = kl_n_extended(&f, EXTENDED_BITS);
        assert!((a.value - b.value).abs() <= a.abs_error_bound + b.abs_error_bound);
        assert!((a.value - e.value).abs() <= a.abs_error_bound + e.abs_error_bound + 1e-300);
    }
}

fn naive_pillai(n: u64) -> u64 {
    (1..=n).map(|k| gcd(k, n)).sum()
}

#[test]
fn pillai_identities() {
    for n in 1..=10_000u64 {
        let f = factorize(n, None).unwrap();
        let total: u64 = divisors(&f)
            .into_iter()
            .map(|d| pillai(&factorize(d, None).unwrap()).unwrap())
            .sum();
        assert_eq!(total, n * tau(&f), "n = {n}");
    }
    for n in 1..=300 {
        assert_eq!(pillai(&factorize(n, None).unwrap()).unwrap(), naive_pillai(n));
    }
}

#[test]
fn totient_sum_is_n() {
    for n in [1u64, 2, 12, 945, 360_360, 999_983] {
        let f = factorize(n, None).unwrap();
        let s: u64 = divisors(&f)
            .into_iter()
            .map(|d| euler_phi(&factorize(d, None).unwrap()))
            .sum();
        assert_eq!(s, n);
    }
}

#[test]
fn radical_and_sigma_of_large_n() {
    let f = Factorization::from_factors(vec![(2, 5), (3, 3), (5, 1), (7, 1)]).unwrap();
    assert_eq!(radical(&f), 210);
    assert_eq!(sigma(&f).unwrap(), 63 * 40 * 6 * 8);
}
