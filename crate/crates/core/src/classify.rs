//! Deficiency class, primitive non-deficiency and KL-primitivity of one n.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{divisors, factorize, sigma, Factorization};
use crate::divergence::{kl_n_sign, KlSign};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Deficiency {
    Deficient,
    Perfect,
    Abundant,
}

impl Deficiency {
    pub fn is_non_deficient(self) -> bool {
        self != Deficiency::Deficient
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub n: u64,
    pub deficiency: Deficiency,
    pub primitive_non_deficient: bool,
    pub kl_sign: KlSign,
    pub kl_primitive: bool,
}

/// Exact comparison of σ(n) with 2n.
pub fn deficiency_class(f: &Factorization) -> Result<Deficiency> {
    let s = sigma(f)? as u128;
    let two_n = 2 * f.n() as u128;
    Ok(match s.cmp(&two_n) {
        std::cmp::Ordering::Less => Deficiency::Deficient,
        std::cmp::Ordering::Equal => Deficiency::Perfect,
        std::cmp::Ordering::Greater => Deficiency::Abundant,
    })
}

/// Non-deficient with every proper divisor deficient.
///
/// h is strictly increasing along divisibility, so only the maximal proper
/// divisors n/p need checking.
pub fn is_primitive_non_deficient(f: &Factorization) -> Result<bool> {
    if !deficiency_class(f)?.is_non_deficient() {
        return Ok(false);
    }
    for p in f.primes() {
        if deficiency_class(&f.without_prime(p))?.is_non_deficient() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// KL(n) ≥ 0 while KL(d) < 0 for every proper divisor d.
///
/// KL(d) ≥ 0 forces KL(md) > 0 for all m > 1, so a non-negative proper
/// divisor would make some maximal divisor n/p positive; checking the n/p
/// therefore suffices.
pub fn is_kl_primitive(f: &Factorization) -> bool {
    kl_primitive_with_sign(f, kl_n_sign(f))
}

fn kl_primitive_with_sign(f: &Factorization, sign: KlSign) -> bool {
    if sign == KlSign::Negative {
        return false;
    }
    if sign == KlSign::ZeroAmbiguous {
        warn!("KL({}) sign ambiguous; treated as KL ≥ 0 for primitivity", f.n());
    }
    f.primes()
        .all(|p| kl_n_sign(&f.without_prime(p)) == KlSign::Negative)
}

/// Reference check over every proper divisor, for debugging the shortcut.
pub fn is_kl_primitive_exhaustive(f: &Factorization) -> bool {
    if kl_n_sign(f) == KlSign::Negative {
        return false;
    }
    divisors(f)
        .into_iter()
        .filter(|&d| d < f.n())
        .all(|d| kl_n_sign(&factorize(d, None).expect("d ≥ 1")) == KlSign::Negative)
}

pub fn classify(f: &Factorization) -> Result<Classification> {
    let deficiency = deficiency_class(f)?;
    let kl_sign = kl_n_sign(f);
    Ok(Classification {
        n: f.n(),
        deficiency,
        primitive_non_deficient: is_primitive_non_deficient(f)?,
        kl_sign,
        kl_primitive: kl_primitive_with_sign(f, kl_sign),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fz(n: u64) -> Factorization {
        factorize(n, None).unwrap()
    }

    #[test]
    fn deficiency_examples() {
        assert_eq!(deficiency_class(&fz(6)).unwrap(), Deficiency::Perfect);
        assert_eq!(deficiency_class(&fz(945)).unwrap(), Deficiency::Abundant);
        assert_eq!(deficiency_class(&fz(1009)).unwrap(), Deficiency::Deficient);
        assert_eq!(deficiency_class(&fz(315)).unwrap(), Deficiency::Deficient);
        for p in [6u64, 28, 496, 8128] {
            assert_eq!(deficiency_class(&fz(p)).unwrap(), Deficiency::Perfect);
        }
    }

    #[test]
    fn primitive_examples() {
        assert!(is_primitive_non_deficient(&fz(6)).unwrap());
        assert!(is_primitive_non_deficient(&fz(945)).unwrap());
        assert!(!is_primitive_non_deficient(&fz(12)).unwrap());
        assert!(!is_primitive_non_deficient(&fz(1)).unwrap());
        // 4095 is odd and abundant but not a B₁ record; it is primitive.
        assert!(is_primitive_non_deficient(&fz(4095)).unwrap());
    }

    #[test]
    fn kl_primitive_examples() {
        assert!(is_kl_primitive(&fz(6)));
        assert!(!is_kl_primitive(&fz(12)));
        assert!(is_kl_primitive(&fz(136)));
        assert!(!is_kl_primitive(&fz(1)));
        assert!(!is_kl_primitive(&fz(8)));
    }

    #[test]
    fn shortcut_agrees_with_exhaustive_check() {
        for n in 1..=3000u64 {
            let f = fz(n);
            assert_eq!(is_kl_primitive(&f), is_kl_primitive_exhaustive(&f), "n = {n}");
        }
    }

    #[test]
    fn classify_examples() {
        let c = classify(&fz(6)).unwrap();
        assert_eq!(c.deficiency, Deficiency::Perfect);
        assert!(c.primitive_non_deficient && c.kl_primitive);
        assert_eq!(c.kl_sign, KlSign::Positive);

        let c = classify(&fz(8)).unwrap();
        assert_eq!(
            (c.deficiency, c.primitive_non_deficient, c.kl_sign, c.kl_primitive),
            (Deficiency::Deficient, false, KlSign::Negative, false)
        );

        let c = classify(&fz(315)).unwrap();
        assert_eq!(c.deficiency, Deficiency::Deficient);
        assert!(!c.primitive_non_deficient);
        assert_eq!(c.kl_sign, KlSign::Positive);
        assert!(c.kl_primitive);
    }

    #[test]
    fn classification_invariants() {
        for n in 1..=2000u64 {
            let c = classify(&fz(n)).unwrap();
            if c.primitive_non_deficient {
                assert!(c.deficiency.is_non_deficient());
            }
            if c.kl_primitive {
                assert!(c.kl_sign.is_non_negative());
            }
        }
    }
}
