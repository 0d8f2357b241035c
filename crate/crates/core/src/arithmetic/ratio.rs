use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// An exact rational `num / den` with `den > 0`, not necessarily reduced.
///
/// Comparisons cross-multiply in 128 bits and fall back to big integers on
/// overflow, so they are always exact.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Ratio {
    pub num: i128,
    pub den: i128,
}

impl Ratio {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        if den < 0 {
            Ratio { num: -num, den: -den }
        } else {
            Ratio { num, den }
        }
    }

    pub fn from_int(k: i128) -> Self {
        Ratio { num: k, den: 1 }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn signum(self) -> Ordering {
        self.num.cmp(&0)
    }

    /// `self - k` for an integer `k`.
    pub fn sub_int(self, k: i128) -> Ratio {
        Ratio {
            num: self.num - k * self.den,
            den: self.den,
        }
    }

    pub fn reduced(self) -> Ratio {
        let g = gcd_i128(self.num, self.den);
        if g <= 1 {
            self
        } else {
            Ratio {
                num: self.num / g,
                den: self.den / g,
            }
        }
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

/// Exact comparison of `a·b` against `c·d`.
pub fn cmp_products(a: i128, b: i128, c: i128, d: i128) -> Ordering {
    match (a.checked_mul(b), c.checked_mul(d)) {
        (Some(x), Some(y)) => x.cmp(&y),
        _ => (BigInt::from(a) * b).cmp(&(BigInt::from(c) * d)),
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_products(self.num, other.den, other.num, self.den)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unreduced_equality() {
        assert_eq!(Ratio::new(2, 4), Ratio::new(1, 2));
        assert_eq!(Ratio::new(1, -2), Ratio::new(-1, 2));
        assert!(Ratio::new(105, 48) > Ratio::from_int(2));
        assert_eq!(Ratio::new(105, 48).sub_int(2), Ratio::new(3, 16));
        assert_eq!(Ratio::new(6, 4).reduced().den, 2);
    }

    #[test]
    fn overflowing_cross_products_fall_back() {
        let a = Ratio::new(i128::MAX / 3, i128::MAX / 5);
        let b = Ratio::new(i128::MAX / 5, i128::MAX / 3);
        assert!(a > b);
    }
}
