//! Fixed-point natural logarithms of rationals at arbitrary precision.
//!
//! Used to settle sign decisions that double precision cannot: a value is
//! carried as `mantissa · 2^-bits` and every logarithm is accurate to within
//! [`LN_ERROR_ULPS`] units in the last place.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Worst-case error of [`ln_ratio`] in units of `2^-bits`.
pub const LN_ERROR_ULPS: u64 = 1;

const GUARD_BITS: u32 = 64;

/// Binary fixed-point number `mantissa · 2^-bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    mantissa: BigInt,
    bits: u32,
}

impl Fixed {
    pub fn zero(bits: u32) -> Self {
        Fixed {
            mantissa: BigInt::zero(),
            bits,
        }
    }

    /// `num / den` truncated toward zero.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, bits: u32) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        let mantissa = (num.into() << bits) / den;
        Fixed { mantissa, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn signum(&self) -> Ordering {
        match self.mantissa.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// Absolute value in whole ulps.
    pub fn abs_ulps(&self) -> BigUint {
        self.mantissa.abs().to_biguint().expect("non-negative")
    }

    pub fn mul_int(&self, k: u64) -> Self {
        Fixed {
            mantissa: &self.mantissa * k,
            bits: self.bits,
        }
    }

    /// Division by a positive integer, truncating toward zero (adds < 1 ulp).
    pub fn div_int(&self, k: u64) -> Self {
        assert!(k > 0);
        Fixed {
            mantissa: &self.mantissa / k,
            bits: self.bits,
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Keep 64 significant bits before converting so huge mantissas do not overflow.
        let len = self.mantissa.bits();
        if len <= 1000 {
            let m = self.mantissa.to_f64().unwrap_or(f64::NAN);
            return m * 2f64.powi(-(self.bits as i32));
        }
        let shift = len - 64;
        let m = (&self.mantissa >> shift).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(shift as i32 - self.bits as i32)
    }

    /// Decimal rendering truncated to `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scaled: BigInt = (self.mantissa.abs() * BigInt::from(10u32).pow(digits as u32)) >> self.bits;
        let mut s = scaled.to_string();
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    fn assert_same_scale(&self, other: &Fixed) {
        assert_eq!(self.bits, other.bits, "fixed-point scale mismatch");
    }
}

impl AddAssign<&Fixed> for Fixed {
    fn add_assign(&mut self, rhs: &Fixed) {
        self.assert_same_scale(rhs);
        self.mantissa += &rhs.mantissa;
    }
}

impl Add for Fixed {
    type Output = Fixed;
    fn add(mut self, rhs: Fixed) -> Fixed {
        self += &rhs;
        self
    }
}

impl Sub for Fixed {
    type Output = Fixed;
    fn sub(mut self, rhs: Fixed) -> Fixed {
        self.assert_same_scale(&rhs);
        self.mantissa -= rhs.mantissa;
        self
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed {
            mantissa: -self.mantissa,
            bits: self.bits,
        }
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.bits as f64 * std::f64::consts::LOG10_2) as usize;
        f.write_str(&self.to_decimal(digits.min(f.precision().unwrap_or(usize::MAX))))
    }
}

/// `2·atanh(p/q) · 2^w` for |p/q| ≤ 1/3, via the odd power series.
fn two_atanh(p: &BigInt, q: &BigInt, w: u32) -> BigInt {
    // Shifts floor toward -inf, so work on |p| to make the series terminate.
    if p.is_negative() {
        return -two_atanh(&-p, q, w);
    }
    let t: BigInt = (p << w) / q;
    let t2: BigInt = (&t * &t) >> w;
    let mut term = t.clone();
    let mut sum = t;
    let mut k: u64 = 1;
    loop {
        term = (&term * &t2) >> w;
        if term.is_zero() {
            break;
        }
        sum += &term / (2 * k + 1);
        k += 1;
    }
    sum << 1
}

/// `ln(num/den)` as a fixed-point number with `bits` fractional bits.
///
/// The result is within [`LN_ERROR_ULPS`] of the true value; `ln(1)` is
/// returned as an exact zero.
pub fn ln_ratio(num: &BigUint, den: &BigUint, bits: u32) -> Fixed {
    assert!(!num.is_zero() && !den.is_zero(), "logarithm of zero");
    if num == den {
        return Fixed::zero(bits);
    }
    let w = bits + GUARD_BITS;
    // Scale so that a/b lies in (1/2, 2); then t = (a-b)/(a+b) has |t| < 1/3.
    let e = num.bits() as i64 - den.bits() as i64;
    let (a, b) = if e >= 0 {
        (BigInt::from(num.clone()), BigInt::from(den.clone() << e as u64))
    } else {
        (BigInt::from(num.clone() << (-e) as u64), BigInt::from(den.clone()))
    };
    let mut acc = two_atanh(&(&a - &b), &(&a + &b), w);
    if e != 0 {
        let ln2 = two_atanh(&BigInt::from(1), &BigInt::from(3), w);
        acc += ln2 * e;
    }
    // Round to nearest at the requested precision.
    let half = BigInt::from(1) << (GUARD_BITS - 1);
    let mantissa = (acc + half).div_floor(&(BigInt::from(1) << GUARD_BITS));
    Fixed { mantissa, bits }
}

/// Convenience wrapper over [`ln_ratio`] for machine integers.
pub fn ln_ratio_u128(num: u128, den: u128, bits: u32) -> Fixed {
    ln_ratio(&BigUint::from(num), &BigUint::from(den), bits)
}

/// A fixed-point sum together with a bound on its accumulated error in ulps.
#[derive(Clone, Debug)]
pub struct ExtendedSum {
    value: Fixed,
    error_ulps: BigUint,
}

impl ExtendedSum {
    pub fn new(bits: u32) -> Self {
        ExtendedSum {
            value: Fixed::zero(bits),
            error_ulps: BigUint::zero(),
        }
    }

    pub fn bits(&self) -> u32 {
        self.value.bits
    }

    /// Adds `weight · ln(num/den)`.
    pub fn add_weighted_ln(&mut self, weight: u64, num: u128, den: u128) {
        if num == den || weight == 0 {
            return;
        }
        let ln = ln_ratio_u128(num, den, self.value.bits);
        self.value += &ln.mul_int(weight);
        self.error_ulps += BigUint::from(weight) * LN_ERROR_ULPS;
    }

    /// Adds `ln(num/den) / divisor`.
    pub fn add_ln_over(&mut self, num: u128, den: u128, divisor: u64) {
        if num == den {
            return;
        }
        let ln = ln_ratio_u128(num, den, self.value.bits);
        self.value += &ln.div_int(divisor);
        // ln error scaled by 1/divisor, plus truncation.
        self.error_ulps += BigUint::from(LN_ERROR_ULPS + 1);
    }

    /// Adds an exact rational `num/den` (truncated, < 1 ulp).
    pub fn add_ratio(&mut self, num: i128, den: u128) {
        let r = Fixed::from_ratio(num, den, self.value.bits);
        self.value += &r;
        if (BigInt::from(num) << self.value.bits) % BigInt::from(den) != BigInt::zero() {
            self.error_ulps += 1u32;
        }
    }

    /// Adds `sign · √(num/den)` (floor of the scaled root, < 2 ulps).
    pub fn add_sqrt_ratio(&mut self, num: &BigUint, den: &BigUint, negative: bool) {
        assert!(!den.is_zero(), "zero denominator");
        let scaled = (num << (2 * self.value.bits as u64)) / den;
        let root = BigInt::from(scaled.sqrt());
        let root = Fixed {
            mantissa: if negative { -root } else { root },
            bits: self.value.bits,
        };
        self.value += &root;
        self.error_ulps += 2u32;
    }

    /// Adds another sum at the same precision.
    pub fn add_sum(&mut self, other: &ExtendedSum) {
        assert_eq!(self.value.bits, other.value.bits, "precision mismatch");
        self.value += &other.value;
        self.error_ulps += &other.error_ulps;
    }

    pub fn negated(&self) -> ExtendedSum {
        ExtendedSum {
            value: -self.value.clone(),
            error_ulps: self.error_ulps.clone(),
        }
    }

    pub fn value(&self) -> &Fixed {
        &self.value
    }

    pub fn error_ulps(&self) -> &BigUint {
        &self.error_ulps
    }

    /// Error bound as a real number.
    pub fn error_bound(&self) -> f64 {
        self.error_ulps.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-(self.value.bits as i32))
    }

    /// Sign of the true value, if the error bound excludes zero.
    ///
    /// An exact zero with zero accumulated error is reported as `Equal`.
    pub fn certain_sign(&self) -> Option<Ordering> {
        let mag = self.value.abs_ulps();
        if mag > self.error_ulps {
            Some(self.value.signum())
        } else if mag.is_zero() && self.error_ulps.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}
