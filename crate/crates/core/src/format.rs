//! Fixed-significant-digit rendering used by every emitted table.

/// Default number of significant digits in emitted tables.
pub const DEFAULT_DIGITS: usize = 12;

/// Renders `x` with `digits` significant digits, dropping trailing zeros.
///
/// Positional notation is used for decimal exponents in `[-7, 21)`, scientific
/// otherwise. `digits` is clamped to `[1, 17]`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let digits = digits.clamp(1, 17);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mant) = match mant.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mant),
    };
    let ds: String = mant.chars().filter(|c| *c != '.').collect();

    if !(-7..21).contains(&exp) {
        let m = trim_fraction(&format!("{}.{}", &ds[..1], &ds[1..]));
        return format!("{sign}{m}e{exp}");
    }
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), ds)
    } else {
        let int_len = exp as usize + 1;
        if int_len >= ds.len() {
            format!("{}{}", ds, "0".repeat(int_len - ds.len()))
        } else {
            format!("{}.{}", &ds[..int_len], &ds[int_len..])
        }
    };
    format!("{sign}{}", trim_fraction(&body))
}

fn trim_fraction(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Renders an optional value; `None` becomes the empty string (CSV) .
pub fn fmt_opt(x: Option<f64>, digits: usize) -> String {
    x.map(|v| fmt_sig(v, digits)).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matches_table_layout() {
        assert_eq!(fmt_sig(0.876_597_250_733_698_2, 12), "0.876597250734");
        assert_eq!(fmt_sig(7.365_776_204_556_17, 12), "7.36577620456");
        assert_eq!(fmt_sig(2.0, 12), "2");
        assert_eq!(fmt_sig(9.130_657_837_50, 12), "9.1306578375");
        assert_eq!(fmt_sig(36_984_230.0, 12), "36984230");
        assert_eq!(fmt_sig(-std::f64::consts::LN_2, 12), "-0.69314718056");
        assert_eq!(fmt_sig(1.5e-9, 12), "1.5e-9");
        assert_eq!(fmt_sig(0.000_123, 6), "0.000123");
        assert_eq!(fmt_sig(1e22, 6), "1e22");
    }

    proptest! {
        #[test]
        fn round_trips_at_declared_precision(x in -1e15f64..1e15, digits in 6usize..=17) {
            let s = fmt_sig(x, digits);
            let back: f64 = s.parse().unwrap();
            let tol = 0.5 * 10f64.powi(1 - digits as i32) * x.abs() * (1.0 + 1e-15) + f64::MIN_POSITIVE;
            prop_assert!((back - x).abs() <= tol, "{x} -> {s}");
        }
    }
}
