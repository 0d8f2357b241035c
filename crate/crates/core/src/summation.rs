//! Compensated summation with a running forward error bound.

/// Neumaier's variant of Kahan summation.
///
/// Besides the compensated sum it tracks `Σ|xᵢ|` and the number of terms, which
/// is enough to bound the forward error of the result:
/// `|ŝ − s| ≤ 2u·|s| + 2n·u²·Σ|xᵢ|` with `u` the unit roundoff.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
    abs: f64,
    terms: u64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
        self.terms += 1;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Σ|xᵢ| over all added terms.
    pub fn abs_sum(&self) -> f64 {
        self.abs
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }

    /// Bound on the error introduced by the summation itself (not by the terms).
    pub fn error_bound(&self) -> f64 {
        summation_error_bound(self.value(), self.abs, self.terms)
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        s.extend(iter);
        s
    }
}

/// Forward error bound of a compensated sum, see [`NeumaierSum`].
pub fn summation_error_bound(value: f64, abs_sum: f64, terms: u64) -> f64 {
    let u = f64::EPSILON / 2.0;
    2.0 * u * value.abs() + 2.0 * (terms as f64 + 1.0) * u * u * abs_sum
}
