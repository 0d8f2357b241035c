use crate::arithmetic::{divisors, divisors_with_phi, Factorization};
use crate::error::{Error, Result};
use crate::summation::NeumaierSum;

pub const DEFAULT_MASS_TOLERANCE: f64 = 1e-12;

/// A probability distribution on a finite set of positive-integer labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    support: Vec<u64>,
    mass: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(support: Vec<u64>, mass: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(support, mass, DEFAULT_MASS_TOLERANCE)
    }

    /// Validates non-negative masses summing to 1 within `tol` and distinct labels.
    pub fn with_tolerance(support: Vec<u64>, mass: Vec<f64>, tol: f64) -> Result<Self> {
        if support.len() != mass.len() {
            return Err(Error::domain("support and mass lengths differ"));
        }
        if support.is_empty() {
            return Err(Error::domain("empty support"));
        }
        if mass.iter().any(|&m| !(m >= 0.0) || !m.is_finite()) {
            return Err(Error::domain("masses must be finite and non-negative"));
        }
        let total: NeumaierSum = mass.iter().copied().collect();
        if (total.value() - 1.0).abs() > tol {
            return Err(Error::domain(format!("masses sum to {}, not 1", total.value())));
        }
        let mut sorted = support.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("support labels must be distinct"));
        }
        Ok(DiscreteDistribution { support, mass })
    }

    /// Normalizes non-negative weights into a distribution.
    pub fn from_weights(support: Vec<u64>, weights: &[f64]) -> Result<Self> {
        let total: NeumaierSum = weights.iter().copied().collect();
        let total = total.value();
        if !(total > 0.0) {
            return Err(Error::domain("weights must have positive total"));
        }
        Self::new(support, weights.iter().map(|w| w / total).collect())
    }

    /// φ(d)/n on the divisors of n; a distribution for every n.
    pub fn totient(f: &Factorization) -> Self {
        let n = f.n() as f64;
        let (support, mass) = divisors_with_phi(f)
            .into_iter()
            .map(|(d, phi)| (d, phi as f64 / n))
            .unzip();
        DiscreteDistribution { support, mass }
    }

    /// d/(2n) on the divisors of n; a distribution exactly when n is perfect.
    pub fn perfect(f: &Factorization) -> Result<Self> {
        let ds = divisors(f);
        let two_n = 2.0 * f.n() as f64;
        let mass = ds.iter().map(|&d| d as f64 / two_n).collect();
        Self::new(ds, mass)
    }

    /// The uniform distribution on the divisors of n.
    pub fn uniform(f: &Factorization) -> Self {
        let ds = divisors(f);
        let t = ds.len() as f64;
        let mass = vec![1.0 / t; ds.len()];
        DiscreteDistribution { support: ds, mass }
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    fn check_same_support(&self, other: &Self) -> Result<()> {
        if self.support != other.support {
            return Err(Error::domain("distributions have different supports"));
        }
        Ok(())
    }
}

/// D_KL(P‖Q) = Σ p·ln(p/q), natural log.
///
/// Terms with p = 0 contribute 0; p > 0 with q = 0 gives `+∞`.
pub fn kl_divergence(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    p.check_same_support(q)?;
    let mut acc = NeumaierSum::new();
    for (&pi, &qi) in p.mass.iter().zip(&q.mass) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Ok(f64::INFINITY);
        }
        acc.add(pi * (pi / qi).ln());
    }
    Ok(acc.value())
}

/// Endres-Schindelin metric
/// `√(Σ p·ln(2p/(p+q)) + q·ln(2q/(p+q)))`.
pub fn est_metric(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    p.check_same_support(q)?;
    let mut acc = NeumaierSum::new();
    for (&pi, &qi) in p.mass.iter().zip(&q.mass) {
        let m = pi + qi;
        if pi > 0.0 {
            acc.add(pi * (2.0 * pi / m).ln());
        }
        if qi > 0.0 {
            acc.add(qi * (2.0 * qi / m).ln());
        }
    }
    // Each pointwise term is ≥ 0; clamp rounding noise.
    Ok(acc.value().max(0.0).sqrt())
}

/// Pinsker lower bound 2M² with M = maxₓ |p(x) − q(x)|.
pub fn pinsker_lower_bound(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    p.check_same_support(q)?;
    let m = p
        .mass
        .iter()
        .zip(&q.mass)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(2.0 * m * m)
}
