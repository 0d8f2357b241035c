//! Divisor-lattice divergences and abundancy record scans.
//!
//! The crate is organised bottom-up:
//!
//! - [`arithmetic`]: factorization, linear sieves and the multiplicative
//!   functions φ, σ, τ, rad and Pillai's gcd-sum, all in exact integers.
//! - [`divergence`]: generic discrete Kullback-Leibler divergence, the
//!   Endres-Schindelin metric, Pinsker bounds, and the divisor sum
//!   `KL(n) = Σ_{d|n} d·ln(d / 2φ(d))` with a robust sign predicate.
//! - [`classify`]: deficient/perfect/abundant, primitive non-deficiency and
//!   KL-primitivity.
//! - [`sequences`]: record-setter scans (B₁, B₂, T, Tₒ, KL-primitive) with
//!   resumable checkpoints.
//! - [`verify`]: a registry of inequalities checked over integer ranges.

pub mod arithmetic;
pub mod budget;
pub mod classify;
pub mod context;
pub mod divergence;
pub mod error;
pub mod extended;
pub mod format;
pub mod sequences;
pub mod summation;
pub mod verify;

pub use arithmetic::{factorize, Factorization, MultiplicativeTable, Ratio, SpfSieve};
pub use context::ScanContext;
pub use error::{Error, Result};
