//! Discrete divergences and the divisor-lattice sum KL(n).

mod distribution;
mod kl;

pub use distribution::{
    est_metric, kl_divergence, pinsker_lower_bound, DiscreteDistribution, DEFAULT_MASS_TOLERANCE,
};
pub use kl::{
    kl_n, kl_n_extended, kl_n_h_form, kl_n_sign, kl_pinsker_bound, kl_sieve, v_n, DivergenceValue,
    KlSign, KlTable, Precision, EXTENDED_BITS, KL_SIEVE_BYTES_PER_ENTRY,
};
pub(crate) use kl::{kl_extended_sum, v_n_extended};
