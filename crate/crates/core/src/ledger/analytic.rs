//! Closed-form pieces of the ledger model.

use rand::Rng;
use rand_distr::{Distribution, Exp, Exp1};

use super::LedgerError;
use crate::scalar::Scalar;

/// Draws a block mining time from `Exp(mu)`.
///
/// Panics if `mu` is not strictly positive; ledger configs are validated
/// before any draw happens.
pub fn sample_mining_time<T, R>(rng: &mut R, mu: T) -> T
where
    T: Scalar,
    R: Rng + ?Sized,
    Exp1: Distribution<T>,
{
    Exp::new(mu).expect("mining rate must be positive").sample(rng)
}

/// Probability that a competing block is mined while a block of the given
/// propagation time is still spreading: `1 - exp(-mu t_prop)`.
pub fn fork_probability<T: Scalar>(mu: T, t_prop: T) -> T {
    -(-(mu * t_prop)).exp_m1()
}

/// `T_c = T_up + (T_queue + T_mine + T_prop) / (1 - p_fork)`.
pub fn analytic_confirmation_delay<T: Scalar>(
    t_up: T,
    t_queue: T,
    t_mine: T,
    t_prop: T,
    p_fork: T,
) -> Result<T, LedgerError> {
    if !(p_fork >= T::zero() && p_fork < T::one()) {
        return Err(LedgerError::ForkProbability(p_fork.to_f64_lossy()));
    }
    Ok(t_up + (t_queue + t_mine + t_prop) / (T::one() - p_fork))
}

/// Header share of the bits broadcast when every block carries
/// `txs_per_block` transactions and no block is ever orphaned.
pub fn fork_free_overhead(header_bits: u64, txs_per_block: u64, tx_bits: u64) -> f64 {
    let h = header_bits as f64;
    let total = h + (txs_per_block * tx_bits) as f64;
    if total == 0.0 {
        0.0
    } else {
        h / total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use approx::assert_relative_eq;

    #[test]
    fn eq4_examples() {
        assert_eq!(analytic_confirmation_delay(1.0, 2.0, 3.0, 4.0, 0.0).unwrap(), 10.0);
        assert_eq!(analytic_confirmation_delay(1.0, 2.0, 3.0, 4.0, 0.5).unwrap(), 19.0);
        assert!(analytic_confirmation_delay(1.0, 2.0, 3.0, 4.0, 1.0).is_err());
        assert!(analytic_confirmation_delay(1.0_f32, 2.0, 3.0, 4.0, 1.5).is_err());
    }

    #[test]
    fn fork_probability_examples() {
        assert_eq!(fork_probability(10.0, 0.0), 0.0);
        assert_relative_eq!(fork_probability(10.0, 0.01), 1.0 - (-0.1f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(fork_probability(10.0, 0.01), 0.095_162_581_964_040_43, max_relative = 1e-12);
        assert!(fork_probability(10.0, 0.02) > fork_probability(10.0, 0.01));
        assert!(fork_probability(20.0, 0.01) > fork_probability(10.0, 0.01));
    }

    #[test]
    fn mining_draws_are_non_negative() {
        let mut rng = substream(1, 1);
        for _ in 0..10_000 {
            assert!(sample_mining_time(&mut rng, 10.0_f64) >= 0.0);
            assert!(sample_mining_time(&mut rng, 10.0_f32) >= 0.0);
        }
    }

    #[test]
    fn fork_free_overhead_closed_form() {
        assert_eq!(fork_free_overhead(0, 5, 3000), 0.0);
        assert_relative_eq!(fork_free_overhead(1000, 5, 3000), 1000.0 / 16000.0);
        assert!(fork_free_overhead(1000, 10, 3000) < fork_free_overhead(1000, 5, 3000));
    }
}
