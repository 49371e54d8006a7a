//! Counters and delay samples collected by a ledger.

use serde::Serialize;

use super::analytic::analytic_confirmation_delay;
use super::LedgerError;

/// Delay samples and bit counters of one ledger.
///
/// `attempt_*` vectors hold one entry per (transaction, block inclusion);
/// `block_*` vectors hold one entry per mined block.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LedgerMetrics {
    pub transactions_submitted: u64,
    pub confirmation_delays: Vec<f64>,
    pub upload_delays: Vec<f64>,
    pub attempt_queue_delays: Vec<f64>,
    pub attempt_mining_delays: Vec<f64>,
    pub attempt_propagation_delays: Vec<f64>,
    pub block_mining_delays: Vec<f64>,
    pub block_propagation_delays: Vec<f64>,
    pub blocks_appended: u64,
    pub blocks_orphaned: u64,
    pub header_bits_sent: u64,
    pub payload_bits_sent: u64,
    pub confirmed_payload_bits: u64,
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

impl LedgerMetrics {
    pub fn transactions_confirmed(&self) -> usize {
        self.confirmation_delays.len()
    }

    pub fn blocks_mined(&self) -> u64 {
        self.blocks_appended + self.blocks_orphaned
    }

    pub fn forks(&self) -> u64 {
        self.blocks_orphaned
    }

    /// Orphaned fraction of mined blocks.
    pub fn fork_rate(&self) -> f64 {
        match self.blocks_mined() {
            0 => 0.0,
            n => self.blocks_orphaned as f64 / n as f64,
        }
    }

    pub fn mean_confirmation_delay(&self) -> f64 {
        mean(&self.confirmation_delays)
    }

    pub fn mean_upload_delay(&self) -> f64 {
        mean(&self.upload_delays)
    }

    pub fn mean_queue_delay(&self) -> f64 {
        mean(&self.attempt_queue_delays)
    }

    /// Mean queueing, mining and propagation time per block inclusion.
    pub fn mean_attempt_components(&self) -> (f64, f64, f64) {
        (
            mean(&self.attempt_queue_delays),
            mean(&self.attempt_mining_delays),
            mean(&self.attempt_propagation_delays),
        )
    }

    pub fn mean_mining_delay(&self) -> f64 {
        mean(&self.block_mining_delays)
    }

    pub fn mean_propagation_delay(&self) -> f64 {
        mean(&self.block_propagation_delays)
    }

    pub fn total_bits(&self) -> u64 {
        self.header_bits_sent + self.payload_bits_sent
    }

    /// Confirmation delay predicted from measured per-attempt component
    /// means and the empirical per-block fork rate.
    pub fn analytic_prediction(&self) -> Result<f64, LedgerError> {
        analytic_confirmation_delay(
            mean(&self.upload_delays),
            mean(&self.attempt_queue_delays),
            mean(&self.attempt_mining_delays),
            mean(&self.attempt_propagation_delays),
            self.fork_rate(),
        )
    }
}

/// Fraction of broadcast bits that are not confirmed payload: block
/// headers plus every payload bit carried by an orphaned block.
pub fn overhead_ratio(metrics: &LedgerMetrics) -> Result<f64, LedgerError> {
    let total = metrics.total_bits();
    if total == 0 {
        return Err(LedgerError::NoTraffic);
    }
    Ok((total - metrics.confirmed_payload_bits) as f64 / total as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overhead_without_headers_or_forks_is_zero() {
        let m = LedgerMetrics { payload_bits_sent: 9000, confirmed_payload_bits: 9000, ..Default::default() };
        assert_eq!(overhead_ratio(&m).unwrap(), 0.0);
    }

    #[test]
    fn overhead_header_closed_form() {
        // 4 blocks of 5 transactions with a 1000-bit header each.
        let m = LedgerMetrics {
            header_bits_sent: 4000,
            payload_bits_sent: 60_000,
            confirmed_payload_bits: 60_000,
            ..Default::default()
        };
        assert_eq!(overhead_ratio(&m).unwrap(), 1000.0 / 16_000.0);
    }

    #[test]
    fn overhead_needs_traffic() {
        assert!(matches!(overhead_ratio(&LedgerMetrics::default()), Err(LedgerError::NoTraffic)));
    }

    #[test]
    fn empty_means_are_zero() {
        let m = LedgerMetrics::default();
        assert_eq!(m.mean_confirmation_delay(), 0.0);
        assert_eq!(m.fork_rate(), 0.0);
    }
}
