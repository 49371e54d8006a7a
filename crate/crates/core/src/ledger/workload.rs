//! Standalone driver feeding a single ledger with Poisson arrivals.

use rand_distr::{Distribution, Exp};

use super::{Ledger, LedgerConfig, LedgerError, LedgerEvent, Transaction, TxId, TxKind};
use crate::des::EventQueue;
use crate::rng::{streams, substream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Workload {
    /// Transaction creation rate (tx/s).
    pub lambda_tps: f64,
    pub n_transactions: usize,
    pub tx_bits: u64,
}

impl Workload {
    pub fn new(lambda_tps: f64, n_transactions: usize, tx_bits: u64) -> Self {
        Self { lambda_tps, n_transactions, tx_bits }
    }
}

enum Ev {
    Arrival,
    Ledger(LedgerEvent),
}

/// Submits `workload.n_transactions` Poisson arrivals and runs until every
/// one is confirmed. Returns the drained ledger for inspection.
pub fn run_workload(config: LedgerConfig, workload: &Workload, seed: u64) -> Result<Ledger, LedgerError> {
    if !(workload.lambda_tps > 0.0) || !workload.lambda_tps.is_finite() {
        return Err(LedgerError::InvalidConfig("lambda_tps must be > 0".into()));
    }
    let mut ledger = Ledger::new(config, seed)?;
    let mut arrivals = substream(seed, streams::ARRIVALS);
    let gap = Exp::new(workload.lambda_tps).expect("rate checked above");
    let mut queue = EventQueue::new();
    let mut created = 0usize;
    if workload.n_transactions > 0 {
        queue.push(gap.sample(&mut arrivals), Ev::Arrival);
    }
    while let Some((now, ev)) = queue.pop() {
        match ev {
            Ev::Arrival => {
                let tx = Transaction::new(TxId(created as u64), TxKind::ServiceRequest, workload.tx_bits, now);
                let s = ledger.submit_transaction(tx, now)?;
                queue.push(s.at, Ev::Ledger(s.event));
                created += 1;
                if created < workload.n_transactions {
                    queue.push(now + gap.sample(&mut arrivals), Ev::Arrival);
                }
            }
            Ev::Ledger(e) => {
                let step = ledger.handle(e, now)?;
                for s in step.scheduled {
                    queue.push(s.at, Ev::Ledger(s.event));
                }
            }
        }
    }
    Ok(ledger)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drains_all_transactions() {
        let l = run_workload(LedgerConfig::public_default(), &Workload::new(10.0, 500, 3000), 4).unwrap();
        assert_eq!(l.metrics().transactions_confirmed(), 500);
        assert_eq!(l.unconfirmed(), 0);
        assert_eq!(l.mempool().count(), 0);
    }

    #[test]
    fn zero_transactions_is_empty() {
        let l = run_workload(LedgerConfig::private_default(), &Workload::new(1.0, 0, 3000), 4).unwrap();
        assert!(l.blocks().is_empty());
    }

    #[test]
    fn rejects_bad_rate() {
        assert!(run_workload(LedgerConfig::private_default(), &Workload::new(0.0, 5, 3000), 4).is_err());
    }
}
