//! Time series and counters produced by one scenario run.

use serde::Serialize;

use super::config::SharingMode;
use crate::des::Seconds;
use crate::ids::{CellId, OperatorId, UserId};
use crate::ledger::{LedgerKind, LedgerMetrics, TxId};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MarketCounters {
    pub service_requests: u64,
    pub service_confirmations: u64,
    pub awards: u64,
    pub rejected: u64,
    pub ran_requests: u64,
    pub ran_confirmations: u64,
    pub leases: u64,
    pub unmatched_ran_requests: u64,
    pub units_reverted: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpochRecord {
    pub t: Seconds,
    pub aggregate_capacity_bps: f64,
    pub mean_acceptance: f64,
    pub mean_ap_load: f64,
    pub served_users: usize,
    pub leased_units: usize,
    pub counters: MarketCounters,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MarketAction {
    Award { user: UserId, seller: OperatorId },
    Rejection { user: UserId, seller: OperatorId },
    Lease { lessee: OperatorId, lessor: OperatorId, cell: CellId, units: usize },
    NoSupply { operator: OperatorId, cell: CellId },
}

/// A market effect and the transaction whose confirmation enabled it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarketLogEntry {
    pub at: Seconds,
    pub action: MarketAction,
    pub ledger: LedgerKind,
    pub enabling_tx: TxId,
    pub enabling_confirmed_at: Seconds,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsSeries {
    pub seed: u64,
    pub mode: SharingMode,
    pub records: Vec<EpochRecord>,
    pub public: LedgerMetrics,
    pub private: LedgerMetrics,
    pub counters: MarketCounters,
    pub log: Vec<MarketLogEntry>,
}

fn mean_of(records: &[EpochRecord], f: impl Fn(&EpochRecord) -> f64) -> f64 {
    if records.is_empty() {
        0.0
    } else {
        records.iter().map(f).sum::<f64>() / records.len() as f64
    }
}

impl MetricsSeries {
    pub fn mean_capacity_bps(&self) -> f64 {
        mean_of(&self.records, |r| r.aggregate_capacity_bps)
    }

    pub fn mean_acceptance(&self) -> f64 {
        mean_of(&self.records, |r| r.mean_acceptance)
    }

    pub fn mean_ap_load(&self) -> f64 {
        mean_of(&self.records, |r| r.mean_ap_load)
    }

    pub fn mean_served_users(&self) -> f64 {
        mean_of(&self.records, |r| r.served_users as f64)
    }
}
