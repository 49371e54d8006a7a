mod common;

use std::collections::BTreeMap;

use approx::assert_relative_eq;
use bcran::dcf::{access_delay, DcfParams};
use bcran::des::EventQueue;
use bcran::ledger::{
    analytic_confirmation_delay, run_workload, BlockStatus, ContenderSource, ForkModel, Ledger, LedgerConfig,
    LedgerEvent, LinkModel, Transaction, TxId, TxKind, Workload, BACKHAUL_LATENCY_S,
};
use common::binomial_sigma;
use proptest::prelude::*;

fn tx(id: u64, at: f64) -> Transaction {
    Transaction::new(TxId(id), TxKind::ServiceRequest, 3_000, at)
}

/// Checks every structural invariant of a drained ledger.
fn audit(ledger: &Ledger) {
    let cfg = ledger.config();
    let mut confirmed_in: BTreeMap<TxId, usize> = BTreeMap::new();
    for b in ledger.blocks() {
        assert!(b.payload_bits <= cfg.block_size_bits, "block {:?} overfull", b.id);
        assert!(!b.transactions.is_empty());
        let mined = b.mined_at.expect("drained ledger mined every block");
        let propagated = b.propagated_at.expect("drained ledger propagated every block");
        assert!(b.mining_started_at <= mined && mined <= propagated);
        if b.status == BlockStatus::Appended {
            for t in &b.transactions {
                *confirmed_in.entry(*t).or_default() += 1;
            }
        }
    }
    let m = ledger.metrics();
    assert_eq!(m.transactions_confirmed() as u64, m.transactions_submitted);
    assert_eq!(m.blocks_mined(), ledger.blocks().len() as u64);
    assert_eq!(ledger.unconfirmed(), 0);
    assert_eq!(ledger.mempool().count(), 0);
    for t in ledger.transactions() {
        assert_eq!(confirmed_in.get(&t.id), Some(&1), "{} confirmed {:?} times", t.id, confirmed_in.get(&t.id));
        let final_block = ledger
            .blocks()
            .iter()
            .find(|b| b.status == BlockStatus::Appended && b.transactions.contains(&t.id))
            .unwrap();
        let uploaded = t.uploaded_at.unwrap();
        let confirmed = t.confirmed_at.unwrap();
        assert_eq!(confirmed, final_block.propagated_at.unwrap());
        assert!(final_block.mining_started_at >= uploaded);
        // T_c >= T_up + T_queue + T_mine + T_prop of the final block.
        let queue_floor = final_block.mining_started_at - uploaded;
        let components = (uploaded - t.created_at)
            + queue_floor
            + (final_block.mined_at.unwrap() - final_block.mining_started_at)
            + (confirmed - final_block.mined_at.unwrap());
        assert!(t.confirmation_delay().unwrap() >= components - 1e-12);
    }
}

#[test]
fn rapid_submissions_enter_mempool_in_upload_order() {
    let cfg = LedgerConfig { block_size_bits: 1_000_000, max_wait_s: 1e6, ..LedgerConfig::public_default() };
    let mut ledger = Ledger::new(cfg, 1).unwrap();
    let mut queue = EventQueue::new();
    for i in 0..100 {
        let s = ledger.submit_transaction(tx(i, i as f64 * 1e-5), i as f64 * 1e-5).unwrap();
        queue.push(s.at, s.event);
    }
    while let Some((t, ev)) = queue.pop() {
        if let LedgerEvent::Uploaded(_) = ev {
            ledger.handle(ev, t).unwrap();
        }
    }
    let mut by_upload: Vec<(f64, TxId)> = ledger.transactions().map(|t| (t.uploaded_at.unwrap(), t.id)).collect();
    by_upload.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let order: Vec<TxId> = by_upload.into_iter().map(|(_, id)| id).collect();
    assert_eq!(ledger.mempool().collect::<Vec<_>>(), order);
}

#[test]
fn public_upload_uses_contender_count() {
    let mut ledger = Ledger::new(LedgerConfig::public_default(), 1).unwrap();
    let p = DcfParams::default();
    for i in 0..5u64 {
        let s = ledger.submit_transaction(tx(i, 0.0), 0.0).unwrap();
        assert_relative_eq!(s.at, access_delay(i as usize + 1, 3_000, &p).unwrap(), max_relative = 1e-15);
    }
    let fixed = LedgerConfig {
        link: LinkModel::Dcf { params: p, contenders: ContenderSource::Fixed(4) },
        ..LedgerConfig::public_default()
    };
    let mut ledger = Ledger::new(fixed, 1).unwrap();
    let s = ledger.submit_transaction(tx(0, 1.0), 1.0).unwrap();
    assert_relative_eq!(s.at - 1.0, access_delay(4, 3_000, &p).unwrap(), max_relative = 1e-12);
}

#[test]
fn private_ledger_invariants() {
    let ledger = run_workload(LedgerConfig::private_default(), &Workload::new(5.0, 3_000, 3_000), 4).unwrap();
    audit(&ledger);
    let m = ledger.metrics();
    assert_eq!(m.forks(), 0);
    assert!(m.block_propagation_delays.iter().all(|&d| (d - BACKHAUL_LATENCY_S).abs() < 1e-12));
    assert!(m.upload_delays.iter().all(|&d| (d - BACKHAUL_LATENCY_S).abs() < 1e-12));
}

#[test]
fn recorded_propagation_matches_trace() {
    let ledger = run_workload(LedgerConfig::public_default(), &Workload::new(20.0, 3_000, 3_000), 6).unwrap();
    audit(&ledger);
    let p = DcfParams::default();
    let m = ledger.metrics();
    assert_eq!(m.block_propagation_delays.len(), ledger.blocks().len());
    for (b, &recorded) in ledger.blocks().iter().zip(&m.block_propagation_delays) {
        let trace = b.propagated_at.unwrap() - b.mined_at.unwrap();
        assert_relative_eq!(recorded, trace, max_relative = 1e-12);
        let model = access_delay(10, b.total_bits(), &p).unwrap();
        assert_relative_eq!(trace, model, max_relative = 1e-9);
        let mining = b.mined_at.unwrap() - b.mining_started_at;
        assert!(m.block_mining_delays.iter().any(|&x| (x - mining).abs() < 1e-12));
    }
}

#[test]
fn saturated_blocks_are_full() {
    for k in [1u64, 3, 5, 10] {
        let cfg = LedgerConfig { block_size_bits: k * 3_000, ..LedgerConfig::public_default() };
        let ledger = run_workload(cfg, &Workload::new(2_000.0, 2_000, 3_000), 2).unwrap();
        audit(&ledger);
        let short: Vec<_> = ledger.blocks().iter().filter(|b| b.transactions.len() as u64 != k).collect();
        // Only the tail of the run can leave a partial block on the timer.
        assert!(short.len() <= 1, "k = {k}: {} partial blocks", short.len());
    }
}

#[test]
fn fixed_fork_probability_is_calibrated() {
    let cfg = LedgerConfig { forks: ForkModel::Fixed(0.2), ..LedgerConfig::public_default() };
    let ledger = run_workload(cfg, &Workload::new(500.0, 40_000, 3_000), 8).unwrap();
    let m = ledger.metrics();
    let n = m.blocks_mined() as usize;
    assert!(n >= 10_000, "{n} blocks");
    assert!((m.fork_rate() - 0.2).abs() < 3.0 * binomial_sigma(0.2, n), "rate {}", m.fork_rate());
    audit(&ledger);
}

#[test]
fn no_fork_model_always_appends() {
    let cfg = LedgerConfig { forks: ForkModel::None, ..LedgerConfig::public_default() };
    let ledger = run_workload(cfg, &Workload::new(50.0, 2_000, 3_000), 8).unwrap();
    assert_eq!(ledger.metrics().forks(), 0);
}

#[test]
fn des_matches_closed_form_delay() {
    for (lambda, s_b, t_wait) in [(1.0, 15_000, 5.0), (10.0, 15_000, 0.1), (0.1, 3_000, 5.0), (20.0, 30_000, 5.0)] {
        let cfg = LedgerConfig { block_size_bits: s_b, max_wait_s: t_wait, ..LedgerConfig::public_default() };
        let m = run_workload(cfg, &Workload::new(lambda, 10_000, 3_000), 3).unwrap().into_metrics();
        assert!(m.fork_rate() < 0.3);
        let (q, mine, prop) = m.mean_attempt_components();
        let predicted = analytic_confirmation_delay(m.mean_upload_delay(), q, mine, prop, m.fork_rate()).unwrap();
        assert_relative_eq!(m.mean_confirmation_delay(), predicted, max_relative = 0.05);
    }
}

#[test]
fn identical_seeds_give_identical_traces() {
    let w = Workload::new(3.0, 1_000, 3_000);
    let a = run_workload(LedgerConfig::public_default(), &w, 12).unwrap();
    let b = run_workload(LedgerConfig::public_default(), &w, 12).unwrap();
    assert_eq!(a.blocks(), b.blocks());
    assert_eq!(a.metrics(), b.metrics());
    let c = run_workload(LedgerConfig::public_default(), &w, 13).unwrap();
    assert_ne!(a.metrics(), c.metrics());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conservation_and_capacity(
        seed in any::<u64>(),
        k in 1u64..8,
        t_wait in 0.05..6.0f64,
        lambda in 0.2..80.0f64,
        fork in 0.0..0.6f64,
        private in any::<bool>(),
    ) {
        let base = if private { LedgerConfig::private_default() } else { LedgerConfig::public_default() };
        let forks = if private { ForkModel::None } else { ForkModel::Fixed(fork) };
        let cfg = LedgerConfig { block_size_bits: k * 3_000, max_wait_s: t_wait, forks, ..base };
        let ledger = run_workload(cfg, &Workload::new(lambda, 300, 3_000), seed).unwrap();
        audit(&ledger);
    }
}
