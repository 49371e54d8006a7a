//! Event-driven blockchain pipeline shared by the public and private ledgers.
//!
//! A transaction is uploaded over the ledger's link, waits in the mempool,
//! is packed into a block when the pending payload reaches the block size or
//! the wait timer expires, is mined after an exponential delay and is then
//! propagated. On the public ledger a propagated block may lose a fork race,
//! in which case its transactions go back to the head of the mempool and
//! start over. The private ledger never forks.
//!
//! The ledger does not own a clock. Callers feed it [`LedgerEvent`]s at the
//! times it asks for and receive confirmed transactions back.

mod analytic;
mod metrics;
mod workload;

use std::collections::{BTreeMap, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use analytic::{analytic_confirmation_delay, fork_free_overhead, fork_probability, sample_mining_time};
pub use metrics::{overhead_ratio, LedgerMetrics};
pub use workload::{run_workload, Workload};

use crate::dcf::{self, DcfError, DcfParams};
use crate::des::Seconds;
use crate::rng::{streams, substream, SimRng};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LedgerError {
    #[error("transaction {0} was already submitted")]
    DuplicateTransaction(TxId),
    #[error("transaction of {bits} bits can never fit a {limit}-bit block")]
    OversizedTransaction { bits: u64, limit: u64 },
    #[error("transaction {0} has zero size")]
    EmptyTransaction(TxId),
    #[error("fork probability {0} outside [0, 1)")]
    ForkProbability(f64),
    #[error("ledger carried no traffic")]
    NoTraffic,
    #[error("invalid ledger config: {0}")]
    InvalidConfig(String),
    #[error("link model: {0}")]
    Link(#[from] DcfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TxId(pub u64);

impl std::fmt::Display for TxId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "tx{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockId(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TxKind {
    ServiceRequest,
    ServiceAward,
    ResourceRequest,
    ResourceLease,
}

impl TxKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TxKind::ServiceRequest => "service_request",
            TxKind::ServiceAward => "service_award",
            TxKind::ResourceRequest => "resource_request",
            TxKind::ResourceLease => "resource_lease",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transaction {
    pub id: TxId,
    pub kind: TxKind,
    pub size_bits: u64,
    pub created_at: Seconds,
    pub uploaded_at: Option<Seconds>,
    pub confirmed_at: Option<Seconds>,
}

impl Transaction {
    pub fn new(id: TxId, kind: TxKind, size_bits: u64, created_at: Seconds) -> Self {
        Self { id, kind, size_bits, created_at, uploaded_at: None, confirmed_at: None }
    }

    /// Creation-to-append latency, once confirmed.
    pub fn confirmation_delay(&self) -> Option<Seconds> {
        self.confirmed_at.map(|c| c - self.created_at)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockStatus {
    Pending,
    Appended,
    Orphaned,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Block {
    pub id: BlockId,
    pub parent: Option<BlockId>,
    pub transactions: Vec<TxId>,
    pub payload_bits: u64,
    pub header_bits: u64,
    pub mining_started_at: Seconds,
    pub mined_at: Option<Seconds>,
    pub propagated_at: Option<Seconds>,
    pub status: BlockStatus,
}

impl Block {
    pub fn total_bits(&self) -> u64 {
        self.payload_bits + self.header_bits
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LedgerKind {
    Public,
    Private,
}

impl LedgerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LedgerKind::Public => "public",
            LedgerKind::Private => "private",
        }
    }
}

/// How many stations contend when a transaction is uploaded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContenderSource {
    /// Transactions currently uploading, including the new one.
    ActiveUploads,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkModel {
    Constant { delay_s: Seconds },
    Dcf { params: DcfParams<f64>, contenders: ContenderSource },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForkModel {
    None,
    /// `p_fork = 1 - exp(-mu T_prop)` per propagated block.
    ExponentialRace,
    /// Constant orphaning probability, for calibration runs.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerConfig {
    pub kind: LedgerKind,
    pub block_size_bits: u64,
    pub max_wait_s: Seconds,
    pub mining_rate: f64,
    pub link: LinkModel,
    pub n_peers: usize,
    pub header_bits: u64,
    pub forks: ForkModel,
}

/// Fixed latency of the wired inter-operator interfaces.
pub const BACKHAUL_LATENCY_S: Seconds = 0.010;

impl LedgerConfig {
    /// Service ledger over 802.11 links, prone to forks.
    pub fn public_default() -> Self {
        Self {
            kind: LedgerKind::Public,
            block_size_bits: 15_000,
            max_wait_s: 5.0,
            mining_rate: 10.0,
            link: LinkModel::Dcf { params: DcfParams::default(), contenders: ContenderSource::ActiveUploads },
            n_peers: 10,
            header_bits: 1_000,
            forks: ForkModel::ExponentialRace,
        }
    }

    /// RAN ledger over the backhaul, fork-free.
    pub fn private_default() -> Self {
        Self {
            kind: LedgerKind::Private,
            link: LinkModel::Constant { delay_s: BACKHAUL_LATENCY_S },
            forks: ForkModel::None,
            ..Self::public_default()
        }
    }

    pub fn validate(&self) -> Result<(), LedgerError> {
        let bad = |m: &str| Err(LedgerError::InvalidConfig(m.to_string()));
        if self.block_size_bits == 0 {
            return bad("block_size_bits must be > 0");
        }
        if !(self.max_wait_s > 0.0) || !self.max_wait_s.is_finite() {
            return bad("max_wait_s must be > 0");
        }
        if !(self.mining_rate > 0.0) || !self.mining_rate.is_finite() {
            return bad("mining_rate must be > 0");
        }
        if self.n_peers == 0 {
            return bad("n_peers must be >= 1");
        }
        match self.link {
            LinkModel::Constant { delay_s } if !(delay_s >= 0.0) || !delay_s.is_finite() => {
                return bad("constant link delay must be >= 0");
            }
            LinkModel::Dcf { params, contenders } => {
                params.validate()?;
                if contenders == ContenderSource::Fixed(0) {
                    return bad("fixed contender count must be >= 1");
                }
            }
            _ => {}
        }
        match (self.kind, self.forks) {
            (LedgerKind::Private, ForkModel::None) | (LedgerKind::Public, _) => {}
            (LedgerKind::Private, _) => return bad("private ledger must be fork-free"),
        }
        if let ForkModel::Fixed(p) = self.forks {
            if !(0.0..1.0).contains(&p) {
                return bad("fixed fork probability must be in [0, 1)");
            }
        }
        Ok(())
    }

    /// Transactions per block when every transaction is `tx_bits` long.
    pub fn txs_per_block(&self, tx_bits: u64) -> u64 {
        self.block_size_bits / tx_bits.max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LedgerEvent {
    Uploaded(TxId),
    Timer(u64),
    Mined(BlockId),
    Propagated(BlockId),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scheduled {
    pub at: Seconds,
    pub event: LedgerEvent,
}

#[derive(Debug, Default, Clone, PartialEq)]
pub struct LedgerStep {
    pub scheduled: Vec<Scheduled>,
    pub confirmed: Vec<Transaction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockOutcome {
    Appended,
    Orphaned,
}

#[derive(Debug, Clone, Default)]
struct Attempt {
    queue: Seconds,
    mine: Seconds,
    prop: Seconds,
}

#[derive(Debug, Clone)]
struct TxEntry {
    tx: Transaction,
    entered_mempool_at: Seconds,
    attempt: Attempt,
    attempts: u32,
}

/// One ledger instance: mempool, single active miner and fork resolution.
pub struct Ledger {
    config: LedgerConfig,
    mining_rng: SimRng,
    fork_rng: SimRng,
    txs: BTreeMap<TxId, TxEntry>,
    mempool: VecDeque<TxId>,
    pending_bits: u64,
    uploading: usize,
    mining: Option<BlockId>,
    blocks: Vec<Block>,
    tip: Option<BlockId>,
    last_formation: Option<Seconds>,
    timer_generation: u64,
    armed_deadline: Option<Seconds>,
    delay_cache: BTreeMap<(usize, u64), Seconds>,
    metrics: LedgerMetrics,
}

impl Ledger {
    pub fn new(config: LedgerConfig, seed: u64) -> Result<Self, LedgerError> {
        config.validate()?;
        Ok(Self {
            config,
            mining_rng: substream(seed, streams::MINING),
            fork_rng: substream(seed, streams::FORKS),
            txs: BTreeMap::new(),
            mempool: VecDeque::new(),
            pending_bits: 0,
            uploading: 0,
            mining: None,
            blocks: Vec::new(),
            tip: None,
            last_formation: None,
            timer_generation: 0,
            armed_deadline: None,
            delay_cache: BTreeMap::new(),
            metrics: LedgerMetrics::default(),
        })
    }

    pub fn config(&self) -> &LedgerConfig {
        &self.config
    }

    pub fn metrics(&self) -> &LedgerMetrics {
        &self.metrics
    }

    pub fn into_metrics(self) -> LedgerMetrics {
        self.metrics
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn transaction(&self, id: TxId) -> Option<&Transaction> {
        self.txs.get(&id).map(|e| &e.tx)
    }

    pub fn transactions(&self) -> impl Iterator<Item = &Transaction> {
        self.txs.values().map(|e| &e.tx)
    }

    /// Mempool contents, oldest first.
    pub fn mempool(&self) -> impl Iterator<Item = TxId> + '_ {
        self.mempool.iter().copied()
    }

    pub fn pending_bits(&self) -> u64 {
        self.pending_bits
    }

    /// Transactions submitted but not yet confirmed.
    pub fn unconfirmed(&self) -> usize {
        self.metrics.transactions_submitted as usize - self.metrics.transactions_confirmed()
    }

    fn link_delay(&mut self, contenders: usize, bits: u64) -> Result<Seconds, LedgerError> {
        match self.config.link {
            LinkModel::Constant { delay_s } => Ok(delay_s),
            LinkModel::Dcf { params, .. } => {
                if let Some(&d) = self.delay_cache.get(&(contenders, bits)) {
                    return Ok(d);
                }
                let d = dcf::access_delay(contenders, bits, &params)?;
                self.delay_cache.insert((contenders, bits), d);
                Ok(d)
            }
        }
    }

    /// Starts the upload of `tx` at `now`; the returned event delivers it to
    /// the mempool.
    pub fn submit_transaction(&mut self, mut tx: Transaction, now: Seconds) -> Result<Scheduled, LedgerError> {
        if self.txs.contains_key(&tx.id) {
            return Err(LedgerError::DuplicateTransaction(tx.id));
        }
        if tx.size_bits == 0 {
            return Err(LedgerError::EmptyTransaction(tx.id));
        }
        if tx.size_bits > self.config.block_size_bits {
            return Err(LedgerError::OversizedTransaction { bits: tx.size_bits, limit: self.config.block_size_bits });
        }
        let contenders = match self.config.link {
            LinkModel::Dcf { contenders: ContenderSource::ActiveUploads, .. } => self.uploading + 1,
            LinkModel::Dcf { contenders: ContenderSource::Fixed(n), .. } => n,
            LinkModel::Constant { .. } => 1,
        };
        let at = now + self.link_delay(contenders, tx.size_bits)?;
        tx.uploaded_at = Some(at);
        self.uploading += 1;
        self.metrics.transactions_submitted += 1;
        let id = tx.id;
        self.txs.insert(id, TxEntry { tx, entered_mempool_at: at, attempt: Attempt::default(), attempts: 0 });
        Ok(Scheduled { at, event: LedgerEvent::Uploaded(id) })
    }

    pub fn handle(&mut self, event: LedgerEvent, now: Seconds) -> Result<LedgerStep, LedgerError> {
        let mut step = LedgerStep::default();
        match event {
            LedgerEvent::Uploaded(id) => {
                self.uploading -= 1;
                let entry = self.txs.get_mut(&id).expect("uploaded transaction is tracked");
                entry.entered_mempool_at = now;
                self.pending_bits += entry.tx.size_bits;
                self.mempool.push_back(id);
                self.try_form_block(now, &mut step);
            }
            LedgerEvent::Timer(generation) => {
                if generation == self.timer_generation {
                    self.armed_deadline = None;
                    self.try_form_block(now, &mut step);
                }
            }
            LedgerEvent::Mined(id) => {
                let t_prop = self.propagate_block(id, now)?;
                step.scheduled.push(Scheduled { at: now + t_prop, event: LedgerEvent::Propagated(id) });
            }
            LedgerEvent::Propagated(id) => {
                self.finish_block(id, now, &mut step);
                self.try_form_block(now, &mut step);
            }
        }
        Ok(step)
    }

    fn timer_deadline(&self) -> Option<Seconds> {
        let oldest = self.txs[self.mempool.front()?].entered_mempool_at;
        let anchor = match self.last_formation {
            Some(t) => oldest.max(t),
            None => oldest,
        };
        Some(anchor + self.config.max_wait_s)
    }

    /// Packs a block if the miner is idle and either the pending payload
    /// reaches the block size or the wait timer has expired. Otherwise arms
    /// the timer.
    pub fn try_form_block(&mut self, now: Seconds, step: &mut LedgerStep) -> Option<BlockId> {
        if self.mining.is_some() {
            return None;
        }
        let deadline = self.timer_deadline()?;
        let size_ready = self.pending_bits >= self.config.block_size_bits;
        if !size_ready && now < deadline {
            if self.armed_deadline != Some(deadline) {
                self.timer_generation += 1;
                self.armed_deadline = Some(deadline);
                step.scheduled.push(Scheduled { at: deadline, event: LedgerEvent::Timer(self.timer_generation) });
            }
            return None;
        }

        let mut transactions = Vec::new();
        let mut payload_bits = 0;
        while let Some(&id) = self.mempool.front() {
            let entry = self.txs.get_mut(&id).expect("mempool entry is tracked");
            if payload_bits + entry.tx.size_bits > self.config.block_size_bits {
                break;
            }
            payload_bits += entry.tx.size_bits;
            entry.attempt = Attempt { queue: now - entry.entered_mempool_at, ..Attempt::default() };
            transactions.push(id);
            self.mempool.pop_front();
        }
        self.pending_bits -= payload_bits;

        let id = BlockId(self.blocks.len() as u64);
        self.blocks.push(Block {
            id,
            parent: self.tip,
            transactions,
            payload_bits,
            header_bits: self.config.header_bits,
            mining_started_at: now,
            mined_at: None,
            propagated_at: None,
            status: BlockStatus::Pending,
        });
        self.mining = Some(id);
        self.last_formation = Some(now);
        self.timer_generation += 1;
        self.armed_deadline = None;
        let t_mine = sample_mining_time(&mut self.mining_rng, self.config.mining_rate);
        step.scheduled.push(Scheduled { at: now + t_mine, event: LedgerEvent::Mined(id) });
        Some(id)
    }

    /// Marks `id` mined at `now` and returns its propagation time.
    pub fn propagate_block(&mut self, id: BlockId, now: Seconds) -> Result<Seconds, LedgerError> {
        let bits = self.blocks[id.0 as usize].total_bits();
        let n_peers = self.config.n_peers;
        let t_prop = self.link_delay(n_peers, bits)?;
        let block = &mut self.blocks[id.0 as usize];
        block.mined_at = Some(now);
        let t_mine = now - block.mining_started_at;
        for tx in &block.transactions {
            self.txs.get_mut(tx).expect("block member is tracked").attempt.mine = t_mine;
        }
        self.metrics.block_mining_delays.push(t_mine);
        Ok(t_prop)
    }

    /// Decides whether a propagated block joins the chain.
    pub fn resolve_fork(&mut self, t_prop: Seconds) -> BlockOutcome {
        if self.config.kind == LedgerKind::Private {
            return BlockOutcome::Appended;
        }
        let p = match self.config.forks {
            ForkModel::None => 0.0,
            ForkModel::ExponentialRace => fork_probability(self.config.mining_rate, t_prop),
            ForkModel::Fixed(p) => p,
        };
        // Always consume one draw so block outcomes stay aligned across runs.
        let u: f64 = self.fork_rng.random();
        if u < p {
            BlockOutcome::Orphaned
        } else {
            BlockOutcome::Appended
        }
    }

    fn finish_block(&mut self, id: BlockId, now: Seconds, step: &mut LedgerStep) {
        let idx = id.0 as usize;
        self.blocks[idx].propagated_at = Some(now);
        let t_prop = now - self.blocks[idx].mined_at.expect("propagated block was mined");
        self.metrics.block_propagation_delays.push(t_prop);
        self.metrics.header_bits_sent += self.blocks[idx].header_bits;
        self.metrics.payload_bits_sent += self.blocks[idx].payload_bits;
        self.mining = None;

        let outcome = self.resolve_fork(t_prop);
        let block = &mut self.blocks[idx];
        let members = block.transactions.clone();
        for tx in &members {
            let entry = self.txs.get_mut(tx).expect("block member is tracked");
            entry.attempt.prop = t_prop;
            entry.attempts += 1;
            self.metrics.attempt_queue_delays.push(entry.attempt.queue);
            self.metrics.attempt_mining_delays.push(entry.attempt.mine);
            self.metrics.attempt_propagation_delays.push(entry.attempt.prop);
        }
        match outcome {
            BlockOutcome::Appended => {
                block.status = BlockStatus::Appended;
                self.tip = Some(id);
                self.metrics.blocks_appended += 1;
                self.metrics.confirmed_payload_bits += block.payload_bits;
                for tx in members {
                    let entry = self.txs.get_mut(&tx).expect("block member is tracked");
                    entry.tx.confirmed_at = Some(now);
                    let uploaded = entry.tx.uploaded_at.expect("confirmed tx was uploaded");
                    self.metrics.upload_delays.push(uploaded - entry.tx.created_at);
                    self.metrics.confirmation_delays.push(now - entry.tx.created_at);
                    step.confirmed.push(entry.tx.clone());
                }
            }
            BlockOutcome::Orphaned => {
                block.status = BlockStatus::Orphaned;
                self.metrics.blocks_orphaned += 1;
                self.pending_bits += block.payload_bits;
                for tx in members.into_iter().rev() {
                    self.txs.get_mut(&tx).expect("block member is tracked").entered_mempool_at = now;
                    self.mempool.push_front(tx);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::des::EventQueue;

    fn drive(ledger: &mut Ledger, queue: &mut EventQueue<LedgerEvent>) -> Vec<Transaction> {
        let mut confirmed = Vec::new();
        while let Some((t, ev)) = queue.pop() {
            let step = ledger.handle(ev, t).unwrap();
            for s in step.scheduled {
                queue.push(s.at, s.event);
            }
            confirmed.extend(step.confirmed);
        }
        confirmed
    }

    fn tx(id: u64, at: f64) -> Transaction {
        Transaction::new(TxId(id), TxKind::ServiceRequest, 3000, at)
    }

    #[test]
    fn private_upload_takes_backhaul_latency() {
        let mut l = Ledger::new(LedgerConfig::private_default(), 1).unwrap();
        let s = l.submit_transaction(tx(0, 0.0), 0.0).unwrap();
        assert_eq!(s.at, 0.010);
    }

    #[test]
    fn public_single_upload_uses_dcf_delay() {
        let cfg = LedgerConfig::public_default();
        let mut l = Ledger::new(cfg.clone(), 1).unwrap();
        let s = l.submit_transaction(tx(0, 0.0), 0.0).unwrap();
        let LinkModel::Dcf { params, .. } = cfg.link else { unreachable!() };
        assert_eq!(s.at, dcf::access_delay(1, 3000, &params).unwrap());
    }

    #[test]
    fn duplicate_and_oversized_rejected() {
        let mut l = Ledger::new(LedgerConfig::private_default(), 1).unwrap();
        l.submit_transaction(tx(0, 0.0), 0.0).unwrap();
        assert_eq!(l.submit_transaction(tx(0, 0.0), 0.0), Err(LedgerError::DuplicateTransaction(TxId(0))));
        let big = Transaction::new(TxId(1), TxKind::ServiceRequest, 15_001, 0.0);
        assert!(matches!(l.submit_transaction(big, 0.0), Err(LedgerError::OversizedTransaction { .. })));
        let empty = Transaction::new(TxId(2), TxKind::ServiceRequest, 0, 0.0);
        assert!(matches!(l.submit_transaction(empty, 0.0), Err(LedgerError::EmptyTransaction(_))));
    }

    #[test]
    fn five_pending_fill_a_block() {
        let mut l = Ledger::new(LedgerConfig::private_default(), 1).unwrap();
        let mut step = LedgerStep::default();
        for i in 0..5 {
            let s = l.submit_transaction(tx(i, 0.0), 0.0).unwrap();
            if i < 4 {
                // Below the size threshold only the timer gets armed.
                let st = l.handle(s.event, s.at).unwrap();
                assert!(st.scheduled.iter().all(|s| matches!(s.event, LedgerEvent::Timer(_))));
            } else {
                step = l.handle(s.event, s.at).unwrap();
            }
        }
        assert!(step.scheduled.iter().any(|s| matches!(s.event, LedgerEvent::Mined(_))));
        assert_eq!(l.blocks().len(), 1);
        assert_eq!(l.blocks()[0].transactions.len(), 5);
        assert_eq!(l.blocks()[0].payload_bits, 15_000);
    }

    #[test]
    fn timer_rule_boundary() {
        let mut l = Ledger::new(LedgerConfig::private_default(), 1).unwrap();
        let s = l.submit_transaction(tx(0, 0.0), 0.0).unwrap();
        let step = l.handle(s.event, s.at).unwrap();
        let timer = step.scheduled[0];
        assert_eq!(timer.at, s.at + 5.0);
        let mut probe = LedgerStep::default();
        assert!(l.try_form_block(s.at + 4.999, &mut probe).is_none());
        let step = l.handle(timer.event, timer.at).unwrap();
        assert_eq!(l.blocks().len(), 1);
        assert_eq!(l.blocks()[0].transactions, vec![TxId(0)]);
        assert!(matches!(step.scheduled[0].event, LedgerEvent::Mined(_)));
    }

    #[test]
    fn stale_timer_is_ignored() {
        let mut l = Ledger::new(LedgerConfig::private_default(), 1).unwrap();
        let mut q = EventQueue::new();
        for i in 0..5 {
            let s = l.submit_transaction(tx(i, 0.0), 0.0).unwrap();
            q.push(s.at, s.event);
        }
        let confirmed = drive(&mut l, &mut q);
        assert_eq!(confirmed.len(), 5);
        assert_eq!(l.blocks().len(), 1);
    }

    #[test]
    fn private_ledger_confirms_everything_without_forks() {
        let mut l = Ledger::new(LedgerConfig::private_default(), 3).unwrap();
        let mut q = EventQueue::new();
        for i in 0..37 {
            let s = l.submit_transaction(tx(i, i as f64 * 0.3), i as f64 * 0.3).unwrap();
            q.push(s.at, s.event);
        }
        let confirmed = drive(&mut l, &mut q);
        assert_eq!(confirmed.len(), 37);
        assert_eq!(l.metrics().forks(), 0);
        for &p in &l.metrics().block_propagation_delays {
            assert!((p - 0.010).abs() < 1e-12);
        }
        assert_eq!(l.unconfirmed(), 0);
    }

    #[test]
    fn orphaned_transactions_return_to_head() {
        let cfg = LedgerConfig { forks: ForkModel::Fixed(0.5), ..LedgerConfig::public_default() };
        let mut l = Ledger::new(cfg, 11).unwrap();
        let mut q = EventQueue::new();
        for i in 0..50 {
            let s = l.submit_transaction(tx(i, 0.0), 0.0).unwrap();
            q.push(s.at, s.event);
        }
        let confirmed = drive(&mut l, &mut q);
        assert_eq!(confirmed.len(), 50);
        assert!(l.metrics().forks() > 0);
        for b in l.blocks() {
            assert!(b.payload_bits <= 15_000);
            if b.status == BlockStatus::Orphaned {
                for t in &b.transactions {
                    assert_ne!(l.transaction(*t).unwrap().confirmed_at, b.propagated_at);
                }
            }
        }
        let mut ids: Vec<_> = confirmed.iter().map(|t| t.id.0).collect();
        ids.sort();
        assert_eq!(ids, (0..50).collect::<Vec<_>>());
    }

    #[test]
    fn private_with_forks_is_invalid() {
        let cfg = LedgerConfig { forks: ForkModel::ExponentialRace, ..LedgerConfig::private_default() };
        assert!(Ledger::new(cfg, 0).is_err());
    }

    #[test]
    fn larger_blocks_propagate_slower_on_public() {
        let mut l = Ledger::new(LedgerConfig::public_default(), 0).unwrap();
        let small = l.link_delay(10, 4000).unwrap();
        let large = l.link_delay(10, 16_000).unwrap();
        assert!(large > small);
    }
}
