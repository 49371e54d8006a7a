//! The coupled market/ledger event loop.
//!
//! Users request service on the public ledger; each request is auctioned
//! once its transaction is confirmed, and the outcome is written back to
//! the public ledger. In dynamic mode, operators whose subscribed demand in
//! a cell exceeds their holdings there file a resource request on the
//! private ledger and lease spare slices once it is confirmed. Capacity,
//! acceptance and AP load are sampled at every epoch.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use thiserror::Error;

use super::config::{ConfigError, Interference, Ownership, SharingMode, SimConfig};
use super::metrics::{EpochRecord, MarketAction, MarketCounters, MarketLogEntry, MetricsSeries};
use crate::des::{EventQueue, Seconds};
use crate::ids::{CellId, OperatorId, UserId};
use crate::ledger::{Ledger, LedgerError, LedgerEvent, LedgerKind, LedgerStep, Scheduled, Transaction, TxId, TxKind};
use crate::market::{
    expire_leases, request_ran_resources, run_ran_auction, run_service_auction, service_acceptance, Award,
    MarketError, Operator, ProfileKind, RanRequest, ResourcePool, ServicePolicy, ServiceRequest, UserProfile,
};
use crate::rng::{derive_seed, streams, substream, SimRng};
use crate::topology::{build_hex_deployment, capacity_bps, drop_users, sinr_linear, Topology, TopologyError, UserEquipment};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("topology: {0}")]
    Topology(#[from] TopologyError),
    #[error("ledger: {0}")]
    Ledger(#[from] LedgerError),
    #[error("market: {0}")]
    Market(#[from] MarketError),
}

/// Static part of a scenario: deployment, users, operators and ownership.
#[derive(Debug, Clone)]
pub struct World {
    pub topology: Topology<f64>,
    pub users: Vec<UserEquipment<f64>>,
    pub profiles: Vec<UserProfile>,
    /// Linear SINR of each user towards its serving cell.
    pub sinr: Vec<f64>,
    pub operators: Vec<Operator>,
    pub pool: ResourcePool,
    /// Per-user streams, positioned after the profile draws.
    pub user_rngs: Vec<SimRng>,
}

/// Builds the deployment for `seed`. Depends only on the topology, market
/// and per-user streams, so both sharing modes see the same world.
pub fn build_world(config: &SimConfig, seed: u64) -> Result<World, SimError> {
    config.validate()?;
    let mut topology = build_hex_deployment(config.topology.num_cells, config.topology.radius_m, config.radio_params())?;
    let mut users = drop_users(&topology, config.users.count, derive_seed(seed, streams::TOPOLOGY));

    let m = &config.market;
    let mut market_rng = substream(seed, streams::MARKET);
    let pool = match m.ownership {
        Ownership::RandomCells => {
            ResourcePool::random_cells(topology.num_cells(), m.operators, m.slices_per_cell, &mut market_rng)?
        }
        Ownership::Ratios => ResourcePool::with_ratios(topology.num_cells(), &m.ratios, m.slices_per_cell)?,
    };
    let owners: Vec<OperatorId> = (0..topology.num_cells()).map(|c| pool.majority_owner(CellId(c))).collect();
    topology.assign_owners(&owners)?;
    let [lo, hi] = m.lease_price_range;
    let operators = (0..m.operators)
        .map(|i| Operator { id: OperatorId(i), lease_price: lo + (hi - lo) * market_rng.random::<f64>() })
        .collect();

    let psi = (config.users.psi_range[0], config.users.psi_range[1]);
    let xi = (config.users.xi_range[0], config.users.xi_range[1]);
    let mut profiles = Vec::with_capacity(users.len());
    let mut sinr = Vec::with_capacity(users.len());
    let mut user_rngs = Vec::with_capacity(users.len());
    for ue in users.iter_mut() {
        let mut rng = user_stream(seed, ue.id);
        let kind = config.users.profile.fixed().unwrap_or_else(|| ProfileKind::ALL[rng.random_range(0..3)]);
        ue.profile = kind;
        profiles.push(UserProfile::sample(kind, psi, xi, &mut rng));
        let serving = ue.serving_cell.expect("dropped users have a serving cell");
        let interferers = match config.radio.interference {
            Interference::Reuse1 => topology.co_channel_cells(serving),
            Interference::None => Vec::new(),
        };
        sinr.push(sinr_linear(ue, &topology, &interferers)?);
        user_rngs.push(rng);
    }
    Ok(World { topology, users, profiles, sinr, operators, pool, user_rngs })
}

fn user_stream(seed: u64, user: UserId) -> SimRng {
    substream(seed, streams::USER_BASE + user.0 as u64)
}

/// Redraws every user's demand share uniformly within its profile range.
pub fn demand_epoch<R: Rng + ?Sized>(users: &mut [UserEquipment<f64>], profiles: &[UserProfile], rng: &mut R) {
    for (ue, profile) in users.iter_mut().zip(profiles) {
        ue.demand_share = profile.draw_demand(rng);
    }
}

#[derive(Debug, Clone, Copy)]
enum Event {
    Epoch(u64),
    Renewal(UserId),
    Public(LedgerEvent),
    Private(LedgerEvent),
    LeaseExpiry,
}

#[derive(Debug, Clone, Copy)]
enum PublicTag {
    Request(UserId),
    Outcome,
}

#[derive(Debug, Clone, Copy)]
enum PrivateTag {
    Request(RanRequest),
    LeaseRecord,
}

struct Service {
    award: Award,
}

struct Engine<'a> {
    config: &'a SimConfig,
    mode: SharingMode,
    policy: ServicePolicy,
    world: World,
    queue: EventQueue<Event>,
    public: Ledger,
    private: Ledger,
    public_tags: BTreeMap<TxId, PublicTag>,
    private_tags: BTreeMap<TxId, PrivateTag>,
    next_public: u64,
    next_private: u64,
    demand_rng: SimRng,
    services: Vec<Option<Service>>,
    pending_ran: BTreeSet<(OperatorId, CellId)>,
    counters: MarketCounters,
    log: Vec<MarketLogEntry>,
    records: Vec<EpochRecord>,
}

impl<'a> Engine<'a> {
    fn new(config: &'a SimConfig, seed: u64, mode: SharingMode) -> Result<Self, SimError> {
        let world = build_world(config, seed)?;
        let n = world.users.len();
        let public = Ledger::new(
            config.ledger_config(LedgerKind::Public).map_err(LedgerError::from)?,
            derive_seed(seed, streams::LEDGER_PUBLIC),
        )?;
        let private = Ledger::new(
            config.ledger_config(LedgerKind::Private).map_err(LedgerError::from)?,
            derive_seed(seed, streams::LEDGER_PRIVATE),
        )?;
        Ok(Self {
            config,
            mode,
            policy: config.service_policy(),
            queue: EventQueue::new(),
            public,
            private,
            public_tags: BTreeMap::new(),
            private_tags: BTreeMap::new(),
            next_public: 0,
            next_private: 0,
            demand_rng: substream(seed, streams::DEMANDS),
            services: (0..n).map(|_| None).collect(),
            pending_ran: BTreeSet::new(),
            counters: MarketCounters::default(),
            log: Vec::new(),
            records: Vec::new(),
            world,
        })
    }

    fn schedule_public(&mut self, step: LedgerStep, now: Seconds) -> Result<(), SimError> {
        for s in step.scheduled {
            self.queue.push(s.at, Event::Public(s.event));
        }
        for tx in step.confirmed {
            self.on_public_confirmed(tx, now)?;
        }
        Ok(())
    }

    fn schedule_private(&mut self, step: LedgerStep, now: Seconds) -> Result<(), SimError> {
        for s in step.scheduled {
            self.queue.push(s.at, Event::Private(s.event));
        }
        for tx in step.confirmed {
            self.on_private_confirmed(tx, now)?;
        }
        Ok(())
    }

    fn submit_public(&mut self, kind: TxKind, tag: PublicTag, now: Seconds) -> Result<(), SimError> {
        let id = TxId(self.next_public);
        self.next_public += 1;
        self.public_tags.insert(id, tag);
        let Scheduled { at, event } = self.public.submit_transaction(Transaction::new(id, kind, self.config.tx_bits, now), now)?;
        self.queue.push(at, Event::Public(event));
        Ok(())
    }

    fn submit_private(&mut self, kind: TxKind, tag: PrivateTag, now: Seconds) -> Result<(), SimError> {
        let id = TxId(self.next_private);
        self.next_private += 1;
        self.private_tags.insert(id, tag);
        let Scheduled { at, event } =
            self.private.submit_transaction(Transaction::new(id, kind, self.config.tx_bits, now), now)?;
        self.queue.push(at, Event::Private(event));
        Ok(())
    }

    /// Demand of the users `op` currently serves in `cell`.
    fn served_demand(&self, op: OperatorId, cell: CellId) -> f64 {
        self.world
            .users
            .iter()
            .zip(&self.services)
            .filter(|(ue, s)| ue.serving_cell == Some(cell) && matches!(s, Some(s) if s.award.seller == op))
            .map(|(ue, _)| ue.demand_share)
            .sum()
    }

    fn check_deficit(&mut self, op: OperatorId, cell: CellId, now: Seconds) -> Result<(), SimError> {
        if self.mode != SharingMode::Dynamic || self.pending_ran.contains(&(op, cell)) {
            return Ok(());
        }
        let demand = self.served_demand(op, cell);
        if let Some(req) = request_ran_resources(&self.world.pool, op, demand, cell, now) {
            self.pending_ran.insert((op, cell));
            self.counters.ran_requests += 1;
            self.submit_private(TxKind::ResourceRequest, PrivateTag::Request(req), now)?;
        }
        Ok(())
    }

    fn check_all_deficits(&mut self, now: Seconds) -> Result<(), SimError> {
        if self.mode != SharingMode::Dynamic {
            return Ok(());
        }
        let pairs: BTreeSet<(OperatorId, CellId)> = self
            .world
            .users
            .iter()
            .zip(&self.services)
            .filter_map(|(ue, s)| Some((s.as_ref()?.award.seller, ue.serving_cell?)))
            .collect();
        for (op, cell) in pairs {
            self.check_deficit(op, cell, now)?;
        }
        Ok(())
    }

    fn on_public_confirmed(&mut self, tx: Transaction, now: Seconds) -> Result<(), SimError> {
        let tag = self.public_tags.remove(&tx.id).expect("public tx is tagged");
        let PublicTag::Request(user) = tag else { return Ok(()) };
        self.counters.service_confirmations += 1;
        let ue = &self.world.users[user.0];
        let cell = ue.serving_cell.expect("dropped users have a serving cell");
        let request = ServiceRequest { user, cell, demand_share: ue.demand_share };
        let award = run_service_auction(
            &request,
            &self.world.operators,
            &self.world.pool,
            &self.policy,
            self.config.radio.bandwidth_hz,
            now,
            self.config.market.service_duration_s,
            &mut self.world.user_rngs[user.0],
        )?;
        let seller = award.seller;
        let deliverable = match self.mode {
            SharingMode::Dynamic => true,
            SharingMode::Static => self.world.pool.held_share(seller, cell) > 0.0,
        };
        let action = if deliverable {
            self.counters.awards += 1;
            self.world.users[user.0].operator = Some(seller);
            self.services[user.0] = Some(Service { award });
            MarketAction::Award { user, seller }
        } else {
            self.counters.rejected += 1;
            self.world.users[user.0].operator = None;
            self.services[user.0] = None;
            MarketAction::Rejection { user, seller }
        };
        self.log.push(MarketLogEntry {
            at: now,
            action,
            ledger: LedgerKind::Public,
            enabling_tx: tx.id,
            enabling_confirmed_at: tx.confirmed_at.expect("confirmed"),
        });
        self.submit_public(TxKind::ServiceAward, PublicTag::Outcome, now)?;
        self.queue.push(now + self.config.market.service_duration_s, Event::Renewal(user));
        if deliverable {
            self.check_deficit(seller, cell, now)?;
        }
        Ok(())
    }

    fn on_private_confirmed(&mut self, tx: Transaction, now: Seconds) -> Result<(), SimError> {
        let tag = self.private_tags.remove(&tx.id).expect("private tx is tagged");
        let PrivateTag::Request(req) = tag else { return Ok(()) };
        self.counters.ran_confirmations += 1;
        self.pending_ran.remove(&(req.operator, req.cell));
        let demands: BTreeMap<OperatorId, f64> =
            self.world.operators.iter().map(|o| (o.id, self.served_demand(o.id, req.cell))).collect();
        let lease = run_ran_auction(
            &req,
            &self.world.operators,
            &mut self.world.pool,
            |op| demands[&op],
            now,
            self.config.market.lease_duration_s,
        );
        let action = match &lease {
            Some(l) => {
                self.counters.leases += 1;
                self.queue.push(l.expiry, Event::LeaseExpiry);
                MarketAction::Lease { lessee: l.lessee, lessor: l.lessor, cell: l.cell, units: l.units.len() }
            }
            None => {
                self.counters.unmatched_ran_requests += 1;
                MarketAction::NoSupply { operator: req.operator, cell: req.cell }
            }
        };
        self.log.push(MarketLogEntry {
            at: now,
            action,
            ledger: LedgerKind::Private,
            enabling_tx: tx.id,
            enabling_confirmed_at: tx.confirmed_at.expect("confirmed"),
        });
        if lease.is_some() {
            self.submit_private(TxKind::ResourceLease, PrivateTag::LeaseRecord, now)?;
        }
        Ok(())
    }

    fn record_epoch(&mut self, now: Seconds) -> Result<(), SimError> {
        let cells = self.world.topology.num_cells();
        let ops = self.world.operators.len();
        let mut demand = vec![0.0; cells * ops];
        for (ue, s) in self.world.users.iter().zip(&self.services) {
            if let (Some(s), Some(cell)) = (s, ue.serving_cell) {
                demand[cell.0 * ops + s.award.seller.0] += ue.demand_share;
            }
        }
        let mut scale = vec![0.0; cells * ops];
        for c in 0..cells {
            for o in 0..ops {
                let d = demand[c * ops + o];
                if d > 0.0 {
                    let held = self.world.pool.held_share(OperatorId(o), CellId(c));
                    scale[c * ops + o] = (held / d).min(1.0);
                }
            }
        }
        let bandwidth = self.config.radio.bandwidth_hz;
        let mut capacity = 0.0;
        let mut acceptance = 0.0;
        let mut load = vec![0.0; cells];
        let mut served = 0;
        for (i, (ue, s)) in self.world.users.iter().zip(&self.services).enumerate() {
            let (Some(s), Some(cell)) = (s, ue.serving_cell) else { continue };
            let b = ue.demand_share * scale[cell.0 * ops + s.award.seller.0];
            if b <= 0.0 {
                continue;
            }
            served += 1;
            load[cell.0] += b;
            capacity += capacity_bps(b * bandwidth, self.world.sinr[i])?;
            let p = &self.world.profiles[i];
            acceptance += service_acceptance(
                b,
                s.award.price,
                p.psi,
                p.xi * self.config.market.xi_sign,
                self.config.market.acceptance_c,
            )?;
        }
        self.records.push(EpochRecord {
            t: now,
            aggregate_capacity_bps: capacity,
            mean_acceptance: acceptance / self.world.users.len() as f64,
            mean_ap_load: load.iter().map(|l| l.min(1.0)).sum::<f64>() / cells as f64,
            served_users: served,
            leased_units: self.world.pool.units.iter().filter(|u| u.holder != u.owner).count(),
            counters: self.counters,
        });
        Ok(())
    }

    fn run(mut self, seed: u64) -> Result<MetricsSeries, SimError> {
        let horizon = self.config.horizon_s;
        if horizon > 0.0 {
            self.queue.push(0.0, Event::Epoch(0));
            for u in 0..self.world.users.len() {
                self.queue.push(0.0, Event::Renewal(UserId(u)));
            }
        }
        while let Some((now, event)) = self.queue.pop() {
            if now >= horizon {
                break;
            }
            match event {
                Event::Epoch(k) => {
                    demand_epoch(&mut self.world.users, &self.world.profiles, &mut self.demand_rng);
                    self.check_all_deficits(now)?;
                    self.record_epoch(now)?;
                    let next = (k + 1) as f64 * self.config.epoch_s;
                    if next < horizon {
                        self.queue.push(next, Event::Epoch(k + 1));
                    }
                }
                Event::Renewal(user) => {
                    self.counters.service_requests += 1;
                    self.submit_public(TxKind::ServiceRequest, PublicTag::Request(user), now)?;
                }
                Event::Public(e) => {
                    let step = self.public.handle(e, now)?;
                    self.schedule_public(step, now)?;
                }
                Event::Private(e) => {
                    let step = self.private.handle(e, now)?;
                    self.schedule_private(step, now)?;
                }
                Event::LeaseExpiry => {
                    let reverted = expire_leases(&mut self.world.pool, now);
                    self.counters.units_reverted += reverted.len() as u64;
                }
            }
        }
        Ok(MetricsSeries {
            seed,
            mode: self.mode,
            records: self.records,
            public: self.public.into_metrics(),
            private: self.private.into_metrics(),
            counters: self.counters,
            log: self.log,
        })
    }
}

/// Runs one replication in the configured sharing mode.
pub fn run_scenario(config: &SimConfig, seed: u64) -> Result<MetricsSeries, SimError> {
    run_scenario_in(config, seed, config.market.sharing)
}

/// Runs one replication with the sharing mode forced to `mode`.
pub fn run_scenario_in(config: &SimConfig, seed: u64, mode: SharingMode) -> Result<MetricsSeries, SimError> {
    Engine::new(config, seed, mode)?.run(seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairedRun {
    pub seed: u64,
    pub static_run: MetricsSeries,
    pub dynamic_run: MetricsSeries,
}

impl PairedRun {
    pub fn capacity_delta(&self) -> f64 {
        self.dynamic_run.mean_capacity_bps() - self.static_run.mean_capacity_bps()
    }

    pub fn acceptance_delta(&self) -> f64 {
        self.dynamic_run.mean_acceptance() - self.static_run.mean_acceptance()
    }
}

/// Static and dynamic runs on identical seeds, replications in parallel.
pub fn compare_static_dynamic(config: &SimConfig, seeds: &[u64]) -> Result<Vec<PairedRun>, SimError> {
    use rayon::prelude::*;
    seeds
        .par_iter()
        .map(|&seed| {
            Ok(PairedRun {
                seed,
                static_run: run_scenario_in(config, seed, SharingMode::Static)?,
                dynamic_run: run_scenario_in(config, seed, SharingMode::Dynamic)?,
            })
        })
        .collect()
}
