//! Reverse auctions for user services and for inter-operator RAN leases.
//!
//! Every cell is split into `S` equal slices (resource units). Each unit has
//! an owner and, at any instant, exactly one holder: the owner, or the
//! lessee of an active lease. Operators sublease units they hold but do not
//! need, at a fixed per-operator price, for a bounded time.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::des::Seconds;
use crate::ids::{CellId, OperatorId, UserId};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MarketError {
    #[error("auction has no bids")]
    NoBids,
    #[error("bid {index} has {got} features, expected {expected}")]
    FeatureCount { index: usize, got: usize, expected: usize },
    #[error("weight {0} outside [0, 1]")]
    BadWeight(f64),
    #[error("negative acceptance input: b={b}, p={p}, c={c}")]
    NegativeAcceptanceInput { b: f64, p: f64, c: f64 },
    #[error("no operators in the market")]
    NoOperators,
    #[error("ownership ratios must be {expected} non-negative values summing to 1, got {got:?}")]
    BadRatios { expected: usize, got: Vec<f64> },
    #[error("slices per cell must be >= 1")]
    NoSlices,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Low,
    Average,
    High,
}

impl ProfileKind {
    pub const ALL: [ProfileKind; 3] = [ProfileKind::Low, ProfileKind::Average, ProfileKind::High];

    /// Range of the AP share a user of this profile asks for.
    pub fn demand_range(self) -> (f64, f64) {
        match self {
            ProfileKind::Low => (0.001, 0.01),
            ProfileKind::Average => (0.005, 0.02),
            ProfileKind::High => (0.01, 0.025),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProfileKind::Low => "low",
            ProfileKind::Average => "average",
            ProfileKind::High => "high",
        }
    }
}

/// Traffic profile plus the user's bandwidth (`psi`) and price (`xi`)
/// sensitivities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UserProfile {
    pub kind: ProfileKind,
    pub demand_range: (f64, f64),
    pub psi: f64,
    pub xi: f64,
}

impl UserProfile {
    /// Draws `psi` and `xi` uniformly from the given ranges.
    pub fn sample<R: Rng + ?Sized>(kind: ProfileKind, psi_range: (f64, f64), xi_range: (f64, f64), rng: &mut R) -> Self {
        let psi = psi_range.0 + (psi_range.1 - psi_range.0) * rng.random::<f64>();
        let xi = xi_range.0 + (xi_range.1 - xi_range.0) * rng.random::<f64>();
        Self { kind, demand_range: kind.demand_range(), psi, xi }
    }

    pub fn draw_demand<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (lo, hi) = self.demand_range;
        lo + (hi - lo) * rng.random::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bid<T = f64> {
    pub seller: OperatorId,
    pub features: Vec<T>,
    pub price: T,
}

/// Index of the bid maximising `sum_k w_k x_k`, and that value. Ties go to
/// the lowest seller id.
pub fn buyer_utility<T: Scalar>(weights: &[T], bids: &[Bid<T>]) -> Result<(usize, T), MarketError> {
    if bids.is_empty() {
        return Err(MarketError::NoBids);
    }
    for &w in weights {
        if !(w >= T::zero() && w <= T::one()) {
            return Err(MarketError::BadWeight(w.to_f64_lossy()));
        }
    }
    let mut best: Option<(usize, T)> = None;
    for (i, bid) in bids.iter().enumerate() {
        if bid.features.len() != weights.len() {
            return Err(MarketError::FeatureCount { index: i, got: bid.features.len(), expected: weights.len() });
        }
        let u: T = weights.iter().zip(&bid.features).map(|(&w, &x)| w * x).sum();
        best = match best {
            None => Some((i, u)),
            Some((j, v)) if u > v || (u == v && bid.seller < bids[j].seller) => Some((i, u)),
            keep => keep,
        };
    }
    Ok(best.expect("at least one bid"))
}

/// `A = 1 - exp(-C b^psi p^xi)`.
pub fn service_acceptance<T: Scalar>(b: T, p: T, psi: T, xi: T, c: T) -> Result<T, MarketError> {
    if !(b >= T::zero() && p >= T::zero() && c > T::zero()) {
        return Err(MarketError::NegativeAcceptanceInput {
            b: b.to_f64_lossy(),
            p: p.to_f64_lossy(),
            c: c.to_f64_lossy(),
        });
    }
    // 0^x for x <= 0 would be 1 or inf; a zero share or price yields no acceptance.
    if b == T::zero() || p == T::zero() {
        return Ok(T::zero());
    }
    Ok(-(-(c * b.powf(psi) * p.powf(xi))).exp_m1())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Operator {
    pub id: OperatorId,
    /// Fixed sublease price per unit per second.
    pub lease_price: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResourceUnit {
    pub cell: CellId,
    pub slice: usize,
    pub owner: OperatorId,
    pub holder: OperatorId,
    pub share: f64,
    pub lease_expiry: Option<Seconds>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lease {
    pub lessor: OperatorId,
    pub lessee: OperatorId,
    pub cell: CellId,
    pub units: Vec<usize>,
    pub price: f64,
    pub start: Seconds,
    pub expiry: Seconds,
}

impl Lease {
    pub fn share(&self, pool: &ResourcePool) -> f64 {
        self.units.iter().map(|&u| pool.units[u].share).sum()
    }
}

/// All resource units of the deployment, indexed `cell * slices + slice`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourcePool {
    pub slices_per_cell: usize,
    pub units: Vec<ResourceUnit>,
}

impl ResourcePool {
    /// Builds the pool from a per-unit owner list laid out cell-major.
    pub fn from_owners(slices_per_cell: usize, owners: &[OperatorId]) -> Result<Self, MarketError> {
        if slices_per_cell == 0 {
            return Err(MarketError::NoSlices);
        }
        let share = 1.0 / slices_per_cell as f64;
        let units = owners
            .iter()
            .enumerate()
            .map(|(i, &owner)| ResourceUnit {
                cell: CellId(i / slices_per_cell),
                slice: i % slices_per_cell,
                owner,
                holder: owner,
                share,
                lease_expiry: None,
            })
            .collect();
        Ok(Self { slices_per_cell, units })
    }

    /// Every cell wholly owned by one operator picked uniformly at random.
    ///
    /// One uniform is drawn per cell and mapped to `floor(u M)`, so the
    /// draws are shared across different operator counts.
    pub fn random_cells<R: Rng + ?Sized>(
        num_cells: usize,
        operators: usize,
        slices_per_cell: usize,
        rng: &mut R,
    ) -> Result<Self, MarketError> {
        if operators == 0 {
            return Err(MarketError::NoOperators);
        }
        let mut owners = Vec::with_capacity(num_cells * slices_per_cell);
        for _ in 0..num_cells {
            let u: f64 = rng.random();
            let op = OperatorId(((u * operators as f64) as usize).min(operators - 1));
            owners.extend(std::iter::repeat_n(op, slices_per_cell));
        }
        Self::from_owners(slices_per_cell, &owners)
    }

    /// Every cell split among operators by the given ratios, rounding slice
    /// counts by largest remainder (ties to the lower operator id).
    pub fn with_ratios(num_cells: usize, ratios: &[f64], slices_per_cell: usize) -> Result<Self, MarketError> {
        let bad = || MarketError::BadRatios { expected: ratios.len(), got: ratios.to_vec() };
        if ratios.is_empty() {
            return Err(MarketError::NoOperators);
        }
        if ratios.iter().any(|r| !(*r >= 0.0)) || (ratios.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(bad());
        }
        let exact: Vec<f64> = ratios.iter().map(|r| r * slices_per_cell as f64).collect();
        let mut counts: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
        let mut order: Vec<usize> = (0..ratios.len()).collect();
        order.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())).then(a.cmp(&b)));
        let mut missing = slices_per_cell.saturating_sub(counts.iter().sum());
        for &i in order.iter().cycle() {
            if missing == 0 {
                break;
            }
            counts[i] += 1;
            missing -= 1;
        }
        let mut per_cell = Vec::with_capacity(slices_per_cell);
        for (op, &n) in counts.iter().enumerate() {
            per_cell.extend(std::iter::repeat_n(OperatorId(op), n));
        }
        let owners: Vec<OperatorId> = (0..num_cells).flat_map(|_| per_cell.iter().copied()).collect();
        Self::from_owners(slices_per_cell, &owners)
    }

    pub fn num_cells(&self) -> usize {
        self.units.len() / self.slices_per_cell
    }

    pub fn unit_share(&self) -> f64 {
        1.0 / self.slices_per_cell as f64
    }

    pub fn cell_units(&self, cell: CellId) -> std::ops::Range<usize> {
        let start = cell.index() * self.slices_per_cell;
        start..start + self.slices_per_cell
    }

    pub fn held_share(&self, op: OperatorId, cell: CellId) -> f64 {
        self.units[self.cell_units(cell)].iter().filter(|u| u.holder == op).map(|u| u.share).sum()
    }

    pub fn owned_share(&self, op: OperatorId, cell: CellId) -> f64 {
        self.units[self.cell_units(cell)].iter().filter(|u| u.owner == op).map(|u| u.share).sum()
    }

    /// Operator owning the largest part of `cell`; ties go to the lower id.
    pub fn majority_owner(&self, cell: CellId) -> OperatorId {
        let mut counts = std::collections::BTreeMap::new();
        for u in &self.units[self.cell_units(cell)] {
            *counts.entry(u.owner).or_insert(0usize) += 1;
        }
        let max = counts.values().copied().max().unwrap_or(0);
        counts.into_iter().find(|&(_, n)| n == max).map(|(op, _)| op).unwrap_or_default()
    }

    /// Units `op` holds in `cell` without an active lease out to someone
    /// else and beyond what it needs for `own_demand`.
    pub fn leasable_units(&self, op: OperatorId, cell: CellId, own_demand: f64) -> Vec<usize> {
        let held: Vec<usize> = self.cell_units(cell).filter(|&i| self.units[i].holder == op && self.units[i].owner == op).collect();
        let keep = units_needed(own_demand, self.unit_share());
        held.into_iter().skip(keep).collect()
    }

    /// Sum of held shares of each cell; 1 for a consistent pool.
    pub fn cell_total(&self, cell: CellId) -> f64 {
        self.units[self.cell_units(cell)].iter().map(|u| u.share).sum()
    }
}

/// Whole units of size `unit` covering `share`.
pub fn units_needed(share: f64, unit: f64) -> usize {
    if share <= 0.0 {
        0
    } else {
        // Guard against 0.30000000000000004 / 0.1 rounding up a unit.
        ((share / unit) - 1e-9).ceil().max(0.0) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ServiceRequest {
    pub user: UserId,
    pub cell: CellId,
    pub demand_share: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ServicePolicy {
    /// Operator uniformly at random, price `U(0, 1)`.
    RandomUniform,
    /// Buyer utility over features `[1 - price, seller availability in the cell]`.
    Utility { weights: [f64; 2] },
}

/// KPI record an award commits the seller to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sla {
    pub demand_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Award {
    pub buyer: UserId,
    pub seller: OperatorId,
    pub price: f64,
    pub allocated_share: f64,
    pub bandwidth_hz: f64,
    pub sla: Sla,
    pub start: Seconds,
    pub duration: Seconds,
}

/// Resolves one service auction. The allocated share is what the seller can
/// provide from its current holdings, capped at the requested demand.
#[allow(clippy::too_many_arguments)]
pub fn run_service_auction<R: Rng + ?Sized>(
    request: &ServiceRequest,
    operators: &[Operator],
    pool: &ResourcePool,
    policy: &ServicePolicy,
    bandwidth_hz: f64,
    now: Seconds,
    duration: Seconds,
    rng: &mut R,
) -> Result<Award, MarketError> {
    if operators.is_empty() {
        return Err(MarketError::NoOperators);
    }
    let (seller, price) = match policy {
        ServicePolicy::RandomUniform => {
            let pick = rng.random_range(0..operators.len());
            (operators[pick].id, rng.random::<f64>())
        }
        ServicePolicy::Utility { weights } => {
            let bids: Vec<Bid> = operators
                .iter()
                .map(|op| {
                    let price = rng.random::<f64>();
                    let avail = pool.held_share(op.id, request.cell).min(1.0);
                    Bid { seller: op.id, features: vec![1.0 - price, avail], price }
                })
                .collect();
            let (i, _) = buyer_utility(weights, &bids)?;
            (bids[i].seller, bids[i].price)
        }
    };
    let allocated_share = request.demand_share.min(pool.held_share(seller, request.cell));
    Ok(Award {
        buyer: request.user,
        seller,
        price,
        allocated_share,
        bandwidth_hz: allocated_share * bandwidth_hz,
        sla: Sla { demand_share: request.demand_share },
        start: now,
        duration,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RanRequest {
    pub operator: OperatorId,
    pub cell: CellId,
    pub needed_share: f64,
    pub created_at: Seconds,
}

/// Emits a request when `demand` in `cell` exceeds what `op` holds there.
pub fn request_ran_resources(
    pool: &ResourcePool,
    op: OperatorId,
    demand: f64,
    cell: CellId,
    now: Seconds,
) -> Option<RanRequest> {
    let held = pool.held_share(op, cell);
    (demand > held + 1e-12).then_some(RanRequest { operator: op, cell, needed_share: demand - held, created_at: now })
}

/// Leases spare units in the requested cell from the cheapest supplier.
///
/// `demand_of(op)` is each operator's own demand in the cell, which it keeps
/// for itself. The winner leases as many units as it can spare up to the
/// requested amount.
pub fn run_ran_auction(
    request: &RanRequest,
    operators: &[Operator],
    pool: &mut ResourcePool,
    demand_of: impl Fn(OperatorId) -> f64,
    now: Seconds,
    lease_duration: Seconds,
) -> Option<Lease> {
    let needed = units_needed(request.needed_share, pool.unit_share());
    if needed == 0 {
        return None;
    }
    let mut best: Option<(&Operator, Vec<usize>)> = None;
    for op in operators.iter().filter(|o| o.id != request.operator) {
        let spare = pool.leasable_units(op.id, request.cell, demand_of(op.id));
        if spare.is_empty() {
            continue;
        }
        let better = match &best {
            None => true,
            Some((b, _)) => op.lease_price < b.lease_price || (op.lease_price == b.lease_price && op.id < b.id),
        };
        if better {
            best = Some((op, spare));
        }
    }
    let (seller, spare) = best?;
    let units: Vec<usize> = spare.into_iter().take(needed).collect();
    let expiry = now + lease_duration;
    for &u in &units {
        pool.units[u].holder = request.operator;
        pool.units[u].lease_expiry = Some(expiry);
    }
    Some(Lease {
        lessor: seller.id,
        lessee: request.operator,
        cell: request.cell,
        units,
        price: seller.lease_price,
        start: now,
        expiry,
    })
}

/// Returns every unit whose lease has expired (inclusive of `now`) to its
/// owner. Returns the reverted unit indices.
pub fn expire_leases(pool: &mut ResourcePool, now: Seconds) -> Vec<usize> {
    let mut reverted = Vec::new();
    for (i, u) in pool.units.iter_mut().enumerate() {
        if matches!(u.lease_expiry, Some(t) if t <= now) {
            u.holder = u.owner;
            u.lease_expiry = None;
            reverted.push(i);
        }
    }
    reverted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use approx::assert_relative_eq;

    fn bid(seller: usize, features: Vec<f64>) -> Bid {
        Bid { seller: OperatorId(seller), features, price: 0.5 }
    }

    fn ops(prices: &[f64]) -> Vec<Operator> {
        prices.iter().enumerate().map(|(i, &p)| Operator { id: OperatorId(i), lease_price: p }).collect()
    }

    #[test]
    fn utility_weight_isolates_feature() {
        let bids = vec![bid(0, vec![0.9, 0.1]), bid(1, vec![0.2, 0.8])];
        assert_eq!(buyer_utility(&[1.0, 0.0], &bids).unwrap(), (0, 0.9));
        assert_eq!(buyer_utility(&[0.0, 0.0], &bids).unwrap(), (0, 0.0));
        assert_eq!(buyer_utility::<f64>(&[1.0], &[]), Err(MarketError::NoBids));
        assert!(buyer_utility(&[1.0, 0.0], &[bid(0, vec![1.0])]).is_err());
        assert!(buyer_utility(&[1.5, 0.0], &bids).is_err());
    }

    #[test]
    fn utility_tie_goes_to_lowest_seller() {
        let bids = vec![bid(3, vec![0.5]), bid(1, vec![0.5]), bid(2, vec![0.5])];
        assert_eq!(buyer_utility(&[1.0], &bids).unwrap().0, 1);
    }

    #[test]
    fn acceptance_examples() {
        assert_eq!(service_acceptance(0.0, 0.5, 0.1, 0.1, 5.0).unwrap(), 0.0);
        assert_relative_eq!(service_acceptance(1.0, 1.0, 0.07, 0.13, 1.0).unwrap(), 1.0 - (-1.0f64).exp());
        assert!(service_acceptance(-0.1, 0.5, 0.1, 0.1, 5.0).is_err());
        assert!(service_acceptance(0.1, 0.5, 0.1, 0.1, 0.0).is_err());
        let a32 = service_acceptance(1.0f32, 1.0, 0.1, 0.1, 1.0).unwrap();
        assert!((a32 - 0.632_120_56).abs() < 1e-6);
    }

    #[test]
    fn demand_ranges_are_ordered() {
        let (l, a, h) = (ProfileKind::Low.demand_range(), ProfileKind::Average.demand_range(), ProfileKind::High.demand_range());
        assert!(l.0 < a.0 && a.0 < h.0 && l.1 < a.1 && a.1 < h.1);
    }

    #[test]
    fn ratios_split_every_cell() {
        let pool = ResourcePool::with_ratios(3, &[1.0, 0.0], 10).unwrap();
        assert_relative_eq!(pool.held_share(OperatorId(0), CellId(2)), 1.0, epsilon = 1e-12);
        assert_eq!(pool.held_share(OperatorId(1), CellId(2)), 0.0);
        let pool = ResourcePool::with_ratios(2, &[0.5, 0.5], 10).unwrap();
        assert_relative_eq!(pool.held_share(OperatorId(1), CellId(1)), 0.5);
        let pool = ResourcePool::with_ratios(1, &[1.0 / 3.0; 3], 10).unwrap();
        let counts: Vec<usize> = (0..3).map(|o| pool.units.iter().filter(|u| u.owner == OperatorId(o)).count()).collect();
        assert_eq!(counts, vec![4, 3, 3]);
        assert!(ResourcePool::with_ratios(1, &[0.7, 0.7], 10).is_err());
    }

    #[test]
    fn random_cells_reuse_draws_across_operator_counts() {
        let p2 = ResourcePool::random_cells(19, 2, 10, &mut substream(5, 2)).unwrap();
        let p4 = ResourcePool::random_cells(19, 4, 10, &mut substream(5, 2)).unwrap();
        for c in 0..19 {
            let o2 = p2.majority_owner(CellId(c)).0;
            let o4 = p4.majority_owner(CellId(c)).0;
            assert_eq!(o2, o4 / 2);
            assert_relative_eq!(p2.cell_total(CellId(c)), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn random_policy_single_operator_wins() {
        let pool = ResourcePool::with_ratios(1, &[1.0], 10).unwrap();
        let req = ServiceRequest { user: UserId(0), cell: CellId(0), demand_share: 0.01 };
        let mut rng = substream(1, 9);
        for _ in 0..100 {
            let a = run_service_auction(&req, &ops(&[0.5]), &pool, &ServicePolicy::RandomUniform, 20e6, 0.0, 30.0, &mut rng).unwrap();
            assert_eq!(a.seller, OperatorId(0));
            assert!((0.0..=1.0).contains(&a.price));
            assert_relative_eq!(a.bandwidth_hz, 0.01 * 20e6);
        }
        let none = run_service_auction(&req, &[], &pool, &ServicePolicy::RandomUniform, 20e6, 0.0, 30.0, &mut rng);
        assert_eq!(none, Err(MarketError::NoOperators));
    }

    #[test]
    fn utility_policy_on_price_picks_cheapest() {
        let pool = ResourcePool::with_ratios(1, &[0.5, 0.5], 10).unwrap();
        let req = ServiceRequest { user: UserId(0), cell: CellId(0), demand_share: 0.01 };
        let policy = ServicePolicy::Utility { weights: [1.0, 0.0] };
        let operators = ops(&[0.5, 0.5, 0.5]);
        for s in 0..50 {
            let mut a = substream(s, 9);
            let mut b = substream(s, 9);
            let award = run_service_auction(&req, &operators, &pool, &policy, 20e6, 0.0, 30.0, &mut a).unwrap();
            let prices: Vec<f64> = (0..3).map(|_| b.random::<f64>()).collect();
            let min = prices.iter().cloned().fold(f64::INFINITY, f64::min);
            assert_eq!(award.price, min);
        }
    }

    #[test]
    fn ran_request_guard() {
        let pool = ResourcePool::with_ratios(4, &[0.5, 0.5], 10).unwrap();
        assert!(request_ran_resources(&pool, OperatorId(0), 0.4, CellId(3), 0.0).is_none());
        let r = request_ran_resources(&pool, OperatorId(0), 0.7, CellId(3), 1.0).unwrap();
        assert_eq!(r.cell, CellId(3));
        assert_relative_eq!(r.needed_share, 0.2, epsilon = 1e-12);
    }

    #[test]
    fn cheapest_supplier_leases_and_units_return() {
        let mut pool = ResourcePool::with_ratios(1, &[0.0, 0.5, 0.5], 10).unwrap();
        let operators = ops(&[0.9, 0.5, 0.3]);
        let req = RanRequest { operator: OperatorId(0), cell: CellId(0), needed_share: 0.2, created_at: 0.0 };
        let lease = run_ran_auction(&req, &operators, &mut pool, |_| 0.1, 1.0, 10.0).unwrap();
        assert_eq!(lease.lessor, OperatorId(2));
        assert_eq!(lease.units.len(), 2);
        assert_relative_eq!(pool.held_share(OperatorId(0), CellId(0)), 0.2, epsilon = 1e-12);
        // Leased units are no longer spare for the lessor.
        let spare = pool.leasable_units(OperatorId(2), CellId(0), 0.1);
        assert!(spare.iter().all(|u| !lease.units.contains(u)));
        assert!(expire_leases(&mut pool, 10.999).is_empty());
        assert_eq!(expire_leases(&mut pool, 11.0).len(), 2);
        assert_eq!(pool.held_share(OperatorId(0), CellId(0)), 0.0);
        assert_relative_eq!(pool.cell_total(CellId(0)), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn no_supply_no_lease() {
        let mut pool = ResourcePool::with_ratios(1, &[1.0, 0.0], 10).unwrap();
        let operators = ops(&[0.5, 0.5]);
        let req = RanRequest { operator: OperatorId(1), cell: CellId(0), needed_share: 0.1, created_at: 0.0 };
        assert!(run_ran_auction(&req, &operators, &mut pool, |_| 1.0, 0.0, 10.0).is_none());
        assert!(run_ran_auction(&req, &operators, &mut pool, |_| 0.95, 0.0, 10.0).is_none());
        assert!(run_ran_auction(&req, &operators, &mut pool, |_| 0.85, 0.0, 10.0).is_some());
    }

    #[test]
    fn units_needed_rounding() {
        assert_eq!(units_needed(0.0, 0.1), 0);
        assert_eq!(units_needed(0.3, 0.1), 3);
        assert_eq!(units_needed(0.1 + 0.2, 0.1), 3);
        assert_eq!(units_needed(0.31, 0.1), 4);
    }
}
