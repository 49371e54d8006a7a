//! Hexagonal deployment, user drop and the radio link budget.
//!
//! Cells are laid out as a centre cell plus complete hexagonal rings, so
//! valid cell counts are `1 + 3k(k + 1)`: 1, 7, 19, 37, ... Adjacent centres
//! sit `sqrt(3) * radius` apart. Received power follows
//!
//! ```text
//! PL(d)  = PL0 + 10 alpha log10(d) + sigma / 2 + (d / 10) (gamma / 2)
//! P_rx   = P_tx - PL(d)
//! ```
//!
//! with the shadowing and obstacle terms applied at their half values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ids::{CellId, OperatorId, UserId};
use crate::market::ProfileKind;
use crate::scalar::{dbm_to_mw, Scalar};

/// Thermal noise power spectral density at room temperature.
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

/// Distance (m) at which `PL0` is referenced; link budgets clamp to it.
pub const REFERENCE_DISTANCE_M: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("cell count {0} does not form complete hexagonal rings (expected 1, 7, 19, 37, ...)")]
    IncompleteRings(usize),
    #[error("cell radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("user {0} has no serving cell")]
    NoServingCell(UserId),
    #[error("serving cell {0} listed as its own interferer")]
    ServingCellInterferes(CellId),
    #[error("unknown cell {0}")]
    UnknownCell(CellId),
    #[error("negative input to capacity: bandwidth {bandwidth_hz}, sinr {sinr}")]
    NegativeCapacityInput { bandwidth_hz: f64, sinr: f64 },
    #[error("invalid radio parameter `{field}`: {reason}")]
    InvalidRadio { field: &'static str, reason: &'static str },
    #[error("owner list has {got} entries for {expected} cells")]
    OwnerCount { got: usize, expected: usize },
}

/// Propagation constants of the link budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioParams<T = f64> {
    pub tx_power_dbm: T,
    pub pl0_db: T,
    pub alpha: T,
    pub sigma_db: T,
    pub gamma_db: T,
    pub bandwidth_hz: T,
    pub carrier_hz: T,
    pub noise_dbm: T,
}

impl<T: Scalar> Default for RadioParams<T> {
    fn default() -> Self {
        let bandwidth_hz = T::of(20e6);
        Self {
            tx_power_dbm: T::of(20.0),
            pl0_db: T::of(5.0),
            alpha: T::of(4.4),
            sigma_db: T::of(9.5),
            gamma_db: T::of(30.0),
            bandwidth_hz,
            carrier_hz: T::of(5e9),
            noise_dbm: thermal_noise_dbm(bandwidth_hz, T::of(7.0)),
        }
    }
}

impl<T: Scalar> RadioParams<T> {
    pub fn validate(&self) -> Result<(), TopologyError> {
        let finite = [
            ("tx_power_dbm", self.tx_power_dbm),
            ("pl0_db", self.pl0_db),
            ("sigma_db", self.sigma_db),
            ("gamma_db", self.gamma_db),
            ("noise_dbm", self.noise_dbm),
        ];
        for (field, v) in finite {
            if !v.is_finite() {
                return Err(TopologyError::InvalidRadio { field, reason: "must be finite" });
            }
        }
        if !(self.alpha > T::zero()) || !self.alpha.is_finite() {
            return Err(TopologyError::InvalidRadio { field: "alpha", reason: "must be > 0" });
        }
        if !(self.bandwidth_hz > T::zero()) || !self.bandwidth_hz.is_finite() {
            return Err(TopologyError::InvalidRadio { field: "bandwidth_hz", reason: "must be > 0" });
        }
        if !(self.carrier_hz > T::zero()) {
            return Err(TopologyError::InvalidRadio { field: "carrier_hz", reason: "must be > 0" });
        }
        Ok(())
    }
}

/// Noise floor over `bandwidth_hz` for a receiver with the given noise figure.
pub fn thermal_noise_dbm<T: Scalar>(bandwidth_hz: T, noise_figure_db: T) -> T {
    T::of(THERMAL_NOISE_DBM_PER_HZ) + T::of(10.0) * bandwidth_hz.log10() + noise_figure_db
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point<T = f64> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point<T>) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell<T = f64> {
    pub id: CellId,
    pub center: Point<T>,
    pub radius: T,
    pub owner: OperatorId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology<T = f64> {
    pub cells: Vec<Cell<T>>,
    pub params: RadioParams<T>,
}

/// A dropped user. Market-facing fields start empty and are filled by the
/// scenario driver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserEquipment<T = f64> {
    pub id: UserId,
    pub position: Point<T>,
    pub serving_cell: Option<CellId>,
    pub operator: Option<OperatorId>,
    pub demand_share: T,
    pub profile: ProfileKind,
}

/// Number of complete rings around the centre cell, if `num_cells` is valid.
pub fn ring_count(num_cells: usize) -> Option<usize> {
    let mut k = 0usize;
    loop {
        let total = 1 + 3 * k * (k + 1);
        if total == num_cells {
            return Some(k);
        }
        if total > num_cells {
            return None;
        }
        k += 1;
    }
}

// Axial hex directions, walked in order to trace a ring.
const AXIAL_DIRECTIONS: [(i64, i64); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

fn axial_to_xy<T: Scalar>(q: i64, r: i64, radius: T) -> Point<T> {
    let sqrt3 = T::of(3.0).sqrt();
    let q = T::of(q as f64);
    let r = T::of(r as f64);
    Point::new(radius * sqrt3 * (q + r / T::of(2.0)), radius * T::of(1.5) * r)
}

/// Lays out a centre cell plus complete rings. All cells start owned by
/// operator 0; see [`Topology::assign_owners`].
pub fn build_hex_deployment<T: Scalar>(
    num_cells: usize,
    radius: T,
    params: RadioParams<T>,
) -> Result<Topology<T>, TopologyError> {
    if !(radius > T::zero()) || !radius.is_finite() {
        return Err(TopologyError::BadRadius(radius.to_f64_lossy()));
    }
    let rings = ring_count(num_cells).ok_or(TopologyError::IncompleteRings(num_cells))?;
    params.validate()?;

    let mut axial = vec![(0i64, 0i64)];
    for k in 1..=rings as i64 {
        let (dq, dr) = AXIAL_DIRECTIONS[4];
        let mut hex = (dq * k, dr * k);
        for &(sq, sr) in &AXIAL_DIRECTIONS {
            for _ in 0..k {
                axial.push(hex);
                hex = (hex.0 + sq, hex.1 + sr);
            }
        }
    }
    debug_assert_eq!(axial.len(), num_cells);

    let cells = axial
        .into_iter()
        .enumerate()
        .map(|(i, (q, r))| Cell {
            id: CellId(i),
            center: axial_to_xy(q, r, radius),
            radius,
            owner: OperatorId(0),
        })
        .collect();
    Ok(Topology { cells, params })
}

impl<T: Scalar> Topology<T> {
    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, id: CellId) -> Result<&Cell<T>, TopologyError> {
        self.cells.get(id.index()).ok_or(TopologyError::UnknownCell(id))
    }

    pub fn assign_owners(&mut self, owners: &[OperatorId]) -> Result<(), TopologyError> {
        if owners.len() != self.cells.len() {
            return Err(TopologyError::OwnerCount { got: owners.len(), expected: self.cells.len() });
        }
        for (cell, &owner) in self.cells.iter_mut().zip(owners) {
            cell.owner = owner;
        }
        Ok(())
    }

    /// Axis-aligned box enclosing every cell disk: `(min, max)`.
    pub fn bounding_box(&self) -> (Point<T>, Point<T>) {
        let mut lo = Point::new(T::infinity(), T::infinity());
        let mut hi = Point::new(T::neg_infinity(), T::neg_infinity());
        for c in &self.cells {
            lo.x = lo.x.min(c.center.x - c.radius);
            lo.y = lo.y.min(c.center.y - c.radius);
            hi.x = hi.x.max(c.center.x + c.radius);
            hi.y = hi.y.max(c.center.y + c.radius);
        }
        (lo, hi)
    }

    pub fn covers(&self, p: &Point<T>) -> bool {
        self.cells.iter().any(|c| c.center.distance(p) <= c.radius)
    }

    /// Closest cell centre; ties go to the lower cell id.
    pub fn nearest_cell(&self, p: &Point<T>) -> CellId {
        let mut best = (T::infinity(), CellId(0));
        for c in &self.cells {
            let d = c.center.distance(p);
            if d < best.0 {
                best = (d, c.id);
            }
        }
        best.1
    }

    /// Every cell except `serving`: single-band reuse-1.
    pub fn co_channel_cells(&self, serving: CellId) -> Vec<CellId> {
        self.cells.iter().map(|c| c.id).filter(|&id| id != serving).collect()
    }

    pub fn received_power_dbm(&self, cell: CellId, at: &Point<T>) -> Result<T, TopologyError> {
        let c = self.cell(cell)?;
        let d = c.center.distance(at).max(T::of(REFERENCE_DISTANCE_M));
        Ok(self.params.tx_power_dbm - path_loss_db(d, &self.params)?)
    }
}

/// Path loss in dB at `distance` metres.
pub fn path_loss_db<T: Scalar>(distance: T, params: &RadioParams<T>) -> Result<T, TopologyError> {
    if !(distance > T::zero()) {
        return Err(TopologyError::NonPositiveDistance(distance.to_f64_lossy()));
    }
    let two = T::of(2.0);
    Ok(params.pl0_db
        + T::of(10.0) * params.alpha * distance.log10()
        + params.sigma_db / two
        + (distance / T::of(10.0)) * (params.gamma_db / two))
}

/// Drops `n` users uniformly over the union of cell disks. Each user is
/// attached to its nearest cell.
pub fn drop_users<T: Scalar>(topology: &Topology<T>, n: usize, seed: u64) -> Vec<UserEquipment<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = topology.bounding_box();
    let (lo_x, lo_y) = (lo.x.to_f64_lossy(), lo.y.to_f64_lossy());
    let (w, h) = ((hi.x - lo.x).to_f64_lossy(), (hi.y - lo.y).to_f64_lossy());
    let mut users = Vec::with_capacity(n);
    while users.len() < n {
        let p = Point::new(
            T::of(lo_x + w * rng.random::<f64>()),
            T::of(lo_y + h * rng.random::<f64>()),
        );
        if !topology.covers(&p) {
            continue;
        }
        users.push(UserEquipment {
            id: UserId(users.len()),
            serving_cell: Some(topology.nearest_cell(&p)),
            position: p,
            operator: None,
            demand_share: T::zero(),
            profile: ProfileKind::Average,
        });
    }
    users
}

/// Linear SINR of `ue` against the listed co-channel cells.
pub fn sinr_linear<T: Scalar>(
    ue: &UserEquipment<T>,
    topology: &Topology<T>,
    co_channel_cells: &[CellId],
) -> Result<T, TopologyError> {
    let serving = ue.serving_cell.ok_or(TopologyError::NoServingCell(ue.id))?;
    if co_channel_cells.contains(&serving) {
        return Err(TopologyError::ServingCellInterferes(serving));
    }
    let signal = dbm_to_mw(topology.received_power_dbm(serving, &ue.position)?);
    let mut interference = T::zero();
    for &cell in co_channel_cells {
        interference += dbm_to_mw(topology.received_power_dbm(cell, &ue.position)?);
    }
    Ok(signal / (dbm_to_mw(topology.params.noise_dbm) + interference))
}

/// Shannon capacity `b log2(1 + sinr)` in bits/s.
pub fn capacity_bps<T: Scalar>(bandwidth_hz: T, sinr: T) -> Result<T, TopologyError> {
    if bandwidth_hz < T::zero() || sinr < T::zero() || bandwidth_hz.is_nan() || sinr.is_nan() {
        return Err(TopologyError::NegativeCapacityInput {
            bandwidth_hz: bandwidth_hz.to_f64_lossy(),
            sinr: sinr.to_f64_lossy(),
        });
    }
    Ok(bandwidth_hz * (T::one() + sinr).log2())
}
