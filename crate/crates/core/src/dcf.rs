//! Saturated 802.11 DCF contention model.
//!
//! Every station transmits in a generic slot with probability `tau`. Given
//! `N` stations the slot is empty, a success or a collision with
//!
//! ```text
//! p_e = (1 - tau)^N
//! p_s = N tau (1 - tau)^(N - 1)
//! p_c = 1 - p_e - p_s
//! ```
//!
//! and the mean slot length is `p_e T_e + p_s T_s + p_c T_c`. The backoff
//! stage seen by an attempt follows a truncated geometric law in the
//! conditional collision probability, and the expected countdown is the
//! stage-weighted mean of a uniform draw on `[0, CW(w) - 1]`.
//!
//! `tau` itself is closed with the retry-limited renewal argument: a station
//! at stage `w` spends `(CW(w) + 1) / 2` slots on average per attempt and
//! reaches stage `w` with weight `p^w`, so
//!
//! ```text
//! tau(p) = sum_w p^w / sum_w p^w (CW(w) + 1) / 2,   w = 0..=R_max
//! p      = 1 - (1 - tau)^(N - 1)
//! ```
//!
//! solved by damped fixed-point iteration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// HE SU data rates (Mb/s) for MCS 0..=11 at 20 MHz, one spatial stream,
/// 0.8 us guard interval.
pub const HE_20MHZ_1SS_RATES_MBPS: [f64; 12] =
    [8.6, 17.2, 25.8, 34.4, 51.6, 68.8, 77.4, 86.0, 103.2, 114.7, 129.0, 143.4];

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_DAMPING: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DcfError {
    #[error("contention model needs at least one node")]
    NoNodes,
    #[error("MCS index {0} outside 0..=11")]
    BadMcs(u8),
    #[error("invalid DCF parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: &'static str },
    #[error("collision probability {0} outside [0, 1)")]
    BadCollisionProbability(f64),
    #[error("tau fixed point did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
}

/// MAC timing and backoff constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcfParams<T = f64> {
    pub cw_min: u32,
    pub max_backoff_stage: u32,
    pub r_max: u32,
    pub mcs_index: u8,
    pub empty_slot_us: T,
    pub sifs_us: T,
    pub difs_us: T,
    pub rts_us: T,
    pub cts_us: T,
    pub ack_us: T,
    pub phy_header_us: T,
    pub data_rate_bps: T,
}

impl<T: Scalar> Default for DcfParams<T> {
    fn default() -> Self {
        Self {
            cw_min: 16,
            max_backoff_stage: 6,
            r_max: 7,
            mcs_index: 0,
            empty_slot_us: T::of(9.0),
            sifs_us: T::of(16.0),
            difs_us: T::of(34.0),
            // Legacy 6 Mb/s control frames: 20 us preamble plus 4 us symbols.
            rts_us: T::of(52.0),
            cts_us: T::of(44.0),
            ack_us: T::of(44.0),
            phy_header_us: T::of(40.0),
            data_rate_bps: T::of(HE_20MHZ_1SS_RATES_MBPS[0] * 1e6),
        }
    }
}

impl<T: Scalar> DcfParams<T> {
    /// Returns a copy using the data rate of `mcs_index`.
    pub fn with_mcs(mut self, mcs_index: u8) -> Result<Self, DcfError> {
        let rate = *HE_20MHZ_1SS_RATES_MBPS.get(mcs_index as usize).ok_or(DcfError::BadMcs(mcs_index))?;
        self.mcs_index = mcs_index;
        self.data_rate_bps = T::of(rate * 1e6);
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), DcfError> {
        if self.cw_min < 1 {
            return Err(DcfError::InvalidParams { field: "cw_min", reason: "must be >= 1" });
        }
        if self.max_backoff_stage > 20 {
            return Err(DcfError::InvalidParams { field: "max_backoff_stage", reason: "must be <= 20" });
        }
        if self.mcs_index as usize >= HE_20MHZ_1SS_RATES_MBPS.len() {
            return Err(DcfError::BadMcs(self.mcs_index));
        }
        let durations = [
            ("empty_slot_us", self.empty_slot_us),
            ("sifs_us", self.sifs_us),
            ("difs_us", self.difs_us),
            ("rts_us", self.rts_us),
            ("cts_us", self.cts_us),
            ("ack_us", self.ack_us),
            ("phy_header_us", self.phy_header_us),
            ("data_rate_bps", self.data_rate_bps),
        ];
        for (field, v) in durations {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(DcfError::InvalidParams { field, reason: "must be positive and finite" });
            }
        }
        Ok(())
    }

    /// `CW(w) = 2^min(w, m) CW_min`.
    pub fn contention_window(&self, stage: u32) -> u64 {
        (self.cw_min as u64) << stage.min(self.max_backoff_stage)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauSolution<T = f64> {
    pub tau: T,
    pub p_c: T,
    pub residual: T,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotProbabilities<T = f64> {
    pub empty: T,
    pub success: T,
    pub collision: T,
}

/// Slot durations in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotDurations<T = f64> {
    pub empty: T,
    pub success: T,
    pub collision: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcfSolution<T = f64> {
    pub tau: T,
    pub p_c: T,
    pub probabilities: SlotProbabilities<T>,
    pub durations: SlotDurations<T>,
    pub expected_slot: T,
    pub expected_backoff_slots: T,
}

/// Per-slot transmit probability implied by conditional collision
/// probability `p_c`.
pub fn tau_given_collision<T: Scalar>(p_c: T, params: &DcfParams<T>) -> T {
    let mut weight = T::one();
    let mut attempts = T::zero();
    let mut slots = T::zero();
    for w in 0..=params.r_max {
        let window = T::of(params.contention_window(w) as f64);
        attempts += weight;
        slots += weight * (window + T::one()) / T::of(2.0);
        weight *= p_c;
    }
    attempts / slots
}

fn collision_given_tau<T: Scalar>(tau: T, n_nodes: usize) -> T {
    T::one() - (T::one() - tau).powi(n_nodes as i32 - 1)
}

/// Solves the `tau`/`p_c` fixed point by damped iteration, falling back to
/// bisection when the damped map oscillates (large `n_nodes`).
pub fn solve_tau<T: Scalar>(
    n_nodes: usize,
    params: &DcfParams<T>,
    tol: T,
    max_iter: usize,
) -> Result<TauSolution<T>, DcfError> {
    if n_nodes == 0 {
        return Err(DcfError::NoNodes);
    }
    params.validate()?;
    let damping = T::of(DEFAULT_DAMPING);
    let residual_at = |tau: T| {
        let p = collision_given_tau(tau, n_nodes);
        (p, tau_given_collision(p, params) - tau)
    };

    // Start from the collision-free value; for a single node it is exact.
    let mut tau = tau_given_collision(T::zero(), params);
    let mut last = T::infinity();
    for it in 0..max_iter {
        let (p_c, step) = residual_at(tau);
        last = step.abs();
        if last < tol {
            return Ok(TauSolution { tau, p_c, residual: last, iterations: it });
        }
        tau += damping * step;
    }

    // The map is decreasing in tau, so the fixed point is bracketed by [0, 1].
    let (mut lo, mut hi) = (T::zero(), T::one());
    for it in 0..max_iter {
        let mid = (lo + hi) / T::of(2.0);
        let (p_c, step) = residual_at(mid);
        if step.abs() < tol {
            return Ok(TauSolution { tau: mid, p_c, residual: step.abs(), iterations: max_iter + it });
        }
        if step > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        last = last.min(step.abs());
    }
    Err(DcfError::NoConvergence { iterations: 2 * max_iter, residual: last.to_f64_lossy() })
}

pub fn slot_probabilities<T: Scalar>(tau: T, n_nodes: usize) -> SlotProbabilities<T> {
    let n = T::of_usize(n_nodes);
    let idle_others = (T::one() - tau).powi(n_nodes as i32 - 1);
    let empty = (T::one() - tau) * idle_others;
    let success = n * tau * idle_others;
    SlotProbabilities { empty, success, collision: T::one() - empty - success }
}

/// Durations of an empty, successful (RTS/CTS exchange) and collided slot.
pub fn slot_durations<T: Scalar>(params: &DcfParams<T>, payload_bits: u64) -> SlotDurations<T> {
    let us = T::of(1e-6);
    let data = params.phy_header_us * us + T::of(payload_bits as f64) / params.data_rate_bps;
    SlotDurations {
        empty: params.empty_slot_us * us,
        success: (params.rts_us + T::of(3.0) * params.sifs_us + params.cts_us + params.ack_us) * us + data,
        collision: (params.rts_us + params.difs_us) * us,
    }
}

pub fn expected_slot<T: Scalar>(probs: &SlotProbabilities<T>, durations: &SlotDurations<T>) -> T {
    probs.empty * durations.empty + probs.success * durations.success + probs.collision * durations.collision
}

/// Probability that an attempt happens at backoff stage `w`, `w = 0..=r_max`.
pub fn stage_distribution<T: Scalar>(p_c: T, r_max: u32) -> Result<Vec<T>, DcfError> {
    if !(p_c >= T::zero() && p_c < T::one()) {
        return Err(DcfError::BadCollisionProbability(p_c.to_f64_lossy()));
    }
    let norm = (T::one() - p_c) / (T::one() - p_c.powi(r_max as i32 + 1));
    Ok((0..=r_max).map(|w| p_c.powi(w as i32) * norm).collect())
}

/// Mean number of backoff slots per attempt.
pub fn expected_backoff_slots<T: Scalar>(p_c: T, params: &DcfParams<T>) -> Result<T, DcfError> {
    let stages = stage_distribution(p_c, params.r_max)?;
    Ok(stages
        .iter()
        .enumerate()
        .map(|(w, &pi)| pi * (T::of(params.contention_window(w as u32) as f64) - T::one()) / T::of(2.0))
        .sum())
}

/// Full model for `n_nodes` saturated contenders sending `payload_bits`.
pub fn solve<T: Scalar>(n_nodes: usize, payload_bits: u64, params: &DcfParams<T>) -> Result<DcfSolution<T>, DcfError> {
    // f32 cannot resolve 1e-10; never ask for better than a few ulps.
    let tol = T::of(DEFAULT_TOLERANCE).max(T::epsilon() * T::of(16.0));
    let TauSolution { tau, p_c, .. } = solve_tau(n_nodes, params, tol, DEFAULT_MAX_ITER)?;
    let probabilities = slot_probabilities(tau, n_nodes);
    let durations = slot_durations(params, payload_bits);
    Ok(DcfSolution {
        tau,
        p_c,
        probabilities,
        durations,
        expected_slot: expected_slot(&probabilities, &durations),
        expected_backoff_slots: expected_backoff_slots(p_c, params)?,
    })
}

/// Expected channel access delay: backoff countdown measured in generic
/// slots plus one successful exchange.
pub fn access_delay<T: Scalar>(n_nodes: usize, payload_bits: u64, params: &DcfParams<T>) -> Result<T, DcfError> {
    let s = solve(n_nodes, payload_bits, params)?;
    Ok(s.expected_backoff_slots * s.expected_slot + s.durations.success)
}
