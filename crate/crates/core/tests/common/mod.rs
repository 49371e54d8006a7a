//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the formula code it is compared against.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Slot-level simulation of N saturated 802.11 DCF stations.
pub struct DcfMonteCarlo {
    pub mean_slot_s: f64,
    /// Collided transmissions over all transmissions.
    pub collision_prob: f64,
    /// Mean backoff counter drawn over all draws.
    pub mean_counter: f64,
    /// Fraction of slots that were empty, successful, collided.
    pub slot_fractions: (f64, f64, f64),
    /// Time from a backoff draw to the end of the successful exchange that
    /// follows it, averaged over successful attempts.
    pub mean_access_delay_s: f64,
}

pub struct MacTiming {
    pub cw_min: u64,
    pub m: u32,
    pub r_max: u32,
    pub t_e: f64,
    pub t_s: f64,
    pub t_c: f64,
}

impl MacTiming {
    /// Default 802.11 constants (9/16/34 us, RTS 52, CTS 44, ACK 44, PHY
    /// header 40 us, 8.6 Mb/s) for a payload of `bits`.
    pub fn defaults(bits: u64) -> Self {
        let us = 1e-6;
        let data = 40.0 * us + bits as f64 / 8.6e6;
        Self {
            cw_min: 16,
            m: 6,
            r_max: 7,
            t_e: 9.0 * us,
            t_s: 52.0 * us + 3.0 * 16.0 * us + 44.0 * us + data + 44.0 * us,
            t_c: 52.0 * us + 34.0 * us,
        }
    }
}

pub fn simulate_dcf(n: usize, timing: &MacTiming, slots: usize, seed: u64) -> DcfMonteCarlo {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cw = |stage: u32| timing.cw_min << stage.min(timing.m);
    let mut stage = vec![0u32; n];
    let mut draws = 0u64;
    let mut drawn_sum = 0u64;
    let mut draw = |stage: u32, rng: &mut ChaCha8Rng| {
        let c = rng.random_range(0..cw(stage));
        draws += 1;
        drawn_sum += c;
        c
    };
    let mut counter: Vec<u64> = (0..n).map(|_| draw(0, &mut rng)).collect();
    let (mut empty, mut success, mut collision) = (0u64, 0u64, 0u64);
    let (mut attempts, mut collided) = (0u64, 0u64);
    let mut total_time = 0.0;
    let mut drawn_at = vec![0.0f64; n];
    let (mut access_sum, mut access_n) = (0.0, 0u64);
    for _ in 0..slots {
        let tx: Vec<usize> = (0..n).filter(|&i| counter[i] == 0).collect();
        match tx.len() {
            0 => {
                empty += 1;
                total_time += timing.t_e;
            }
            1 => {
                success += 1;
                total_time += timing.t_s;
            }
            _ => {
                collision += 1;
                total_time += timing.t_c;
            }
        }
        for c in counter.iter_mut() {
            if *c > 0 {
                *c -= 1;
            }
        }
        attempts += tx.len() as u64;
        for &i in &tx {
            if tx.len() == 1 {
                stage[i] = 0;
                access_sum += total_time - drawn_at[i];
                access_n += 1;
            } else {
                collided += 1;
                stage[i] += 1;
                if stage[i] > timing.r_max {
                    stage[i] = 0;
                }
            }
            counter[i] = draw(stage[i], &mut rng);
            drawn_at[i] = total_time;
        }
    }
    let s = slots as f64;
    DcfMonteCarlo {
        mean_slot_s: total_time / s,
        collision_prob: if attempts == 0 { 0.0 } else { collided as f64 / attempts as f64 },
        mean_counter: drawn_sum as f64 / draws as f64,
        slot_fractions: (empty as f64 / s, success as f64 / s, collision as f64 / s),
        mean_access_delay_s: access_sum / access_n.max(1) as f64,
    }
}

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
pub fn ks_distance(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sample.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Fraction of the union of disks closest to each centre, by midpoint-rule
/// integration on a `grid x grid` lattice over the bounding box.
pub fn nearest_centre_area_fractions(centres: &[(f64, f64)], radius: f64, grid: usize) -> Vec<f64> {
    let lo_x = centres.iter().map(|c| c.0).fold(f64::INFINITY, f64::min) - radius;
    let hi_x = centres.iter().map(|c| c.0).fold(f64::NEG_INFINITY, f64::max) + radius;
    let lo_y = centres.iter().map(|c| c.1).fold(f64::INFINITY, f64::min) - radius;
    let hi_y = centres.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max) + radius;
    let mut counts = vec![0u64; centres.len()];
    let mut total = 0u64;
    for i in 0..grid {
        let x = lo_x + (hi_x - lo_x) * (i as f64 + 0.5) / grid as f64;
        for j in 0..grid {
            let y = lo_y + (hi_y - lo_y) * (j as f64 + 0.5) / grid as f64;
            let (mut best, mut best_d) = (usize::MAX, f64::INFINITY);
            for (k, c) in centres.iter().enumerate() {
                let d = ((x - c.0).powi(2) + (y - c.1).powi(2)).sqrt();
                if d < best_d {
                    best_d = d;
                    best = k;
                }
            }
            if best_d <= radius {
                counts[best] += 1;
                total += 1;
            }
        }
    }
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// Received power in mW straight from the link-budget formula, with the
/// 1 m reference distance floor.
pub fn rx_mw(tx_dbm: f64, pl0: f64, alpha: f64, sigma: f64, gamma: f64, d: f64) -> f64 {
    let d = d.max(1.0);
    let pl = pl0 + 10.0 * alpha * d.log10() + sigma / 2.0 + d / 10.0 * gamma / 2.0;
    10f64.powf((tx_dbm - pl) / 10.0)
}

/// Standard deviation of a binomial proportion.
pub fn binomial_sigma(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Fraction of pairs `(a, b)` with `a <= b + tol`.
pub fn fraction_non_decreasing(pairs: &[(f64, f64)], tol: f64) -> f64 {
    pairs.iter().filter(|(a, b)| *a <= *b + tol).count() as f64 / pairs.len() as f64
}
