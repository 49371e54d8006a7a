//! Experiment presets and their CSV outputs.
//!
//! | preset           | sweep                                                        | files |
//! |------------------|--------------------------------------------------------------|-------|
//! | `bc-delay`       | ledger x `S_B` x `T_wait` x `lambda`                         | `bc-delay.csv` |
//! | `bc-overhead`    | public ledger, `S_B` x `T_wait` x `lambda`                   | `bc-overhead.csv` |
//! | `sharing-random` | `M` in 2..=5 x profile x sharing mode, random cell ownership | `sharing-random.csv`, `sharing-random-summary.csv` |
//! | `mno-mvno`       | `M = 2`, ratios `{1,0}` and `{0.5,0.5}` x sharing mode       | `mno-mvno-timeseries.csv`, `mno-mvno-summary.csv` |
//!
//! Rows are ordered sweep-major, seed-minor. Replication `r` uses seed
//! `seed + r`. Every file starts with a `#` line carrying the preset, the
//! seed, the replication count and the SHA-256 of the effective config.

mod table;

use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

pub use table::{emit_csv, format_float, Field, Table};

use crate::ledger::{fork_free_overhead, overhead_ratio, run_workload, LedgerKind, LedgerMetrics, Workload};
use crate::market::ProfileKind;
use crate::sim::{
    aggregate_metrics, run_scenario_in, MetricsSeries, Ownership, ProfileMix, SharingMode, SimConfig, SimError,
};

/// Block sizes swept by the ledger presets (bits).
pub const BLOCK_SIZE_SWEEP: [u64; 10] = [3_000, 6_000, 9_000, 12_000, 15_000, 18_000, 21_000, 24_000, 27_000, 30_000];
pub const MAX_WAIT_SWEEP: [f64; 2] = [0.1, 5.0];
/// Arrival rates (tx/s). A modelling choice; no values are given for them.
pub const LAMBDA_SWEEP: [f64; 4] = [0.1, 1.0, 10.0, 100.0];
pub const OPERATOR_SWEEP: [usize; 4] = [2, 3, 4, 5];
pub const MODES: [SharingMode; 2] = [SharingMode::Static, SharingMode::Dynamic];
pub const OWNERSHIP_RATIOS: [[f64; 2]; 2] = [[1.0, 0.0], [0.5, 0.5]];

#[derive(Debug)]
pub enum ExperimentError {
    Sim(SimError),
    Io { path: String, message: String },
}

impl fmt::Display for ExperimentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExperimentError::Sim(e) => write!(f, "{e}"),
            ExperimentError::Io { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl std::error::Error for ExperimentError {}

impl From<SimError> for ExperimentError {
    fn from(e: SimError) -> Self {
        ExperimentError::Sim(e)
    }
}

impl From<crate::ledger::LedgerError> for ExperimentError {
    fn from(e: crate::ledger::LedgerError) -> Self {
        ExperimentError::Sim(SimError::Ledger(e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    BcDelay,
    BcOverhead,
    SharingRandom,
    MnoMvno,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::BcDelay, Preset::BcOverhead, Preset::SharingRandom, Preset::MnoMvno];

    pub fn name(self) -> &'static str {
        match self {
            Preset::BcDelay => "bc-delay",
            Preset::BcOverhead => "bc-overhead",
            Preset::SharingRandom => "sharing-random",
            Preset::MnoMvno => "mno-mvno",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|p| p.name()).collect()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn replication_seeds(seed: u64, replications: usize) -> Vec<u64> {
    (0..replications as u64).map(|r| seed.wrapping_add(r)).collect()
}

/// One ledger-only grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerPoint {
    pub kind: LedgerKind,
    pub block_size_bits: u64,
    pub max_wait_s: f64,
    pub lambda_tps: f64,
}

/// Runs the Poisson workload of `config.workload` at one grid point.
pub fn run_ledger_point(config: &SimConfig, point: &LedgerPoint, seed: u64) -> Result<LedgerMetrics, ExperimentError> {
    let mut cfg = config.ledger_config(point.kind).map_err(crate::ledger::LedgerError::from)?;
    cfg.block_size_bits = point.block_size_bits;
    cfg.max_wait_s = point.max_wait_s;
    let workload = Workload::new(point.lambda_tps, config.workload.n_transactions, config.tx_bits);
    Ok(run_workload(cfg, &workload, seed)?.into_metrics())
}

fn ledger_grid(kinds: &[LedgerKind]) -> Vec<LedgerPoint> {
    let mut grid = Vec::new();
    for &kind in kinds {
        for &max_wait_s in &MAX_WAIT_SWEEP {
            for &lambda_tps in &LAMBDA_SWEEP {
                for &block_size_bits in &BLOCK_SIZE_SWEEP {
                    grid.push(LedgerPoint { kind, block_size_bits, max_wait_s, lambda_tps });
                }
            }
        }
    }
    grid
}

/// Evaluates `f` for every (point, seed) pair in parallel; results keep
/// point-major, seed-minor order.
fn sweep<P: Sync, R: Send>(
    points: &[P],
    seeds: &[u64],
    f: impl Fn(&P, u64) -> Result<R, ExperimentError> + Sync,
) -> Result<Vec<(usize, u64, R)>, ExperimentError> {
    let jobs: Vec<(usize, u64)> = (0..points.len()).flat_map(|i| seeds.iter().map(move |&s| (i, s))).collect();
    jobs.par_iter().map(|&(i, s)| Ok((i, s, f(&points[i], s)?))).collect()
}

pub fn bc_delay_table(config: &SimConfig, seeds: &[u64]) -> Result<Table, ExperimentError> {
    let grid = ledger_grid(&[LedgerKind::Public, LedgerKind::Private]);
    let results = sweep(&grid, seeds, |p, s| run_ledger_point(config, p, s))?;
    let mut table = Table::new(
        "bc-delay",
        &[
            "preset", "seed", "ledger", "S_B_bits", "T_wait_s", "lambda_tps", "mean_Tc_s", "p_fork_emp",
            "mean_Tqueue_s", "mean_Tmine_s", "mean_Tprop_s", "n_tx",
        ],
    );
    for (i, seed, m) in results {
        let p = &grid[i];
        let (q, mine, prop) = m.mean_attempt_components();
        table.push(vec![
            "bc-delay".into(),
            seed.into(),
            p.kind.as_str().into(),
            p.block_size_bits.into(),
            p.max_wait_s.into(),
            p.lambda_tps.into(),
            m.mean_confirmation_delay().into(),
            m.fork_rate().into(),
            q.into(),
            mine.into(),
            prop.into(),
            m.transactions_confirmed().into(),
        ]);
    }
    Ok(table)
}

pub fn bc_overhead_table(config: &SimConfig, seeds: &[u64]) -> Result<Table, ExperimentError> {
    let grid = ledger_grid(&[LedgerKind::Public]);
    let results = sweep(&grid, seeds, |p, s| run_ledger_point(config, p, s))?;
    let mut table = Table::new(
        "bc-overhead",
        &[
            "preset", "seed", "S_B_bits", "T_wait_s", "lambda_tps", "overhead_ratio", "fork_free_overhead",
            "p_fork_emp", "n_blocks", "mean_tx_per_block", "header_bits", "payload_bits", "confirmed_payload_bits",
        ],
    );
    let header = config.public_ledger.header_bits;
    for (i, seed, m) in results {
        let p = &grid[i];
        let k = p.block_size_bits / config.tx_bits;
        let attempts = m.attempt_queue_delays.len() as f64;
        table.push(vec![
            "bc-overhead".into(),
            seed.into(),
            p.block_size_bits.into(),
            p.max_wait_s.into(),
            p.lambda_tps.into(),
            overhead_ratio(&m)?.into(),
            fork_free_overhead(header, k, config.tx_bits).into(),
            m.fork_rate().into(),
            m.blocks_mined().into(),
            (attempts / m.blocks_mined().max(1) as f64).into(),
            m.header_bits_sent.into(),
            m.payload_bits_sent.into(),
            m.confirmed_payload_bits.into(),
        ]);
    }
    Ok(table)
}

/// One market scenario point of the sharing presets.
#[derive(Debug, Clone, PartialEq)]
pub struct SharingPoint {
    pub label: String,
    pub config: SimConfig,
    pub mode: SharingMode,
}

pub fn sharing_random_points(config: &SimConfig) -> Vec<SharingPoint> {
    let mut points = Vec::new();
    for &m in &OPERATOR_SWEEP {
        for profile in ProfileKind::ALL {
            for mode in MODES {
                let mut c = config.clone();
                c.market.operators = m;
                c.market.ownership = Ownership::RandomCells;
                c.users.profile = match profile {
                    ProfileKind::Low => ProfileMix::Low,
                    ProfileKind::Average => ProfileMix::Average,
                    ProfileKind::High => ProfileMix::High,
                };
                points.push(SharingPoint { label: profile.as_str().into(), config: c, mode });
            }
        }
    }
    points
}

pub fn ratio_label(r: &[f64]) -> String {
    r.iter().map(|x| format_float(*x)).collect::<Vec<_>>().join(":")
}

pub fn mno_mvno_points(config: &SimConfig) -> Vec<SharingPoint> {
    let mut points = Vec::new();
    for ratios in OWNERSHIP_RATIOS {
        for mode in MODES {
            let mut c = config.clone();
            c.market.operators = 2;
            c.market.ownership = Ownership::Ratios;
            c.market.ratios = ratios.to_vec();
            points.push(SharingPoint { label: ratio_label(&ratios), config: c, mode });
        }
    }
    points
}

pub fn run_sharing_points(points: &[SharingPoint], seeds: &[u64]) -> Result<Vec<(usize, u64, MetricsSeries)>, ExperimentError> {
    sweep(points, seeds, |p, s| Ok(run_scenario_in(&p.config, s, p.mode)?))
}

fn sharing_row(preset: &str, seed: u64, p: &SharingPoint, r: &MetricsSeries) -> Vec<Field> {
    vec![
        preset.into(),
        seed.into(),
        p.config.market.operators.into(),
        p.label.clone().into(),
        p.mode.as_str().into(),
        r.mean_capacity_bps().into(),
        r.mean_acceptance().into(),
        r.mean_ap_load().into(),
        r.mean_served_users().into(),
        r.counters.awards.into(),
        r.counters.rejected.into(),
        r.counters.ran_requests.into(),
        r.counters.leases.into(),
        r.public.mean_confirmation_delay().into(),
        r.private.mean_confirmation_delay().into(),
    ]
}

const SHARING_COLUMNS: [&str; 15] = [
    "preset", "seed", "operators", "scenario", "mode", "mean_capacity_bps", "mean_acceptance", "mean_ap_load",
    "mean_served_users", "awards", "rejected", "ran_requests", "leases", "public_mean_Tc_s", "private_mean_Tc_s",
];

const SUMMARY_COLUMNS: [&str; 12] = [
    "preset", "operators", "scenario", "mode", "replications", "capacity_mean_bps", "capacity_ci95_bps",
    "acceptance_mean", "acceptance_ci95", "ap_load_mean", "ap_load_ci95", "rejected_mean",
];

fn summary_table(name: &str, preset: &str, points: &[SharingPoint], runs: &[(usize, u64, MetricsSeries)]) -> Table {
    let mut table = Table::new(name, &SUMMARY_COLUMNS);
    for (i, p) in points.iter().enumerate() {
        let series: Vec<MetricsSeries> = runs.iter().filter(|r| r.0 == i).map(|r| r.2.clone()).collect();
        let Some(s) = aggregate_metrics(&series) else { continue };
        table.push(vec![
            preset.into(),
            p.config.market.operators.into(),
            p.label.clone().into(),
            p.mode.as_str().into(),
            s.capacity_bps.n.into(),
            s.capacity_bps.mean.into(),
            s.capacity_bps.ci_half_width.into(),
            s.acceptance.mean.into(),
            s.acceptance.ci_half_width.into(),
            s.ap_load.mean.into(),
            s.ap_load.ci_half_width.into(),
            s.rejected.mean.into(),
        ]);
    }
    table
}

pub fn sharing_random_tables(config: &SimConfig, seeds: &[u64]) -> Result<Vec<Table>, ExperimentError> {
    let points = sharing_random_points(config);
    let runs = run_sharing_points(&points, seeds)?;
    let mut rows = Table::new("sharing-random", &SHARING_COLUMNS);
    for (i, seed, r) in &runs {
        rows.push(sharing_row("sharing-random", *seed, &points[*i], r));
    }
    let summary = summary_table("sharing-random-summary", "sharing-random", &points, &runs);
    Ok(vec![rows, summary])
}

pub fn mno_mvno_tables(config: &SimConfig, seeds: &[u64]) -> Result<Vec<Table>, ExperimentError> {
    let points = mno_mvno_points(config);
    let runs = run_sharing_points(&points, seeds)?;
    let mut series = Table::new(
        "mno-mvno-timeseries",
        &[
            "preset", "seed", "ratios", "mode", "t_s", "aggregate_capacity_bps", "mean_acceptance", "mean_ap_load",
            "served_users", "leased_units", "rejected_total",
        ],
    );
    let mut summary = Table::new("mno-mvno-summary", &SHARING_COLUMNS);
    for (i, seed, r) in &runs {
        let p = &points[*i];
        for rec in &r.records {
            series.push(vec![
                "mno-mvno".into(),
                (*seed).into(),
                p.label.clone().into(),
                p.mode.as_str().into(),
                rec.t.into(),
                rec.aggregate_capacity_bps.into(),
                rec.mean_acceptance.into(),
                rec.mean_ap_load.into(),
                rec.served_users.into(),
                rec.leased_units.into(),
                rec.counters.rejected.into(),
            ]);
        }
        summary.push(sharing_row("mno-mvno", *seed, p, r));
    }
    Ok(vec![series, summary])
}

/// All tables of `preset`, without touching the filesystem.
pub fn build_tables(preset: Preset, config: &SimConfig, seed: u64, replications: usize) -> Result<Vec<Table>, ExperimentError> {
    let seeds = replication_seeds(seed, replications);
    match preset {
        Preset::BcDelay => Ok(vec![bc_delay_table(config, &seeds)?]),
        Preset::BcOverhead => Ok(vec![bc_overhead_table(config, &seeds)?]),
        Preset::SharingRandom => sharing_random_tables(config, &seeds),
        Preset::MnoMvno => mno_mvno_tables(config, &seeds),
    }
}

/// Runs `preset` and writes its CSV files into `out_dir`, returning their
/// paths.
pub fn run_experiment(
    preset: Preset,
    config: &SimConfig,
    out_dir: &Path,
    seed: u64,
    replications: usize,
) -> Result<Vec<PathBuf>, ExperimentError> {
    config.validate().map_err(SimError::from)?;
    if replications == 0 {
        return Err(SimError::Config(crate::sim::ConfigError::Invalid(vec!["replications: must be >= 1".into()])).into());
    }
    let tables = build_tables(preset, config, seed, replications)?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| ExperimentError::Io { path: out_dir.display().to_string(), message: e.to_string() })?;
    let comment = format!(
        "preset={} seed={} replications={} config_sha256={}",
        preset.name(),
        seed,
        replications,
        config.hash_hex()
    );
    let mut written = Vec::new();
    for t in &tables {
        let path = out_dir.join(t.file_name());
        emit_csv(t, &path, &comment)?;
        written.push(path);
    }
    Ok(written)
}
