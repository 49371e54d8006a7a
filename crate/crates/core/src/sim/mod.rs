//! Scenario engine: configuration, the coupled event loop and its metrics.

mod config;
mod metrics;
mod scenario;
mod stats;

pub use config::{
    apply_override, ConfigError, ContenderKind, DcfSection, ForkKind, Interference, LedgerSection, LinkKind,
    MarketSection, Ownership, PolicyKind, ProfileMix, RadioSection, SharingMode, SimConfig, TopologySection,
    UsersSection, WorkloadSection,
};
pub use metrics::{EpochRecord, MarketAction, MarketCounters, MarketLogEntry, MetricsSeries};
pub use scenario::{
    build_world, compare_static_dynamic, demand_epoch, run_scenario, run_scenario_in, PairedRun, SimError, World,
};
pub use stats::{aggregate_metrics, ScenarioSummary, Summary, Z_95};
