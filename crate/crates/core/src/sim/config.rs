//! Simulation configuration: JSON ingestion, defaults and validation.
//!
//! User JSON is merged key by key onto the default tree. Unknown keys and
//! type mismatches are collected with their dotted paths, then the merged
//! tree is deserialized and checked against the model invariants. All
//! problems found are reported together.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::dcf::DcfParams;
use crate::ledger::{ContenderSource, ForkModel, LedgerConfig, LedgerKind, LinkModel, BACKHAUL_LATENCY_S};
use crate::market::{ProfileKind, ServicePolicy};
use crate::topology::{ring_count, thermal_noise_dbm, RadioParams};

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Io { path: String, message: String },
    Syntax { line: usize, column: usize, message: String },
    BadOverride(String),
    Invalid(Vec<String>),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io { path, message } => write!(f, "{path}: {message}"),
            ConfigError::Syntax { line, column, message } => {
                write!(f, "malformed JSON at line {line}, column {column}: {message}")
            }
            ConfigError::BadOverride(s) => write!(f, "bad override `{s}`: expected key.path=value"),
            ConfigError::Invalid(problems) => {
                writeln!(f, "{} configuration problem(s):", problems.len())?;
                for p in problems {
                    writeln!(f, "  - {p}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SharingMode {
    Static,
    Dynamic,
}

impl SharingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SharingMode::Static => "static",
            SharingMode::Dynamic => "dynamic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ownership {
    /// Each cell wholly owned by a uniformly drawn operator.
    RandomCells,
    /// Every cell split by `market.ratios`.
    Ratios,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    RandomUniform,
    Utility,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMix {
    Low,
    Average,
    High,
    /// Each user draws one of the three profiles uniformly.
    Mixed,
}

impl ProfileMix {
    pub fn as_str(self) -> &'static str {
        match self {
            ProfileMix::Low => "low",
            ProfileMix::Average => "average",
            ProfileMix::High => "high",
            ProfileMix::Mixed => "mixed",
        }
    }

    pub fn fixed(self) -> Option<ProfileKind> {
        match self {
            ProfileMix::Low => Some(ProfileKind::Low),
            ProfileMix::Average => Some(ProfileKind::Average),
            ProfileMix::High => Some(ProfileKind::High),
            ProfileMix::Mixed => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interference {
    /// Every other cell transmits on the same band.
    Reuse1,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkKind {
    Dcf,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContenderKind {
    ActiveUploads,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForkKind {
    ExponentialRace,
    None,
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologySection {
    pub num_cells: usize,
    pub radius_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioSection {
    pub tx_power_dbm: f64,
    pub pl0_db: f64,
    pub alpha: f64,
    pub sigma_db: f64,
    pub gamma_db: f64,
    pub bandwidth_hz: f64,
    pub carrier_hz: f64,
    pub noise_figure_db: f64,
    pub interference: Interference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcfSection {
    pub cw_min: u32,
    pub max_backoff_stage: u32,
    pub r_max: u32,
    pub mcs_index: u8,
    pub empty_slot_us: f64,
    pub sifs_us: f64,
    pub difs_us: f64,
    pub rts_us: f64,
    pub cts_us: f64,
    pub ack_us: f64,
    pub phy_header_us: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerSection {
    pub block_size_bits: u64,
    pub max_wait_s: f64,
    pub mining_rate: f64,
    pub n_peers: usize,
    pub header_bits: u64,
    pub link: LinkKind,
    pub link_delay_s: f64,
    pub contenders: ContenderKind,
    pub fixed_contenders: usize,
    pub forks: ForkKind,
    pub fork_probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketSection {
    pub operators: usize,
    pub ownership: Ownership,
    pub ratios: Vec<f64>,
    pub slices_per_cell: usize,
    pub sharing: SharingMode,
    pub policy: PolicyKind,
    pub utility_weights: [f64; 2],
    pub lease_duration_s: f64,
    pub lease_price_range: [f64; 2],
    pub service_duration_s: f64,
    pub acceptance_c: f64,
    /// Multiplies the price exponent; `-1` flips price sensitivity.
    pub xi_sign: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UsersSection {
    pub count: usize,
    pub profile: ProfileMix,
    pub psi_range: [f64; 2],
    pub xi_range: [f64; 2],
}

/// Poisson load for the ledger-only presets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkloadSection {
    pub lambda_tps: f64,
    pub n_transactions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub seed: u64,
    pub replications: usize,
    pub horizon_s: f64,
    pub epoch_s: f64,
    pub tx_bits: u64,
    pub topology: TopologySection,
    pub radio: RadioSection,
    pub dcf: DcfSection,
    pub public_ledger: LedgerSection,
    pub private_ledger: LedgerSection,
    pub market: MarketSection,
    pub users: UsersSection,
    pub workload: WorkloadSection,
}

impl Default for SimConfig {
    fn default() -> Self {
        let radio = RadioParams::<f64>::default();
        let dcf = DcfParams::<f64>::default();
        let public = LedgerSection {
            block_size_bits: 15_000,
            max_wait_s: 5.0,
            mining_rate: 10.0,
            n_peers: 10,
            header_bits: 1_000,
            link: LinkKind::Dcf,
            link_delay_s: BACKHAUL_LATENCY_S,
            contenders: ContenderKind::ActiveUploads,
            fixed_contenders: 10,
            forks: ForkKind::ExponentialRace,
            fork_probability: 0.0,
        };
        let private = LedgerSection { link: LinkKind::Constant, forks: ForkKind::None, ..public.clone() };
        Self {
            seed: 1,
            replications: 1,
            horizon_s: 600.0,
            epoch_s: 1.0,
            tx_bits: 3_000,
            topology: TopologySection { num_cells: 19, radius_m: 10.0 },
            radio: RadioSection {
                tx_power_dbm: radio.tx_power_dbm,
                pl0_db: radio.pl0_db,
                alpha: radio.alpha,
                sigma_db: radio.sigma_db,
                gamma_db: radio.gamma_db,
                bandwidth_hz: radio.bandwidth_hz,
                carrier_hz: radio.carrier_hz,
                noise_figure_db: 7.0,
                interference: Interference::Reuse1,
            },
            dcf: DcfSection {
                cw_min: dcf.cw_min,
                max_backoff_stage: dcf.max_backoff_stage,
                r_max: dcf.r_max,
                mcs_index: dcf.mcs_index,
                empty_slot_us: dcf.empty_slot_us,
                sifs_us: dcf.sifs_us,
                difs_us: dcf.difs_us,
                rts_us: dcf.rts_us,
                cts_us: dcf.cts_us,
                ack_us: dcf.ack_us,
                phy_header_us: dcf.phy_header_us,
            },
            public_ledger: public,
            private_ledger: private,
            market: MarketSection {
                operators: 2,
                ownership: Ownership::RandomCells,
                ratios: vec![0.5, 0.5],
                slices_per_cell: 10,
                sharing: SharingMode::Dynamic,
                policy: PolicyKind::RandomUniform,
                utility_weights: [0.5, 0.5],
                lease_duration_s: 10.0,
                lease_price_range: [0.1, 1.0],
                service_duration_s: 30.0,
                acceptance_c: 5.0,
                xi_sign: 1.0,
            },
            users: UsersSection {
                count: 200,
                profile: ProfileMix::Average,
                psi_range: [0.01, 0.2],
                xi_range: [0.01, 0.2],
            },
            workload: WorkloadSection { lambda_tps: 1.0, n_transactions: 5_000 },
        }
    }
}

fn json_kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(n) if n.is_u64() => "non-negative integer",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

/// Checks that `user` has the shape of `default`.
fn same_shape(default: &Value, user: &Value) -> bool {
    match (default, user) {
        (Value::Number(d), Value::Number(u)) => !d.is_u64() || u.is_u64(),
        (Value::Bool(_), Value::Bool(_)) | (Value::String(_), Value::String(_)) => true,
        (Value::Array(_), Value::Array(_)) | (Value::Object(_), Value::Object(_)) => true,
        _ => false,
    }
}

fn merge(default: &mut Value, user: &Value, path: &str, errors: &mut Vec<String>) {
    if !same_shape(default, user) {
        errors.push(format!("{}: expected {}, found {}", display_path(path), json_kind(default), json_kind(user)));
        return;
    }
    match (default, user) {
        (Value::Object(d), Value::Object(u)) => {
            for (key, uv) in u {
                let p = join(path, key);
                match d.get_mut(key) {
                    Some(dv) => merge(dv, uv, &p, errors),
                    None => errors.push(format!("{p}: unknown key")),
                }
            }
        }
        (Value::Array(d), Value::Array(u)) => {
            if let Some(proto) = d.first() {
                for (i, uv) in u.iter().enumerate() {
                    if !same_shape(proto, uv) {
                        errors.push(format!("{path}[{i}]: expected {}, found {}", json_kind(proto), json_kind(uv)));
                    }
                }
            }
            *d = u.clone();
        }
        (d, u) => *d = u.clone(),
    }
}

fn display_path(path: &str) -> &str {
    if path.is_empty() {
        "<root>"
    } else {
        path
    }
}

/// Sets `dotted.key = value` inside `root`, creating objects as needed.
/// `value` is parsed as JSON, falling back to a plain string.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<(), ConfigError> {
    let (key, raw) = assignment.split_once('=').ok_or_else(|| ConfigError::BadOverride(assignment.to_string()))?;
    let key = key.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(ConfigError::BadOverride(assignment.to_string()));
    }
    let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for part in &parts[..parts.len() - 1] {
        if !node.is_object() {
            *node = Value::Object(Map::new());
        }
        node = node.as_object_mut().expect("object").entry(part.to_string()).or_insert_with(|| Value::Object(Map::new()));
    }
    if !node.is_object() {
        *node = Value::Object(Map::new());
    }
    node.as_object_mut().expect("object").insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

fn syntax_error(e: serde_json::Error) -> ConfigError {
    ConfigError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
}

impl SimConfig {
    /// Parses JSON text, applies `overrides` and validates.
    pub fn from_json_str_with(text: &str, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut user: Value = serde_json::from_str(text).map_err(syntax_error)?;
        for o in overrides {
            apply_override(&mut user, o)?;
        }
        Self::from_value(&user)
    }

    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        Self::from_json_str_with(text, &[])
    }

    pub fn from_value(user: &Value) -> Result<Self, ConfigError> {
        let mut tree = serde_json::to_value(Self::default()).expect("default config serializes");
        let mut errors = Vec::new();
        merge(&mut tree, user, "", &mut errors);
        if !errors.is_empty() {
            return Err(ConfigError::Invalid(errors));
        }
        let config: SimConfig = serde_path_to_error::deserialize(tree).map_err(|e| {
            let path = e.path().to_string();
            ConfigError::Invalid(vec![format!("{path}: {}", e.into_inner())])
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Reads, merges and validates the file at `path`.
    pub fn from_path(path: &Path, overrides: &[String]) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_json_str_with(&text, overrides)
    }

    /// Defaults plus `overrides`.
    pub fn with_overrides(overrides: &[String]) -> Result<Self, ConfigError> {
        Self::from_json_str_with("{}", overrides)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut p = Vec::new();
        let mut check = |ok: bool, msg: &str| {
            if !ok {
                p.push(msg.to_string());
            }
        };
        let pos = |x: f64| x > 0.0 && x.is_finite();
        let in_unit = |r: [f64; 2]| r[0] >= 0.0 && r[0] <= r[1] && r[1] <= 1.0;

        check(self.replications >= 1, "replications: must be >= 1");
        check(self.horizon_s >= 0.0 && self.horizon_s.is_finite(), "horizon_s: must be >= 0");
        check(pos(self.epoch_s), "epoch_s: must be > 0");
        check(self.tx_bits > 0, "tx_bits: must be > 0");
        check(ring_count(self.topology.num_cells).is_some(), "topology.num_cells: must be 1 + 3k(k+1) (1, 7, 19, 37, ...)");
        check(pos(self.topology.radius_m), "topology.radius_m: must be > 0");
        if let Err(e) = self.radio_params().validate() {
            check(false, &format!("radio: {e}"));
        }
        match self.dcf_params() {
            Ok(d) => {
                if let Err(e) = d.validate() {
                    check(false, &format!("dcf: {e}"));
                }
            }
            Err(e) => check(false, &format!("dcf.mcs_index: {e}")),
        }
        for (name, section, kind) in [
            ("public_ledger", &self.public_ledger, LedgerKind::Public),
            ("private_ledger", &self.private_ledger, LedgerKind::Private),
        ] {
            match self.ledger_config(kind) {
                Ok(cfg) => {
                    if let Err(e) = cfg.validate() {
                        check(false, &format!("{name}: {e}"));
                    }
                }
                Err(e) => check(false, &format!("{name}: {e}")),
            }
            check(
                section.block_size_bits >= self.tx_bits,
                &format!("{name}.block_size_bits: must be >= tx_bits ({})", self.tx_bits),
            );
        }
        let m = &self.market;
        check(m.operators >= 1, "market.operators: must be >= 1");
        if m.ownership == Ownership::Ratios {
            check(m.ratios.len() == m.operators, "market.ratios: need one ratio per operator");
            check(
                m.ratios.iter().all(|r| *r >= 0.0) && (m.ratios.iter().sum::<f64>() - 1.0).abs() < 1e-9,
                "market.ratios: must be non-negative and sum to 1",
            );
        }
        check(m.slices_per_cell >= 1, "market.slices_per_cell: must be >= 1");
        check(m.utility_weights.iter().all(|w| (0.0..=1.0).contains(w)), "market.utility_weights: must be in [0, 1]");
        check(pos(m.lease_duration_s), "market.lease_duration_s: must be > 0");
        check(
            m.lease_price_range[0] >= 0.0 && m.lease_price_range[0] <= m.lease_price_range[1] && m.lease_price_range[1].is_finite(),
            "market.lease_price_range: need 0 <= lo <= hi",
        );
        check(pos(m.service_duration_s), "market.service_duration_s: must be > 0");
        check(pos(m.acceptance_c), "market.acceptance_c: must be > 0");
        check(m.xi_sign.is_finite(), "market.xi_sign: must be finite");
        check(self.users.count >= 1, "users.count: must be >= 1");
        check(in_unit(self.users.psi_range), "users.psi_range: need 0 <= lo <= hi <= 1");
        check(in_unit(self.users.xi_range), "users.xi_range: need 0 <= lo <= hi <= 1");
        check(pos(self.workload.lambda_tps), "workload.lambda_tps: must be > 0");
        check(self.workload.n_transactions >= 1, "workload.n_transactions: must be >= 1");
        if p.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(p))
        }
    }

    pub fn radio_params(&self) -> RadioParams<f64> {
        let r = &self.radio;
        RadioParams {
            tx_power_dbm: r.tx_power_dbm,
            pl0_db: r.pl0_db,
            alpha: r.alpha,
            sigma_db: r.sigma_db,
            gamma_db: r.gamma_db,
            bandwidth_hz: r.bandwidth_hz,
            carrier_hz: r.carrier_hz,
            noise_dbm: thermal_noise_dbm(r.bandwidth_hz.max(f64::MIN_POSITIVE), r.noise_figure_db),
        }
    }

    pub fn dcf_params(&self) -> Result<DcfParams<f64>, crate::dcf::DcfError> {
        let d = &self.dcf;
        DcfParams {
            cw_min: d.cw_min,
            max_backoff_stage: d.max_backoff_stage,
            r_max: d.r_max,
            mcs_index: d.mcs_index,
            empty_slot_us: d.empty_slot_us,
            sifs_us: d.sifs_us,
            difs_us: d.difs_us,
            rts_us: d.rts_us,
            cts_us: d.cts_us,
            ack_us: d.ack_us,
            phy_header_us: d.phy_header_us,
            data_rate_bps: 1.0,
        }
        .with_mcs(d.mcs_index)
    }

    pub fn ledger_section(&self, kind: LedgerKind) -> &LedgerSection {
        match kind {
            LedgerKind::Public => &self.public_ledger,
            LedgerKind::Private => &self.private_ledger,
        }
    }

    pub fn ledger_config(&self, kind: LedgerKind) -> Result<LedgerConfig, crate::dcf::DcfError> {
        let s = self.ledger_section(kind);
        let link = match s.link {
            LinkKind::Constant => LinkModel::Constant { delay_s: s.link_delay_s },
            LinkKind::Dcf => LinkModel::Dcf {
                params: self.dcf_params()?,
                contenders: match s.contenders {
                    ContenderKind::ActiveUploads => ContenderSource::ActiveUploads,
                    ContenderKind::Fixed => ContenderSource::Fixed(s.fixed_contenders),
                },
            },
        };
        let forks = match s.forks {
            ForkKind::None => ForkModel::None,
            ForkKind::ExponentialRace => ForkModel::ExponentialRace,
            ForkKind::Fixed => ForkModel::Fixed(s.fork_probability),
        };
        Ok(LedgerConfig {
            kind,
            block_size_bits: s.block_size_bits,
            max_wait_s: s.max_wait_s,
            mining_rate: s.mining_rate,
            link,
            n_peers: s.n_peers,
            header_bits: s.header_bits,
            forks,
        })
    }

    pub fn service_policy(&self) -> ServicePolicy {
        match self.market.policy {
            PolicyKind::RandomUniform => ServicePolicy::RandomUniform,
            PolicyKind::Utility => ServicePolicy::Utility { weights: self.market.utility_weights },
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash_hex(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}
