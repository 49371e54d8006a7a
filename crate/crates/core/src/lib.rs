//! Discrete-event simulator of blockchain-enabled RAN sharing.
//!
//! Users buy service from operators through reverse auctions recorded on a
//! public ledger; operators sublease radio resources to each other through
//! auctions on a private ledger. The crate models the radio deployment
//! ([`topology`]), the 802.11 access delay of the public ledger's links
//! ([`dcf`]), both ledgers ([`ledger`]), the auctions ([`market`]), the
//! coupled event loop ([`sim`]) and the figure-style experiment presets
//! ([`experiment`]).
//!
//! Formula code is generic over [`Scalar`] (`f32` or `f64`); the event
//! engine runs on `f64` seconds.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dcf;
pub mod des;
pub mod experiment;
pub mod ids;
pub mod ledger;
pub mod market;
pub mod rng;
pub mod scalar;
pub mod sim;
pub mod topology;

pub use ids::{CellId, OperatorId, UserId};
pub use scalar::Scalar;

pub type RadioParams32 = topology::RadioParams<f32>;
pub type RadioParams64 = topology::RadioParams<f64>;
pub type Topology32 = topology::Topology<f32>;
pub type Topology64 = topology::Topology<f64>;
pub type UserEquipment32 = topology::UserEquipment<f32>;
pub type UserEquipment64 = topology::UserEquipment<f64>;
pub type DcfParams32 = dcf::DcfParams<f32>;
pub type DcfParams64 = dcf::DcfParams<f64>;
pub type DcfSolution32 = dcf::DcfSolution<f32>;
pub type DcfSolution64 = dcf::DcfSolution<f64>;
pub type Bid32 = market::Bid<f32>;
pub type Bid64 = market::Bid<f64>;
