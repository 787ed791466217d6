//! Geographic multicast ("geocast") tree construction for heterogeneous
//! smart-grid networks: a wireless backbone with an unstable power-line
//! (PLC) edge.
//!
//! The crate is organised bottom-up:
//!
//! * [`topology`] – geometry, geographic link weights, topology generation
//!   and the wireless-router placement solver.
//! * [`steiner`] – shortest paths, the KMB approximation and its geographic
//!   MKMB variant, an exact Steiner solver and the integer-program emitter.
//! * [`gcbt`] – geographic core-based shared trees.
//! * [`multihop`] – the in-area flooding protocol and the Hybrid / Multiple
//!   dual-tree planners.
//! * [`metrics`] – evaluation criteria over trees and plans.
//! * [`experiment`] – seeded scenario generation, parameter sweeps, CSV
//!   output and the brute-force oracle suite.

pub mod error;
pub mod experiment;
pub mod format;
pub mod gcbt;
pub mod metrics;
pub mod multihop;
pub mod steiner;
pub mod topology;

pub use error::{Error, Result};
pub use steiner::{EdgeWeights, MulticastTree, SteinerInstance, WeightKind};
pub use topology::{
    DestinationArea, Link, LinkId, LinkMedium, LinkStatus, Node, NodeId, NodeKind, Position,
    Topology, TopologyParams,
};
