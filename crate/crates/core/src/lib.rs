//! Quickest paths on planar transportation networks.
//!
//! A network is a set of straight directed roads, each with a speed factor
//! `alpha` in `(0, 1]`: riding a length `L` costs `alpha·L`, walking anywhere
//! in the plane costs its Euclidean length. [`exact::quickest_path`] computes
//! exact transportation distances; [`engine`] preprocesses a network for fast
//! `(1 + ε)`-approximate queries, either towards a fixed destination or
//! between two arbitrary points.

pub mod candidates;
pub mod engine;
pub mod error;
pub mod exact;
pub mod gen;
pub mod geometry;
pub mod network;
pub mod oracle;
pub mod wspd;

pub use engine::{
    build_fixed, build_two_point, CandidateKind, FixedDestIndex, QueryAnswer, QueryIndex,
    TwoPointIndex, TwoPointMode,
};
pub use error::{Error, Result};
pub use exact::{build_graph, quickest_path, Leg, LegKind, PathGraph, QuickestPath};
pub use geometry::{DirectionAngle, Point, EPS_GEOM};
pub use network::{parse_network, validate, Network, Road, RoadRecord, Violation};
pub use oracle::oracle_cost;
