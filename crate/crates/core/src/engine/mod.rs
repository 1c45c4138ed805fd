//! Preprocessed approximate quickest-path queries.
//!
//! A query point is attached to the precomputed graph through a small set of
//! candidates (cone-selected road endpoints and bucket ray hits); the answer
//! is the cheapest candidate combination, or the direct walk.

mod fixed;
mod persist;
mod two_point;

pub use fixed::{build_fixed, FixedDestIndex};
pub use persist::{QueryIndex, INDEX_HEADER};
pub use two_point::{build_two_point, DistanceTable, TwoPointIndex, TwoPointMode, WspdTable};

use crate::candidates::{build_cone_index, ConeIndex, RoadBuckets};
use crate::error::Result;
use crate::exact::{PathGraph, QuickestPath, VertexId};
use crate::geometry::Point;
use crate::network::Network;
use crate::wspd::dedup_points;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateKind {
    Direct,
    /// Walk to a road endpoint.
    Type1,
    /// Walk onto a road interior found by ray shooting.
    Type2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryAnswer {
    pub cost: f64,
    pub source_kind: CandidateKind,
    /// Only set by two-point queries.
    pub target_kind: Option<CandidateKind>,
    /// Graph vertices joined through the distance table.
    pub via: Option<(VertexId, VertexId)>,
    /// WSPD representatives whose table entry was used.
    pub representatives: Option<(VertexId, VertexId)>,
    pub witness: Option<QuickestPath>,
}

impl QueryAnswer {
    fn direct(s: Point, t: Point, two_point: bool) -> Self {
        QueryAnswer {
            cost: s.dist(t),
            source_kind: CandidateKind::Direct,
            target_kind: two_point.then_some(CandidateKind::Direct),
            via: None,
            representatives: None,
            witness: None,
        }
    }
}

/// A distinct road endpoint location and every graph vertex placed on it.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointSite {
    pub location: Point,
    pub vertices: Vec<VertexId>,
}

/// Everything needed to turn a query point into candidates.
#[derive(Debug, Clone)]
pub(crate) struct Attachments {
    pub sites: Vec<EndpointSite>,
    pub cones: ConeIndex,
    pub buckets: RoadBuckets,
}

impl Attachments {
    pub fn new(net: &Network, graph: &PathGraph, eps: f64) -> Result<Self> {
        let endpoints = net.endpoints();
        let (distinct, map) = dedup_points(&endpoints);
        let mut sites: Vec<EndpointSite> = distinct
            .iter()
            .map(|&location| EndpointSite {
                location,
                vertices: Vec::new(),
            })
            .collect();
        for road in 0..net.len() {
            sites[map[2 * road]].vertices.push(graph.road_start(road));
            sites[map[2 * road + 1]].vertices.push(graph.road_end(road));
        }
        Ok(Attachments {
            cones: build_cone_index(&distinct, eps)?,
            buckets: RoadBuckets::new(net, eps)?,
            sites,
        })
    }

    /// Type 1 candidates of `q` as endpoint sites.
    pub fn d1_sites(&self, q: Point) -> impl Iterator<Item = &EndpointSite> {
        self.cones.d1(q).into_iter().map(move |i| &self.sites[i])
    }
}
