use crate::candidates::{check_eps, RoadBuckets, Side};
use crate::error::Result;
use crate::exact::{
    build_graph, edges_to_legs, push_leg, sssp, Leg, LegKind, PathGraph, QuickestPath,
    ShortestPaths,
};
use crate::geometry::Point;
use crate::network::Network;

use super::{Attachments, CandidateKind, EndpointSite, QueryAnswer};

/// Queries from arbitrary sources to one destination fixed at build time.
#[derive(Debug, Clone)]
pub struct FixedDestIndex {
    pub(crate) network: Network,
    pub(crate) target: Point,
    pub(crate) eps: f64,
    pub(crate) graph: PathGraph,
    /// Cost from every graph vertex to the target.
    pub(crate) costs: Vec<f64>,
    pub(crate) tree: ShortestPaths,
    pub(crate) attach: Attachments,
}

pub fn build_fixed(net: &Network, t: Point, eps: f64) -> Result<FixedDestIndex> {
    check_eps(eps)?;
    let graph = build_graph(net, None, Some(t));
    let tree = sssp(&graph, graph.target().unwrap(), true);
    FixedDestIndex::assemble(net.clone(), t, eps, graph, tree.dist.clone(), tree)
}

impl FixedDestIndex {
    pub(crate) fn assemble(
        network: Network,
        target: Point,
        eps: f64,
        graph: PathGraph,
        costs: Vec<f64>,
        tree: ShortestPaths,
    ) -> Result<Self> {
        let attach = Attachments::new(&network, &graph, eps)?;
        Ok(FixedDestIndex {
            network,
            target,
            eps,
            graph,
            costs,
            tree,
            attach,
        })
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn target(&self) -> Point {
        self.target
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn graph(&self) -> &PathGraph {
        &self.graph
    }

    /// Cost to the target from every graph vertex, indexed by vertex id.
    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn buckets(&self) -> &RoadBuckets {
        &self.attach.buckets
    }

    pub fn endpoint_sites(&self) -> &[EndpointSite] {
        &self.attach.sites
    }

    /// Approximate quickest path from `s` to the fixed target: the best of
    /// the direct walk, every type 1 endpoint, and every type 2 road entry.
    pub fn query(&self, s: Point) -> QueryAnswer {
        let g = &self.graph;
        let mut best = QueryAnswer::direct(s, self.target, false);
        let mut prefix = vec![Leg {
            kind: LegKind::Walk,
            from: s,
            to: self.target,
            cost: best.cost,
        }];
        let mut entry = None;

        for site in self.attach.d1_sites(s) {
            for &v in &site.vertices {
                let c = s.dist(site.location) + self.costs[v];
                if c < best.cost {
                    best.cost = c;
                    best.source_kind = CandidateKind::Type1;
                    entry = Some(v);
                    prefix = vec![Leg {
                        kind: LegKind::Walk,
                        from: s,
                        to: site.location,
                        cost: s.dist(site.location),
                    }];
                }
            }
        }
        for tup in self.attach.buckets.d2(g, s, Side::Source) {
            let alpha = self.network.roads()[tup.road].alpha;
            let next = g.location(tup.next_vertex);
            let ride = alpha * tup.hit.dist(next);
            let c = s.dist(tup.hit) + ride + self.costs[tup.next_vertex];
            if c < best.cost {
                best.cost = c;
                best.source_kind = CandidateKind::Type2;
                entry = Some(tup.next_vertex);
                prefix = vec![
                    Leg {
                        kind: LegKind::Walk,
                        from: s,
                        to: tup.hit,
                        cost: s.dist(tup.hit),
                    },
                    Leg {
                        kind: LegKind::Ride { road: tup.road },
                        from: tup.hit,
                        to: next,
                        cost: ride,
                    },
                ];
            }
        }

        let mut legs = Vec::new();
        for leg in prefix {
            push_leg(&mut legs, leg);
        }
        if let Some(v) = entry {
            best.via = Some((v, g.target().unwrap()));
            let edges = self
                .tree
                .path_edges(g, v)
                .expect("every vertex reaches the target");
            edges_to_legs(g, &edges, &mut legs);
        }
        best.witness = Some(QuickestPath {
            cost: best.cost,
            legs,
        });
        best
    }
}
