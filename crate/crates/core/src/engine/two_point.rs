use std::collections::BTreeMap;

use crate::candidates::{check_eps, Side};
use crate::error::{Error, Result};
use crate::exact::{build_graph, sssp_walk_closure, PathGraph, VertexId};
use crate::geometry::Point;
use crate::network::Network;
use crate::wspd::{build_split_tree, dedup_points, find_pair, wspd_pairs, PairList, SplitTree};

use super::{Attachments, CandidateKind, QueryAnswer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPointMode {
    ExactApsp,
    Wspd,
}

impl TwoPointMode {
    pub fn name(self) -> &'static str {
        match self {
            TwoPointMode::ExactApsp => "apsp",
            TwoPointMode::Wspd => "wspd",
        }
    }
}

/// Representative-pair distances over a WSPD of the graph's vertex locations.
#[derive(Debug, Clone)]
pub struct WspdTable {
    /// Distinct-location index of every vertex.
    pub location_of: Vec<usize>,
    /// Lowest vertex id at every distinct location.
    pub location_vertex: Vec<VertexId>,
    pub tree: SplitTree,
    pub pairs: PairList,
    /// Per pair: cost `rep_a → rep_b` and `rep_b → rep_a`.
    pub rep_costs: Vec<(f64, f64)>,
    /// Number of distinct shortest-path sources evaluated while building.
    pub sources: usize,
}

#[derive(Debug, Clone)]
pub enum DistanceTable {
    /// Row-major `V × V` cost matrix.
    Apsp {
        n: usize,
        costs: Vec<f64>,
    },
    Wspd(WspdTable),
}

/// Queries between two arbitrary points.
///
/// Distances between graph vertices are taken over the projection graph
/// closed under walking (every vertex pair is also joined by a straight
/// walk), which makes them a true quasi-metric.
#[derive(Debug, Clone)]
pub struct TwoPointIndex {
    pub(crate) network: Network,
    pub(crate) eps: f64,
    pub(crate) tau: Option<f64>,
    pub(crate) graph: PathGraph,
    pub(crate) attach: Attachments,
    pub(crate) table: DistanceTable,
}

/// WSPD separation used for relative error `tau`.
pub fn separation_for(tau: f64, alpha_min: f64) -> f64 {
    8.0 / (tau * alpha_min)
}

pub fn build_two_point(
    net: &Network,
    eps: f64,
    mode: TwoPointMode,
    tau: Option<f64>,
) -> Result<TwoPointIndex> {
    check_eps(eps)?;
    let graph = build_graph(net, None, None);
    let n = graph.vertex_count();
    let table = match mode {
        TwoPointMode::ExactApsp => {
            let mut costs = Vec::with_capacity(n * n);
            for v in 0..n {
                costs.extend(sssp_walk_closure(&graph, v, false));
            }
            DistanceTable::Apsp { n, costs }
        }
        TwoPointMode::Wspd => {
            let tau = match tau {
                Some(t) if t > 0.0 && t < 1.0 => t,
                Some(t) => {
                    return Err(Error::Parameter(format!("tau must lie in (0, 1), got {t}")))
                }
                None => return Err(Error::Parameter("wspd mode needs tau".into())),
            };
            let mut wspd = WspdTable::skeleton(&graph, separation_for(tau, net.alpha_min()))?;
            wspd.fill_costs(&graph);
            DistanceTable::Wspd(wspd)
        }
    };
    TwoPointIndex::assemble(
        net.clone(),
        eps,
        tau.filter(|_| mode == TwoPointMode::Wspd),
        graph,
        table,
    )
}

impl WspdTable {
    /// Tree and pairs without representative costs.
    pub(crate) fn skeleton(graph: &PathGraph, separation: f64) -> Result<Self> {
        let locations: Vec<Point> = graph.vertices().iter().map(|v| v.location).collect();
        let (distinct, location_of) = dedup_points(&locations);
        let mut location_vertex = vec![usize::MAX; distinct.len()];
        for (v, &loc) in location_of.iter().enumerate() {
            location_vertex[loc] = location_vertex[loc].min(v);
        }
        let (tree, pairs) = if distinct.is_empty() {
            // an empty network has no vertices; no pair is ever looked up
            let tree = build_split_tree(&[Point::default()])?;
            let pairs = wspd_pairs(&tree, separation)?;
            (tree, pairs)
        } else {
            let tree = build_split_tree(&distinct)?;
            let pairs = wspd_pairs(&tree, separation)?;
            (tree, pairs)
        };
        let rep_costs = vec![(f64::NAN, f64::NAN); pairs.len()];
        Ok(WspdTable {
            location_of,
            location_vertex,
            tree,
            pairs,
            rep_costs,
            sources: 0,
        })
    }

    /// One closed-walk SSSP per distinct representative.
    fn fill_costs(&mut self, graph: &PathGraph) {
        let mut memo: BTreeMap<VertexId, Vec<f64>> = BTreeMap::new();
        for (k, pair) in self.pairs.pairs().iter().enumerate() {
            let ra = self.location_vertex[pair.rep_a];
            let rb = self.location_vertex[pair.rep_b];
            let fwd = memo
                .entry(ra)
                .or_insert_with(|| sssp_walk_closure(graph, ra, false))[rb];
            let bwd = memo
                .entry(rb)
                .or_insert_with(|| sssp_walk_closure(graph, rb, false))[ra];
            self.rep_costs[k] = (fwd, bwd);
        }
        self.sources = memo.len();
    }

    /// `|p r_A| + M'[r_A, r_B] + |r_B q|` for the pair separating `p` and `q`,
    /// together with the representative vertices used.
    pub fn estimate(
        &self,
        graph: &PathGraph,
        p: VertexId,
        q: VertexId,
    ) -> (f64, Option<(VertexId, VertexId)>) {
        let (lp, lq) = (self.location_of[p], self.location_of[q]);
        if lp == lq {
            return (0.0, None);
        }
        let id = find_pair(&self.pairs, &self.tree, lp, lq).expect("distinct locations");
        let pair = self.pairs.pairs()[id];
        let (fwd, bwd) = self.rep_costs[id];
        let in_a = self.tree.contains(pair.a, lp);
        let (rp, rq, mid) = if in_a {
            (
                self.location_vertex[pair.rep_a],
                self.location_vertex[pair.rep_b],
                fwd,
            )
        } else {
            (
                self.location_vertex[pair.rep_b],
                self.location_vertex[pair.rep_a],
                bwd,
            )
        };
        let cost = graph.location(p).dist(graph.location(rp))
            + mid
            + graph.location(rq).dist(graph.location(q));
        (cost, Some((rp, rq)))
    }
}

struct Attach {
    /// walk and ride cost between the query point and `vertex`
    cost: f64,
    vertex: VertexId,
    kind: CandidateKind,
    /// road and hit parameter for type 2 candidates
    road_hit: Option<(usize, f64, Point)>,
}

impl TwoPointIndex {
    pub(crate) fn assemble(
        network: Network,
        eps: f64,
        tau: Option<f64>,
        graph: PathGraph,
        table: DistanceTable,
    ) -> Result<Self> {
        let attach = Attachments::new(&network, &graph, eps)?;
        Ok(TwoPointIndex {
            network,
            eps,
            tau,
            graph,
            attach,
            table,
        })
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn graph(&self) -> &PathGraph {
        &self.graph
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn tau(&self) -> Option<f64> {
        self.tau
    }

    pub fn mode(&self) -> TwoPointMode {
        match self.table {
            DistanceTable::Apsp { .. } => TwoPointMode::ExactApsp,
            DistanceTable::Wspd(_) => TwoPointMode::Wspd,
        }
    }

    pub fn table(&self) -> &DistanceTable {
        &self.table
    }

    /// Table cost from vertex `p` to vertex `q` (exact, or the WSPD estimate).
    pub fn vertex_cost(&self, p: VertexId, q: VertexId) -> f64 {
        self.vertex_cost_with_reps(p, q).0
    }

    fn vertex_cost_with_reps(
        &self,
        p: VertexId,
        q: VertexId,
    ) -> (f64, Option<(VertexId, VertexId)>) {
        match &self.table {
            DistanceTable::Apsp { n, costs } => (costs[p * n + q], None),
            DistanceTable::Wspd(w) => w.estimate(&self.graph, p, q),
        }
    }

    /// WSPD estimate of the vertex-to-vertex cost; `None` in exact mode.
    pub fn estimate_wspd(&self, p: VertexId, q: VertexId) -> Option<f64> {
        match &self.table {
            DistanceTable::Wspd(w) => Some(w.estimate(&self.graph, p, q).0),
            DistanceTable::Apsp { .. } => None,
        }
    }

    fn attachments(&self, q: Point, side: Side) -> Vec<Attach> {
        let g = &self.graph;
        let mut out = Vec::new();
        for site in self.attach.d1_sites(q) {
            for &vertex in &site.vertices {
                out.push(Attach {
                    cost: q.dist(site.location),
                    vertex,
                    kind: CandidateKind::Type1,
                    road_hit: None,
                });
            }
        }
        for tup in self.attach.buckets.d2(g, q, side) {
            let road = &self.network.roads()[tup.road];
            let ride = road.alpha * tup.hit.dist(g.location(tup.next_vertex));
            let param = road.segment().param_of(tup.hit);
            out.push(Attach {
                cost: q.dist(tup.hit) + ride,
                vertex: tup.next_vertex,
                kind: CandidateKind::Type2,
                road_hit: Some((tup.road, param, tup.hit)),
            });
        }
        out
    }

    /// Approximate quickest path cost from `s` to `t`: the direct walk, every
    /// source/target candidate pair joined through the table, and riding
    /// straight between two type 2 hits on the same road.
    pub fn query(&self, s: Point, t: Point) -> QueryAnswer {
        let mut best = QueryAnswer::direct(s, t, true);
        let from = self.attachments(s, Side::Source);
        let to = self.attachments(t, Side::Destination);
        for a in &from {
            for b in &to {
                if let (Some((ra, pa, ha)), Some((rb, pb, hb))) = (a.road_hit, b.road_hit) {
                    if ra == rb && pb >= pa {
                        let alpha = self.network.roads()[ra].alpha;
                        let c = s.dist(ha) + alpha * ha.dist(hb) + hb.dist(t);
                        if c < best.cost {
                            best.cost = c;
                            best.source_kind = CandidateKind::Type2;
                            best.target_kind = Some(CandidateKind::Type2);
                            best.via = None;
                            best.representatives = None;
                        }
                    }
                }
                let (mid, reps) = self.vertex_cost_with_reps(a.vertex, b.vertex);
                let c = a.cost + mid + b.cost;
                if c < best.cost {
                    best.cost = c;
                    best.source_kind = a.kind;
                    best.target_kind = Some(b.kind);
                    best.via = Some((a.vertex, b.vertex));
                    best.representatives = reps;
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn empty_network() {
        for mode in [TwoPointMode::ExactApsp, TwoPointMode::Wspd] {
            let idx = build_two_point(&Network::empty(), 0.5, mode, Some(0.2)).unwrap();
            assert_eq!(idx.graph().vertex_count(), 0);
            let a = idx.query(p(0.0, 0.0), p(3.0, 4.0));
            assert_eq!(a.cost, 5.0);
            assert_eq!(a.source_kind, CandidateKind::Direct);
        }
    }

    #[test]
    fn parameter_errors() {
        let net = Network::empty();
        assert!(build_two_point(&net, 1.5, TwoPointMode::ExactApsp, None).is_err());
        assert!(build_two_point(&net, 0.5, TwoPointMode::Wspd, None).is_err());
        assert!(build_two_point(&net, 0.5, TwoPointMode::Wspd, Some(1.0)).is_err());
    }

    #[test]
    fn single_road_tables() {
        let net = Network::new([(p(0.0, 0.0), p(10.0, 0.0), 0.6)]).unwrap();
        let apsp = build_two_point(&net, 0.5, TwoPointMode::ExactApsp, None).unwrap();
        let (u, v) = (apsp.graph().road_start(0), apsp.graph().road_end(0));
        assert!((apsp.vertex_cost(u, v) - 6.0).abs() < 1e-12);
        assert!((apsp.vertex_cost(v, u) - 10.0).abs() < 1e-12);

        let w = build_two_point(&net, 0.5, TwoPointMode::Wspd, Some(0.2)).unwrap();
        let DistanceTable::Wspd(table) = w.table() else {
            panic!()
        };
        assert_eq!(table.pairs.len(), 1);
        assert_eq!(w.estimate_wspd(u, v), Some(apsp.vertex_cost(u, v)));
        assert_eq!(w.estimate_wspd(v, u), Some(apsp.vertex_cost(v, u)));
        assert_eq!(w.estimate_wspd(u, u), Some(0.0));
    }

    #[test]
    fn same_road_ride_between_hits() {
        let net = Network::new([(p(-10.0, 0.0), p(30.0, 0.0), 0.6)]).unwrap();
        let idx = build_two_point(&net, 0.2, TwoPointMode::ExactApsp, None).unwrap();
        let a = idx.query(p(0.0, 4.0), p(20.0, 4.0));
        assert!((a.cost - 18.4).abs() < 1e-9, "{}", a.cost);
        assert_eq!(idx.query(p(1.0, 1.0), p(1.0, 1.0)).cost, 0.0);
    }
}
