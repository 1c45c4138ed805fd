//! Exact quickest paths: the projection graph over a network plus optional
//! source and target points, and Dijkstra over it.
//!
//! Vertices are the free points, every road endpoint, and the points where an
//! optimal walk can join (entry projection) or leave (exit projection) a road
//! interior. Walk edges connect exactly the point pairs that can appear as a
//! straight leg of some optimal path; ride edges chain the vertices of each
//! road from start to end.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::geometry::{project_entry, project_exit, Point, EPS_GEOM};
use crate::network::Network;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    Source,
    Target,
    /// Arc-length `param` from the road's start point.
    OnRoad {
        road: usize,
        param: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphVertex {
    pub id: VertexId,
    pub location: Point,
    pub placement: Placement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Walk,
    Ride { road: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphEdge {
    pub from: VertexId,
    pub to: VertexId,
    pub weight: f64,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone)]
pub struct PathGraph {
    vertices: Vec<GraphVertex>,
    edges: Vec<GraphEdge>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    road_vertices: Vec<Vec<VertexId>>,
    source: Option<VertexId>,
    target: Option<VertexId>,
}

impl PathGraph {
    pub fn vertices(&self) -> &[GraphVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn vertex(&self, id: VertexId) -> &GraphVertex {
        &self.vertices[id]
    }

    pub fn location(&self, id: VertexId) -> Point {
        self.vertices[id].location
    }

    pub fn edge(&self, id: EdgeId) -> &GraphEdge {
        &self.edges[id]
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v]
    }

    /// Vertices on `road`, sorted by parameter from start to end point.
    pub fn road_vertices(&self, road: usize) -> &[VertexId] {
        &self.road_vertices[road]
    }

    pub fn road_param(&self, v: VertexId) -> Option<f64> {
        match self.vertices[v].placement {
            Placement::OnRoad { param, .. } => Some(param),
            _ => None,
        }
    }

    /// Start-point vertex of `road`.
    pub fn road_start(&self, road: usize) -> VertexId {
        self.road_vertices[road][0]
    }

    /// End-point vertex of `road`.
    pub fn road_end(&self, road: usize) -> VertexId {
        *self.road_vertices[road].last().unwrap()
    }

    pub fn source(&self) -> Option<VertexId> {
        self.source
    }

    pub fn target(&self) -> Option<VertexId> {
        self.target
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn add_vertex(&mut self, location: Point, placement: Placement) -> VertexId {
        let id = self.vertices.len();
        self.vertices.push(GraphVertex {
            id,
            location,
            placement,
        });
        self.out_edges.push(Vec::new());
        self.in_edges.push(Vec::new());
        id
    }

    fn add_edge(&mut self, from: VertexId, to: VertexId, weight: f64, kind: EdgeKind) {
        if from == to {
            return;
        }
        let id = self.edges.len();
        self.edges.push(GraphEdge {
            from,
            to,
            weight,
            kind,
        });
        self.out_edges[from].push(id);
        self.in_edges[to].push(id);
    }

    fn add_walk(&mut self, from: VertexId, to: VertexId) {
        let w = self.location(from).dist(self.location(to));
        self.add_edge(from, to, w, EdgeKind::Walk);
    }
}

#[derive(Clone, Copy)]
enum Link {
    /// walk from this vertex onto the road
    From(VertexId),
    /// walk from the road to this vertex
    To(VertexId),
}

struct Request {
    road: usize,
    param: f64,
    link: Link,
}

/// Builds the projection graph of `net`, optionally including a source and a
/// target point.
///
/// Besides the entry/exit projections of `s`, `t` and every road endpoint,
/// the graph walks `s` to every start point, every endpoint to `t` and to
/// every other road's start point, and `s` directly to `t`.
pub fn build_graph(net: &Network, s: Option<Point>, t: Option<Point>) -> PathGraph {
    let roads = net.roads();
    let mut g = PathGraph {
        vertices: Vec::new(),
        edges: Vec::new(),
        out_edges: Vec::new(),
        in_edges: Vec::new(),
        road_vertices: vec![Vec::new(); roads.len()],
        source: None,
        target: None,
    };
    g.source = s.map(|p| g.add_vertex(p, Placement::Source));
    g.target = t.map(|p| g.add_vertex(p, Placement::Target));

    let mut starts = Vec::with_capacity(roads.len());
    let mut ends = Vec::with_capacity(roads.len());
    for r in roads {
        starts.push(g.add_vertex(
            r.u,
            Placement::OnRoad {
                road: r.id,
                param: 0.0,
            },
        ));
        ends.push(g.add_vertex(
            r.v,
            Placement::OnRoad {
                road: r.id,
                param: r.length(),
            },
        ));
    }

    let mut requests = Vec::new();
    let mut request = |road: usize, p: Option<Point>, link: Link| {
        if let Some(q) = p {
            let len = roads[road].length();
            let param = roads[road].segment().param_of(q).clamp(0.0, len);
            requests.push(Request { road, param, link });
        }
    };
    for (i, road) in roads.iter().enumerate() {
        if let (Some(sv), Some(sp)) = (g.source, s) {
            request(i, project_entry(sp, road), Link::From(sv));
        }
        if let (Some(tv), Some(tp)) = (g.target, t) {
            request(i, project_exit(tp, road), Link::To(tv));
        }
    }
    for (i, road) in roads.iter().enumerate() {
        for (j, other) in roads.iter().enumerate() {
            if i == j {
                continue;
            }
            for (p, pv) in [(other.u, starts[j]), (other.v, ends[j])] {
                request(i, project_entry(p, road), Link::From(pv));
                request(i, project_exit(p, road), Link::To(pv));
            }
        }
    }

    // Resolve requests to vertices, merging road points closer than EPS_GEOM.
    let mut by_road: Vec<Vec<usize>> = vec![Vec::new(); roads.len()];
    for (k, req) in requests.iter().enumerate() {
        by_road[req.road].push(k);
    }
    let mut resolved = vec![0; requests.len()];
    for (i, road) in roads.iter().enumerate() {
        let len = road.length();
        let list = &mut by_road[i];
        list.sort_by(|&a, &b| {
            requests[a]
                .param
                .total_cmp(&requests[b].param)
                .then(a.cmp(&b))
        });
        let mut seq = vec![starts[i]];
        let mut last_param = 0.0;
        for &k in list.iter() {
            let param = requests[k].param;
            resolved[k] = if param <= EPS_GEOM {
                starts[i]
            } else if param >= len - EPS_GEOM {
                ends[i]
            } else if seq.len() > 1 && param - last_param <= EPS_GEOM {
                *seq.last().unwrap()
            } else {
                let loc = road.segment().point_at(param);
                let v = g.add_vertex(loc, Placement::OnRoad { road: i, param });
                seq.push(v);
                last_param = param;
                v
            };
        }
        seq.push(ends[i]);
        g.road_vertices[i] = seq;
    }

    if let (Some(sv), Some(tv)) = (g.source, g.target) {
        g.add_walk(sv, tv);
    }
    for i in 0..roads.len() {
        if let Some(sv) = g.source {
            g.add_walk(sv, starts[i]);
        }
        if let Some(tv) = g.target {
            g.add_walk(ends[i], tv);
            g.add_walk(starts[i], tv);
        }
    }
    for i in 0..roads.len() {
        for j in 0..roads.len() {
            if i != j {
                g.add_walk(ends[i], starts[j]);
                g.add_walk(starts[i], starts[j]);
            }
        }
    }
    for (k, req) in requests.iter().enumerate() {
        match req.link {
            Link::From(p) => g.add_walk(p, resolved[k]),
            Link::To(p) => g.add_walk(resolved[k], p),
        }
    }
    for (i, road) in roads.iter().enumerate() {
        let seq = g.road_vertices[i].clone();
        for w in seq.windows(2) {
            let (a, b) = (w[0], w[1]);
            let along = g.road_param(b).unwrap() - g.road_param(a).unwrap();
            g.add_edge(a, b, road.alpha * along, EdgeKind::Ride { road: i });
        }
    }
    g
}

#[derive(Copy, Clone, PartialEq)]
struct HeapEntry {
    dist: f64,
    vertex: VertexId,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, vertex)
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest paths over a [`PathGraph`].
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    pub source: VertexId,
    /// `f64::INFINITY` for unreachable vertices.
    pub dist: Vec<f64>,
    /// Last edge on the tree path (first edge toward the source when reversed).
    pub pred: Vec<Option<EdgeId>>,
    pub reversed: bool,
}

impl ShortestPaths {
    /// Edges of the tree path between the source and `v`, in travel order.
    pub fn path_edges(&self, g: &PathGraph, v: VertexId) -> Option<Vec<EdgeId>> {
        if !self.dist[v].is_finite() {
            return None;
        }
        let mut out = Vec::new();
        let mut cur = v;
        while let Some(e) = self.pred[cur] {
            out.push(e);
            cur = if self.reversed {
                g.edge(e).to
            } else {
                g.edge(e).from
            };
        }
        if !self.reversed {
            out.reverse();
        }
        Some(out)
    }
}

/// Dijkstra from `source`. With `reversed`, every edge is traversed backwards,
/// so `dist[v]` is the cost of travelling from `v` to `source`.
pub fn sssp(g: &PathGraph, source: VertexId, reversed: bool) -> ShortestPaths {
    let n = g.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry {
        dist: 0.0,
        vertex: source,
    });
    while let Some(HeapEntry { dist: d, vertex }) = heap.pop() {
        if done[vertex] {
            continue;
        }
        done[vertex] = true;
        let incident = if reversed {
            g.in_edges(vertex)
        } else {
            g.out_edges(vertex)
        };
        for &e in incident {
            let edge = g.edge(e);
            let next = if reversed { edge.from } else { edge.to };
            let nd = d + edge.weight;
            if nd < dist[next] {
                dist[next] = nd;
                pred[next] = Some(e);
                heap.push(HeapEntry {
                    dist: nd,
                    vertex: next,
                });
            }
        }
    }
    ShortestPaths {
        source,
        dist,
        pred,
        reversed,
    }
}

/// Dijkstra over the graph augmented with a walk edge between every ordered
/// vertex pair. `O(V²)`; distances only.
pub fn sssp_walk_closure(g: &PathGraph, source: VertexId, reversed: bool) -> Vec<f64> {
    let n = g.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[source] = 0.0;
    for _ in 0..n {
        let mut best: Option<VertexId> = None;
        for v in 0..n {
            if !done[v] && dist[v].is_finite() && best.is_none_or(|b| dist[v] < dist[b]) {
                best = Some(v);
            }
        }
        let Some(u) = best else { break };
        done[u] = true;
        let d = dist[u];
        let here = g.location(u);
        for (v, vert) in g.vertices.iter().enumerate() {
            if !done[v] {
                let nd = d + here.dist(vert.location);
                if nd < dist[v] {
                    dist[v] = nd;
                }
            }
        }
        let incident = if reversed {
            g.in_edges(u)
        } else {
            g.out_edges(u)
        };
        for &e in incident {
            let edge = g.edge(e);
            let next = if reversed { edge.from } else { edge.to };
            let nd = d + edge.weight;
            if nd < dist[next] {
                dist[next] = nd;
            }
        }
    }
    dist
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegKind {
    Walk,
    Ride { road: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leg {
    pub kind: LegKind,
    pub from: Point,
    pub to: Point,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuickestPath {
    pub cost: f64,
    pub legs: Vec<Leg>,
}

impl QuickestPath {
    pub fn leg_cost_sum(&self) -> f64 {
        self.legs.iter().map(|l| l.cost).sum()
    }

    /// Start of the first leg followed by the end of every leg.
    pub fn polyline(&self) -> Vec<(Point, LegKind)> {
        let mut out = Vec::with_capacity(self.legs.len() + 1);
        if let Some(first) = self.legs.first() {
            out.push((first.from, first.kind));
        }
        out.extend(self.legs.iter().map(|l| (l.to, l.kind)));
        out
    }
}

/// Appends `leg`, merging consecutive rides on one road and dropping
/// zero-length walks.
pub(crate) fn push_leg(legs: &mut Vec<Leg>, leg: Leg) {
    if leg.kind == LegKind::Walk && leg.from.dist(leg.to) <= EPS_GEOM {
        return;
    }
    if let Some(last) = legs.last_mut() {
        if let (LegKind::Ride { road: a }, LegKind::Ride { road: b }) = (last.kind, leg.kind) {
            if a == b {
                last.to = leg.to;
                last.cost += leg.cost;
                return;
            }
        }
    }
    legs.push(leg);
}

pub(crate) fn edges_to_legs(g: &PathGraph, edges: &[EdgeId], legs: &mut Vec<Leg>) {
    for &e in edges {
        let edge = g.edge(e);
        let kind = match edge.kind {
            EdgeKind::Walk => LegKind::Walk,
            EdgeKind::Ride { road } => LegKind::Ride { road },
        };
        push_leg(
            legs,
            Leg {
                kind,
                from: g.location(edge.from),
                to: g.location(edge.to),
                cost: edge.weight,
            },
        );
    }
}

/// Minimum transportation-distance path from `s` to `t`.
pub fn quickest_path(net: &Network, s: Point, t: Point) -> QuickestPath {
    let g = build_graph(net, Some(s), Some(t));
    let (sv, tv) = (g.source.unwrap(), g.target.unwrap());
    let sp = sssp(&g, sv, false);
    // the direct s→t edge makes t always reachable
    let edges = sp.path_edges(&g, tv).expect("target reachable");
    let mut legs = Vec::new();
    edges_to_legs(&g, &edges, &mut legs);
    QuickestPath {
        cost: sp.dist[tv],
        legs,
    }
}
