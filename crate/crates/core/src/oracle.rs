//! Brute-force reference costs: sample every road densely, connect all
//! samples by walking, and run a dense Dijkstra.
//!
//! Deliberately naive (`O((kn)²)` per query) and independent of the
//! projection graph, so it can serve as ground truth in tests.

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::network::{Network, RoadRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub samples_per_road: usize,
}

impl OracleConfig {
    pub fn new(samples_per_road: usize) -> Result<Self> {
        if samples_per_road < 2 {
            return Err(Error::Parameter(format!(
                "need at least 2 samples per road, got {samples_per_road}"
            )));
        }
        Ok(OracleConfig { samples_per_road })
    }

    /// The next sample count whose samples contain the current ones.
    pub fn refined(self) -> Self {
        OracleConfig {
            samples_per_road: 2 * self.samples_per_road - 1,
        }
    }
}

/// Upper bound on the transportation distance from `s` to `t` over a
/// validated network with `k` equally spaced samples per road.
pub fn oracle_cost(net: &Network, s: Point, t: Point, k: usize) -> Result<f64> {
    oracle_cost_records(&net.records(), s, t, k)
}

/// As [`oracle_cost`], over raw road records: an undirected record is ridden
/// in both directions without being split into two roads.
pub fn oracle_cost_records(roads: &[RoadRecord], s: Point, t: Point, k: usize) -> Result<f64> {
    let k = OracleConfig::new(k)?.samples_per_road;
    let mut nodes = vec![s, t];
    // adjacency of ride edges only; walking is implicit between all nodes
    let mut rides: Vec<Vec<(usize, f64)>> = vec![Vec::new(), Vec::new()];
    for road in roads {
        let base = nodes.len();
        for i in 0..k {
            nodes.push(road.u.lerp(road.v, i as f64 / (k - 1) as f64));
            rides.push(Vec::new());
        }
        for i in 0..k - 1 {
            let (a, b) = (base + i, base + i + 1);
            let w = road.alpha * nodes[a].dist(nodes[b]);
            rides[a].push((b, w));
            if !road.directed {
                rides[b].push((a, w));
            }
        }
    }

    let n = nodes.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[0] = 0.0;
    loop {
        let mut u = usize::MAX;
        for v in 0..n {
            if !done[v] && (u == usize::MAX || dist[v] < dist[u]) {
                u = v;
            }
        }
        if u == 1 || u == usize::MAX {
            break;
        }
        done[u] = true;
        let d = dist[u];
        for v in 0..n {
            if !done[v] {
                let nd = d + nodes[u].dist(nodes[v]);
                if nd < dist[v] {
                    dist[v] = nd;
                }
            }
        }
        for &(v, w) in &rides[u] {
            if d + w < dist[v] {
                dist[v] = d + w;
            }
        }
    }
    Ok(dist[1])
}
