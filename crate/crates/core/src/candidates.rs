//! Attachment candidates for a query point.
//!
//! Type 1 candidates are road endpoints selected by a cone partition around
//! the query point: in every cone, the endpoint whose projection onto the
//! cone bisector is closest to the apex. Type 2 candidates come from shooting
//! two rays per (orientation, weight) bucket of roads, at the angle an optimal
//! walk would meet a road of that bucket, and recording the first road of the
//! bucket that is hit.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::exact::{PathGraph, VertexId};
use crate::geometry::{ray_hit, DirectionAngle, Point, EPS_GEOM};
use crate::network::{Network, Road};

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "eps must lie in (0, 1), got {eps}"
        )))
    }
}

/// Number of cones used for approximation parameter `eps`.
pub fn cone_count(eps: f64) -> usize {
    ((36.0 * PI / eps).ceil() as usize).max(9)
}

#[derive(Debug, Clone)]
pub struct ConeIndex {
    k: usize,
    width: f64,
    points: Vec<Point>,
}

pub fn build_cone_index(endpoints: &[Point], eps: f64) -> Result<ConeIndex> {
    check_eps(eps)?;
    let k = cone_count(eps);
    Ok(ConeIndex {
        k,
        width: TAU / k as f64,
        points: endpoints.to_vec(),
    })
}

impl ConeIndex {
    pub fn cone_count(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Bisector direction of cone `i`.
    pub fn axis(&self, i: usize) -> DirectionAngle {
        DirectionAngle::new((i as f64 + 0.5) * self.width)
    }

    /// Cone `i` spans directions `(i·w, (i+1)·w]`, cone 0 also owns direction
    /// 0; a point on a boundary goes to the lower-indexed cone.
    pub fn cone_of(&self, apex: Point, p: Point) -> usize {
        let a = DirectionAngle::of_vector(p - apex).radians();
        ((a / self.width).ceil() as usize)
            .saturating_sub(1)
            .min(self.k - 1)
    }

    /// Distance from `apex` to the projection of `p` on the bisector of cone `i`.
    pub fn bisector_projection(&self, i: usize, apex: Point, p: Point) -> f64 {
        (p - apex).dot(self.axis(i).unit_vector())
    }

    /// Indices into [`points`](Self::points) of the per-cone minimizers, in
    /// cone order. Equal projections keep the lower point index.
    pub fn d1(&self, q: Point) -> Vec<usize> {
        let mut best: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
        for (idx, &p) in self.points.iter().enumerate() {
            let cone = self.cone_of(q, p);
            let proj = self.bisector_projection(cone, q, p);
            best.entry(cone)
                .and_modify(|cur| {
                    if proj < cur.0 {
                        *cur = (proj, idx);
                    }
                })
                .or_insert((proj, idx));
        }
        best.into_values().map(|(_, idx)| idx).collect()
    }
}

/// Which end of the query a type 2 candidate attaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The query point walks onto the road and rides forward.
    Source,
    /// The query point is reached by riding and then walking off the road.
    Destination,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayDirection {
    Up,
    Down,
}

/// A road reached by a bucket ray, the point hit, and the neighbouring graph
/// vertex along the road (after the hit for sources, before it for
/// destinations).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TupleD2 {
    pub road: usize,
    pub hit: Point,
    pub next_vertex: VertexId,
    pub bucket: (usize, usize),
    pub direction: RayDirection,
}

/// Roads partitioned by orientation (width `θ·α_min`, `θ = ε/18`) and by
/// weight (geometric classes of ratio `1 + ε` starting at `α_min`). Bucket
/// indices are 1-based.
#[derive(Debug, Clone)]
pub struct RoadBuckets {
    eps: f64,
    theta: f64,
    alpha_min: f64,
    orientation_buckets: usize,
    weight_buckets: usize,
    roads: Vec<Road>,
    assignment: Vec<(usize, usize)>,
    members: BTreeMap<(usize, usize), Vec<usize>>,
}

impl RoadBuckets {
    pub fn new(net: &Network, eps: f64) -> Result<Self> {
        check_eps(eps)?;
        let theta = eps / 18.0;
        let alpha_min = net.alpha_min();
        let width = theta * alpha_min;
        let mut m = (TAU / width).ceil() as usize;
        let mut b = ((net.alpha_max() / alpha_min).ln() / (1.0 + eps).ln())
            .ceil()
            .max(1.0) as usize;
        let mut assignment = Vec::with_capacity(net.len());
        let mut members: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for road in net.roads() {
            let i = orientation_bucket(road.orientation(), width);
            let j = weight_bucket(road.alpha, alpha_min, eps);
            // float rounding at the top interval boundary
            m = m.max(i);
            b = b.max(j);
            assignment.push((i, j));
            members.entry((i, j)).or_default().push(road.id);
        }
        Ok(RoadBuckets {
            eps,
            theta,
            alpha_min,
            orientation_buckets: m,
            weight_buckets: b,
            roads: net.roads().to_vec(),
            assignment,
            members,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn orientation_buckets(&self) -> usize {
        self.orientation_buckets
    }

    pub fn weight_buckets(&self) -> usize {
        self.weight_buckets
    }

    pub fn bucket_of(&self, road: usize) -> (usize, usize) {
        self.assignment[road]
    }

    /// Non-empty buckets and their road ids.
    pub fn members(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<usize>)> {
        self.members.iter()
    }

    /// Orientation interval `[(i−1)·θ·α_min, i·θ·α_min)` of bucket `i`.
    pub fn orientation_range(&self, i: usize) -> (f64, f64) {
        let w = self.theta * self.alpha_min;
        ((i - 1) as f64 * w, i as f64 * w)
    }

    /// Weight interval `[α_min(1+ε)^(j−1), α_min(1+ε)^j)` of bucket `j`.
    pub fn weight_range(&self, j: usize) -> (f64, f64) {
        (
            weight_lower(j, self.alpha_min, self.eps),
            weight_lower(j + 1, self.alpha_min, self.eps),
        )
    }

    /// Reference weight of weight bucket `j`: the lower end of its interval.
    pub fn reference_alpha(&self, j: usize) -> f64 {
        weight_lower(j, self.alpha_min, self.eps).min(1.0)
    }

    /// The `(up, down)` ray directions for bucket `(i, j)`.
    ///
    /// For sources the ray leans forward along the reference orientation and
    /// meets it at `arccos(α_ref)` against the backward road direction; `up`
    /// approaches from the right-hand side (below a road pointing along +x).
    /// For destinations the rays are the reversed exit directions.
    pub fn gamma_directions(
        &self,
        i: usize,
        j: usize,
        side: Side,
    ) -> (DirectionAngle, DirectionAngle) {
        let psi = self.orientation_range(i).0;
        let phi = self.reference_alpha(j).acos();
        match side {
            Side::Source => (
                DirectionAngle::new(psi + phi),
                DirectionAngle::new(psi - phi),
            ),
            Side::Destination => (
                DirectionAngle::new(psi + PI - phi),
                DirectionAngle::new(psi + PI + phi),
            ),
        }
    }

    /// First road of `bucket` hit by the ray, with the hit point. Ties on the
    /// ray parameter keep the lower road id.
    pub fn first_hit(
        &self,
        bucket: (usize, usize),
        origin: Point,
        dir: DirectionAngle,
    ) -> Option<(usize, Point)> {
        let roads = self.members.get(&bucket)?;
        let mut best: Option<(f64, usize, Point)> = None;
        for &r in roads {
            if let Some(hit) = ray_hit(origin, dir, &self.roads[r].segment()) {
                let d = origin.dist(hit);
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, r, hit));
                }
            }
        }
        best.map(|(_, r, hit)| (r, hit))
    }

    /// Type 2 candidates of `q` against `graph`, which must be built over the
    /// same network.
    pub fn d2(&self, graph: &PathGraph, q: Point, side: Side) -> Vec<TupleD2> {
        let mut out = Vec::new();
        for &(i, j) in self.members.keys() {
            let (up, down) = self.gamma_directions(i, j, side);
            for (dir, direction) in [(up, RayDirection::Up), (down, RayDirection::Down)] {
                if let Some((road, hit)) = self.first_hit((i, j), q, dir) {
                    let next_vertex = neighbour_vertex(graph, &self.roads[road], hit, side);
                    out.push(TupleD2 {
                        road,
                        hit,
                        next_vertex,
                        bucket: (i, j),
                        direction,
                    });
                }
            }
        }
        out
    }
}

fn orientation_bucket(psi: f64, width: f64) -> usize {
    let mut i = (psi / width).floor() as usize + 1;
    while i > 1 && psi < (i - 1) as f64 * width {
        i -= 1;
    }
    while psi >= i as f64 * width {
        i += 1;
    }
    i
}

fn weight_lower(j: usize, alpha_min: f64, eps: f64) -> f64 {
    alpha_min * (1.0 + eps).powi(j as i32 - 1)
}

fn weight_bucket(alpha: f64, alpha_min: f64, eps: f64) -> usize {
    let mut j = ((alpha / alpha_min).ln() / (1.0 + eps).ln())
        .floor()
        .max(0.0) as usize
        + 1;
    while j > 1 && alpha < weight_lower(j, alpha_min, eps) {
        j -= 1;
    }
    while alpha >= weight_lower(j + 1, alpha_min, eps) {
        j += 1;
    }
    j
}

/// `N(hit, road)`: the nearest graph vertex along the road at or after the
/// hit (source side) or at or before it (destination side). The road's end
/// (start) vertex guarantees one exists.
fn neighbour_vertex(graph: &PathGraph, road: &Road, hit: Point, side: Side) -> VertexId {
    let param = road.segment().param_of(hit);
    let seq = graph.road_vertices(road.id);
    match side {
        Side::Source => *seq
            .iter()
            .find(|&&v| graph.road_param(v).unwrap() >= param - EPS_GEOM)
            .unwrap_or_else(|| seq.last().unwrap()),
        Side::Destination => *seq
            .iter()
            .rev()
            .find(|&&v| graph.road_param(v).unwrap() <= param + EPS_GEOM)
            .unwrap_or(&seq[0]),
    }
}
