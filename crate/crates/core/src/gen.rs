//! Seeded random networks and query points for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Point, SegmentGeom};
use crate::network::Network;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkSpec {
    pub roads: usize,
    /// Coordinates are drawn from `[0, extent]²`.
    pub extent: f64,
    pub min_length: f64,
    pub max_length: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
}

impl Default for NetworkSpec {
    fn default() -> Self {
        NetworkSpec {
            roads: 8,
            extent: 40.0,
            min_length: 2.0,
            max_length: 20.0,
            alpha_min: 0.2,
            alpha_max: 1.0,
        }
    }
}

impl NetworkSpec {
    pub fn with_roads(roads: usize) -> Self {
        NetworkSpec {
            roads,
            ..Self::default()
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point(rng: &mut impl Rng, extent: f64) -> Point {
    Point::new(
        rng.random_range(0.0..=extent),
        rng.random_range(0.0..=extent),
    )
}

/// Draws roads one at a time, rejecting any whose closed segment touches an
/// earlier road. Gives up on a road after a bounded number of attempts, so
/// crowded specs can yield fewer roads than requested.
pub fn random_network(rng: &mut impl Rng, spec: &NetworkSpec) -> Network {
    let mut roads: Vec<(Point, Point, f64)> = Vec::with_capacity(spec.roads);
    'outer: for _ in 0..spec.roads {
        for _ in 0..200 {
            let u = random_point(rng, spec.extent);
            let len = rng.random_range(spec.min_length..=spec.max_length);
            let dir = rng.random_range(0.0..std::f64::consts::TAU);
            let v = u + Point::new(dir.cos(), dir.sin()) * len;
            if !(0.0..=spec.extent).contains(&v.x) || !(0.0..=spec.extent).contains(&v.y) {
                continue;
            }
            let seg = SegmentGeom::new(u, v);
            if roads
                .iter()
                .any(|&(a, b, _)| touches(&seg, &SegmentGeom::new(a, b)))
            {
                continue;
            }
            let alpha = rng.random_range(spec.alpha_min..=spec.alpha_max);
            roads.push((u, v, alpha));
            continue 'outer;
        }
    }
    Network::new(roads).expect("generated roads are disjoint")
}

/// Closed segments intersect or come within a small clearance.
fn touches(a: &SegmentGeom, b: &SegmentGeom) -> bool {
    const CLEARANCE: f64 = 0.05;
    segment_distance(a, b) < CLEARANCE
}

fn segment_distance(a: &SegmentGeom, b: &SegmentGeom) -> f64 {
    let d = |p: Point, s: &SegmentGeom| p.dist(s.point_at(s.param_of(p)));
    let crossing = {
        let (r, s) = (a.b - a.a, b.b - b.a);
        let den = r.cross(s);
        if den == 0.0 {
            false
        } else {
            let t = (b.a - a.a).cross(s) / den;
            let u = (b.a - a.a).cross(r) / den;
            (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)
        }
    };
    if crossing {
        return 0.0;
    }
    d(a.a, b).min(d(a.b, b)).min(d(b.a, a)).min(d(b.b, a))
}
