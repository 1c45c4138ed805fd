//! Planar primitives used by every other module.
//!
//! All predicates work in `f64` with a fixed absolute tolerance [`EPS_GEOM`],
//! which assumes coordinates of magnitude roughly `1..1e4`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Error;
use crate::network::Road;

/// Absolute tolerance for on-segment, coincidence and intersection tests.
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3d cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn approx_eq(self, other: Point) -> bool {
        self.dist(other) <= EPS_GEOM
    }

    /// Unit vector in the same direction. Undefined for the zero vector.
    pub fn unit(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// A direction in the plane, normalized to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DirectionAngle(f64);

impl DirectionAngle {
    pub fn new(radians: f64) -> Self {
        let mut r = radians.rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU for tiny negative inputs
        if r >= TAU {
            r = 0.0;
        }
        DirectionAngle(r)
    }

    pub fn from_degrees(deg: f64) -> Self {
        Self::new(deg.to_radians())
    }

    /// Direction of the vector `v`; the zero vector maps to 0.
    pub fn of_vector(v: Point) -> Self {
        Self::new(v.y.atan2(v.x))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn unit_vector(self) -> Point {
        Point::new(self.0.cos(), self.0.sin())
    }

    pub fn rotated(self, by: f64) -> Self {
        Self::new(self.0 + by)
    }

    pub fn opposite(self) -> Self {
        self.rotated(PI)
    }
}

/// A closed straight segment from `a` to `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentGeom {
    pub a: Point,
    pub b: Point,
}

impl SegmentGeom {
    pub fn new(a: Point, b: Point) -> Self {
        SegmentGeom { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.length() <= EPS_GEOM
    }

    /// Signed distance of `p` from the supporting line, positive on the left.
    pub fn side_distance(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        d.cross(p - self.a) / d.norm()
    }

    /// Arc-length parameter of the orthogonal projection of `p` onto the
    /// supporting line, measured from `a`.
    pub fn param_of(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        d.dot(p - self.a) / d.norm()
    }

    pub fn point_at(&self, param: f64) -> Point {
        let len = self.length();
        if param <= 0.0 {
            self.a
        } else if param >= len {
            self.b
        } else {
            self.a + (self.b - self.a) * (param / len)
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        let t = self.param_of(p);
        self.side_distance(p).abs() <= EPS_GEOM && t >= -EPS_GEOM && t <= self.length() + EPS_GEOM
    }
}

/// The walking angle that minimizes the cost of reaching a road of weight
/// `alpha`: the segment meets the road at `arccos(alpha)`.
pub fn optimal_entry_angle(alpha: f64) -> Result<f64, Error> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Parameter(format!(
            "road weight {alpha} outside (0, 1]"
        )));
    }
    Ok(alpha.acos())
}

#[derive(Clone, Copy)]
enum ProjectionSide {
    Entry,
    Exit,
}

fn project(p: Point, road: &Road, side: ProjectionSide) -> Option<Point> {
    let seg = road.segment();
    let len = seg.length();
    let h = seg.side_distance(p).abs();
    let foot = seg.param_of(p);
    if h <= EPS_GEOM {
        return (foot >= -EPS_GEOM && foot <= len + EPS_GEOM).then_some(p);
    }
    if road.alpha >= 1.0 {
        return None;
    }
    // h * cot(arccos(alpha))
    let shift = h * road.alpha / (1.0 - road.alpha * road.alpha).sqrt();
    let t = match side {
        ProjectionSide::Entry => foot + shift,
        ProjectionSide::Exit => foot - shift,
    };
    if t < -EPS_GEOM || t > len + EPS_GEOM {
        return None;
    }
    Some(seg.point_at(t.clamp(0.0, len)))
}

/// Point `q` on the road where a walk from `p` should join it: the angle
/// `∠(p, q, u)` equals `arccos(alpha)`.
pub fn project_entry(p: Point, road: &Road) -> Option<Point> {
    project(p, road, ProjectionSide::Entry)
}

/// Point `q` on the road where a rider heading for `p` should leave it: the
/// angle `∠(p, q, v)` equals `arccos(alpha)`.
pub fn project_exit(p: Point, road: &Road) -> Option<Point> {
    project(p, road, ProjectionSide::Exit)
}

/// First point of the closed segment hit by the ray from `origin` in
/// direction `dir`.
pub fn ray_hit(origin: Point, dir: DirectionAngle, seg: &SegmentGeom) -> Option<Point> {
    let d = dir.unit_vector();
    let e = seg.b - seg.a;
    let len = e.norm();
    let w = seg.a - origin;
    let denom = d.cross(e);
    if denom.abs() <= 1e-12 * len {
        // parallel: only a collinear overlap can be hit
        if w.cross(d).abs() > EPS_GEOM {
            return None;
        }
        let ta = w.dot(d);
        let tb = (seg.b - origin).dot(d);
        if ta.max(tb) < -EPS_GEOM {
            return None;
        }
        let t = ta.min(tb).max(0.0);
        return Some(if t == 0.0 { origin } else { origin + d * t });
    }
    let t = w.cross(e) / denom;
    let u = w.cross(d) / denom;
    let u_tol = EPS_GEOM / len;
    if t < -EPS_GEOM || u < -u_tol || u > 1.0 + u_tol {
        return None;
    }
    if t <= 0.0 {
        return Some(origin);
    }
    Some(origin + d * t)
}

/// Whether two segments share more than endpoints: a proper crossing, a
/// collinear overlap, or an endpoint of one touching the other's interior.
pub fn interiors_intersect(a: &SegmentGeom, b: &SegmentGeom) -> bool {
    let la = a.length();
    let lb = b.length();
    let (b1, b2) = (a.side_distance(b.a), a.side_distance(b.b));
    let (a1, a2) = (b.side_distance(a.a), b.side_distance(a.b));

    if b1.abs() <= EPS_GEOM && b2.abs() <= EPS_GEOM {
        let (t1, t2) = (a.param_of(b.a), a.param_of(b.b));
        let lo = t1.min(t2).max(0.0);
        let hi = t1.max(t2).min(la);
        return hi - lo > EPS_GEOM;
    }

    let strictly_opposite =
        |p: f64, q: f64| (p > EPS_GEOM && q < -EPS_GEOM) || (p < -EPS_GEOM && q > EPS_GEOM);
    if strictly_opposite(b1, b2) && strictly_opposite(a1, a2) {
        return true;
    }

    let in_interior = |seg: &SegmentGeom, len: f64, p: Point| {
        let t = seg.param_of(p);
        seg.side_distance(p).abs() <= EPS_GEOM && t > EPS_GEOM && t < len - EPS_GEOM
    };
    in_interior(a, la, b.a)
        || in_interior(a, la, b.b)
        || in_interior(b, lb, a.a)
        || in_interior(b, lb, a.b)
}
