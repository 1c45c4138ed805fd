//! Transportation network model, validation and the `qpn v1` text format.
//!
//! ```text
//! qpn v1
//! # comment
//! road <x1> <y1> <x2> <y2> <alpha> <directed|undirected>
//! ```
//!
//! Undirected roads are expanded into two directed roads; the reversed twin
//! is placed right after the original and ids follow the expanded order.

use std::fmt::{self, Write as _};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{interiors_intersect, Point, SegmentGeom, EPS_GEOM};

pub const NETWORK_HEADER: &str = "qpn v1";

/// A directed road from `u` to `v`; riding costs `alpha` per unit length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Road {
    pub id: usize,
    pub u: Point,
    pub v: Point,
    pub alpha: f64,
}

impl Road {
    pub fn new(id: usize, u: Point, v: Point, alpha: f64) -> Self {
        Road { id, u, v, alpha }
    }

    pub fn segment(&self) -> SegmentGeom {
        SegmentGeom::new(self.u, self.v)
    }

    pub fn length(&self) -> f64 {
        self.u.dist(self.v)
    }

    /// Orientation of `u → v` in `[0, 2π)`.
    pub fn orientation(&self) -> f64 {
        crate::geometry::DirectionAngle::of_vector(self.v - self.u).radians()
    }

    fn is_reverse_of(&self, other: &Road) -> bool {
        self.u.approx_eq(other.v) && self.v.approx_eq(other.u)
    }
}

/// One road line of a network file, before expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoadRecord {
    pub u: Point,
    pub v: Point,
    pub alpha: f64,
    pub directed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite { road: usize },
    Degenerate { road: usize },
    WeightRange { road: usize, alpha: f64 },
    Intersection { first: usize, second: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite { road } => write!(f, "road {road} has a non-finite coordinate"),
            Violation::Degenerate { road } => write!(f, "road {road} has zero length"),
            Violation::WeightRange { road, alpha } => {
                write!(f, "road {road} has weight {alpha} outside (0, 1]")
            }
            Violation::Intersection { first, second } => {
                write!(f, "roads {first} and {second} intersect")
            }
        }
    }
}

/// A validated set of directed roads with pairwise disjoint interiors.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    roads: Vec<Road>,
    alpha_min: f64,
    alpha_max: f64,
}

impl Network {
    pub fn empty() -> Self {
        Network {
            roads: Vec::new(),
            alpha_min: 1.0,
            alpha_max: 1.0,
        }
    }

    /// Validates and wraps directed roads given as `(u, v, alpha)`; ids follow
    /// the slice order.
    pub fn new(roads: impl IntoIterator<Item = (Point, Point, f64)>) -> Result<Self> {
        let roads: Vec<Road> = roads
            .into_iter()
            .enumerate()
            .map(|(id, (u, v, alpha))| Road::new(id, u, v, alpha))
            .collect();
        Self::from_roads(roads)
    }

    pub fn from_records(records: &[RoadRecord]) -> Result<Self> {
        let mut triples = Vec::with_capacity(records.len() * 2);
        for r in records {
            triples.push((r.u, r.v, r.alpha));
            if !r.directed {
                triples.push((r.v, r.u, r.alpha));
            }
        }
        Self::new(triples)
    }

    fn from_roads(roads: Vec<Road>) -> Result<Self> {
        let violations = validate_roads(&roads);
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        let alpha_min = roads.iter().map(|r| r.alpha).fold(f64::INFINITY, f64::min);
        let alpha_max = roads.iter().map(|r| r.alpha).fold(0.0, f64::max);
        if roads.is_empty() {
            return Ok(Self::empty());
        }
        Ok(Network {
            roads,
            alpha_min,
            alpha_max,
        })
    }

    /// Returns a new network with `road` appended (its id is reassigned).
    pub fn with_road(&self, u: Point, v: Point, alpha: f64) -> Result<Self> {
        let mut roads = self.roads.clone();
        roads.push(Road::new(roads.len(), u, v, alpha));
        Self::from_roads(roads)
    }

    pub fn roads(&self) -> &[Road] {
        &self.roads
    }

    pub fn len(&self) -> usize {
        self.roads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roads.is_empty()
    }

    /// Smallest road weight; 1 for the empty network.
    pub fn alpha_min(&self) -> f64 {
        self.alpha_min
    }

    /// Largest road weight; 1 for the empty network.
    pub fn alpha_max(&self) -> f64 {
        self.alpha_max
    }

    /// All road start and end points, in road order (`u0, v0, u1, v1, ...`).
    pub fn endpoints(&self) -> Vec<Point> {
        self.roads.iter().flat_map(|r| [r.u, r.v]).collect()
    }

    pub fn records(&self) -> Vec<RoadRecord> {
        self.roads
            .iter()
            .map(|r| RoadRecord {
                u: r.u,
                v: r.v,
                alpha: r.alpha,
                directed: true,
            })
            .collect()
    }

    /// Canonical text form: every road written as `directed`, reals with 17
    /// significant digits.
    pub fn serialize(&self) -> String {
        let mut out = String::from(NETWORK_HEADER);
        out.push('\n');
        for r in &self.roads {
            writeln!(out, "{}", road_line(r)).unwrap();
        }
        out
    }

    /// SHA-256 of the canonical serialization, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.serialize().as_bytes()))
    }
}

pub(crate) fn road_line(r: &Road) -> String {
    format!(
        "road {} {} {} {} {} directed",
        fmt_real(r.u.x),
        fmt_real(r.u.y),
        fmt_real(r.v.x),
        fmt_real(r.v.y),
        fmt_real(r.alpha)
    )
}

/// 17 significant digits; parses back to the identical `f64`.
pub fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub(crate) fn parse_real(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>().map_err(|_| Error::Parse {
        line,
        message: format!("invalid number `{tok}`"),
    })
}

/// Lists every violated network invariant; empty means valid.
pub fn validate(net: &Network) -> Vec<Violation> {
    validate_roads(net.roads())
}

fn validate_roads(roads: &[Road]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut geometric = Vec::with_capacity(roads.len());
    for r in roads {
        if !(r.u.is_finite() && r.v.is_finite()) {
            out.push(Violation::NonFinite { road: r.id });
            continue;
        }
        if r.length() <= EPS_GEOM {
            out.push(Violation::Degenerate { road: r.id });
            continue;
        }
        if !(r.alpha > 0.0 && r.alpha <= 1.0) {
            out.push(Violation::WeightRange {
                road: r.id,
                alpha: r.alpha,
            });
        }
        geometric.push(r);
    }
    for (i, a) in geometric.iter().enumerate() {
        for b in &geometric[i + 1..] {
            // a two-way street is stored as two opposite directed roads
            if a.is_reverse_of(b) {
                continue;
            }
            if interiors_intersect(&a.segment(), &b.segment()) {
                out.push(Violation::Intersection {
                    first: a.id,
                    second: b.id,
                });
            }
        }
    }
    out
}

/// Parses the raw road records of a network file without validating them.
pub fn parse_records(text: &str) -> Result<Vec<RoadRecord>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.find(|(_, l)| !l.is_empty()) {
        Some((_, NETWORK_HEADER)) => {}
        Some((line, other)) => {
            return Err(Error::Parse {
                line,
                message: format!("expected `{NETWORK_HEADER}`, found `{other}`"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "empty input".into(),
            })
        }
    }
    let mut records = Vec::new();
    for (line, l) in lines {
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks[0] != "road" {
            return Err(Error::Parse {
                line,
                message: format!("unknown record `{}`", toks[0]),
            });
        }
        if toks.len() != 7 {
            return Err(Error::Parse {
                line,
                message: format!("road line needs 6 fields, found {}", toks.len() - 1),
            });
        }
        let nums = toks[1..6]
            .iter()
            .map(|t| parse_real(t, line))
            .collect::<Result<Vec<_>>>()?;
        let directed = match toks[6] {
            "directed" => true,
            "undirected" => false,
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected directed|undirected, found `{other}`"),
                })
            }
        };
        records.push(RoadRecord {
            u: Point::new(nums[0], nums[1]),
            v: Point::new(nums[2], nums[3]),
            alpha: nums[4],
            directed,
        });
    }
    Ok(records)
}

pub fn parse_network(text: &str) -> Result<Network> {
    Network::from_records(&parse_records(text)?)
}
