//! Fair split tree and well-separated pair decomposition of a planar point set.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{Point, EPS_GEOM};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: Point,
    pub max: Point,
}

impl BoundingBox {
    fn of(points: &[Point], idx: &[usize]) -> Self {
        let mut min = points[idx[0]];
        let mut max = min;
        for &i in &idx[1..] {
            let p = points[i];
            min = Point::new(min.x.min(p.x), min.y.min(p.y));
            max = Point::new(max.x.max(p.x), max.y.max(p.y));
        }
        BoundingBox { min, max }
    }

    pub fn center(&self) -> Point {
        self.min.lerp(self.max, 0.5)
    }

    /// Radius of the circle through the box corners.
    pub fn radius(&self) -> f64 {
        self.min.dist(self.max) / 2.0
    }
}

#[derive(Debug, Clone)]
pub struct SplitNode {
    pub bbox: BoundingBox,
    /// Lowest point index in the subtree.
    pub representative: usize,
    pub parent: Option<NodeId>,
    pub children: Option<(NodeId, NodeId)>,
    pub len: usize,
}

/// Fair split tree: every internal node halves its bounding box across the
/// longer side (x on ties); leaves hold one point.
#[derive(Debug, Clone)]
pub struct SplitTree {
    points: Vec<Point>,
    nodes: Vec<SplitNode>,
    leaf_of: Vec<NodeId>,
}

impl SplitTree {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn nodes(&self) -> &[SplitNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &SplitNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn leaf(&self, point: usize) -> NodeId {
        self.leaf_of[point]
    }

    /// Point indices under `node`, ascending.
    pub fn subset(&self, node: NodeId) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes[node].len);
        let mut stack = vec![node];
        while let Some(n) = stack.pop() {
            match self.nodes[n].children {
                Some((l, r)) => stack.extend([l, r]),
                None => out.push(self.nodes[n].representative),
            }
        }
        out.sort_unstable();
        out
    }

    /// Whether `point` lies in the subtree of `node`.
    pub fn contains(&self, node: NodeId, point: usize) -> bool {
        let mut cur = Some(self.leaf(point));
        while let Some(n) = cur {
            if n == node {
                return true;
            }
            cur = self.nodes[n].parent;
        }
        false
    }

    fn ancestors(&self, mut node: NodeId) -> Vec<NodeId> {
        let mut out = vec![node];
        while let Some(p) = self.nodes[node].parent {
            out.push(p);
            node = p;
        }
        out
    }
}

/// Collapses points closer than `EPS_GEOM`; returns the distinct points (in
/// order of first occurrence) and, for every input point, its distinct index.
pub fn dedup_points(points: &[Point]) -> (Vec<Point>, Vec<usize>) {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].x.total_cmp(&points[b].x).then(a.cmp(&b)));
    let mut canon: Vec<usize> = (0..points.len()).collect();
    for (pos, &i) in order.iter().enumerate() {
        for &j in order[..pos].iter().rev() {
            if points[i].x - points[j].x > EPS_GEOM {
                break;
            }
            if points[i].approx_eq(points[j]) && canon[j] < canon[i] {
                canon[i] = canon[j];
            }
        }
    }
    let mut distinct = Vec::new();
    let mut slot = vec![usize::MAX; points.len()];
    let mut map = vec![0; points.len()];
    for i in 0..points.len() {
        let c = canon[i];
        if slot[c] == usize::MAX {
            slot[c] = distinct.len();
            distinct.push(points[c]);
        }
        map[i] = slot[c];
    }
    (distinct, map)
}

/// Builds the fair split tree. Points are expected to be distinct (see
/// [`dedup_points`]).
pub fn build_split_tree(points: &[Point]) -> Result<SplitTree> {
    if points.is_empty() {
        return Err(Error::Parameter(
            "split tree needs at least one point".into(),
        ));
    }
    let mut tree = SplitTree {
        points: points.to_vec(),
        nodes: Vec::new(),
        leaf_of: vec![0; points.len()],
    };
    let all: Vec<usize> = (0..points.len()).collect();
    build_node(&mut tree, all, None);
    Ok(tree)
}

fn build_node(tree: &mut SplitTree, idx: Vec<usize>, parent: Option<NodeId>) -> NodeId {
    let bbox = BoundingBox::of(&tree.points, &idx);
    let id = tree.nodes.len();
    tree.nodes.push(SplitNode {
        bbox,
        representative: *idx.iter().min().unwrap(),
        parent,
        children: None,
        len: idx.len(),
    });
    if idx.len() == 1 {
        tree.leaf_of[idx[0]] = id;
        return id;
    }
    let along_x = bbox.max.x - bbox.min.x >= bbox.max.y - bbox.min.y;
    let coord = |p: Point| if along_x { p.x } else { p.y };
    let mid = coord(bbox.center());
    let (left, right): (Vec<usize>, Vec<usize>) =
        idx.iter().partition(|&&i| coord(tree.points[i]) < mid);
    assert!(
        !left.is_empty() && !right.is_empty(),
        "split of coincident points"
    );
    let l = build_node(tree, left, Some(id));
    let r = build_node(tree, right, Some(id));
    tree.nodes[id].children = Some((l, r));
    id
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellSeparatedPair {
    pub a: NodeId,
    pub b: NodeId,
    pub rep_a: usize,
    pub rep_b: usize,
}

#[derive(Debug, Clone)]
pub struct PairList {
    pub separation: f64,
    pairs: Vec<WellSeparatedPair>,
    by_nodes: HashMap<(NodeId, NodeId), usize>,
}

impl PairList {
    pub fn pairs(&self) -> &[WellSeparatedPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Both nodes fit in circles of radius `r` (the larger half-diagonal) around
/// their box centres, and those circles are at least `s·r` apart.
pub fn well_separated(a: &BoundingBox, b: &BoundingBox, s: f64) -> bool {
    let r = a.radius().max(b.radius());
    a.center().dist(b.center()) - 2.0 * r >= s * r
}

pub fn wspd_pairs(tree: &SplitTree, s: f64) -> Result<PairList> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Parameter(format!(
            "separation must be positive, got {s}"
        )));
    }
    let mut pairs = Vec::new();
    let mut work = Vec::new();
    for node in &tree.nodes {
        if let Some((l, r)) = node.children {
            work.push((l, r));
        }
    }
    // process in node order so the output is deterministic
    work.reverse();
    while let Some((v, w)) = work.pop() {
        let (nv, nw) = (&tree.nodes[v], &tree.nodes[w]);
        if well_separated(&nv.bbox, &nw.bbox, s) {
            pairs.push(WellSeparatedPair {
                a: v,
                b: w,
                rep_a: nv.representative,
                rep_b: nw.representative,
            });
            continue;
        }
        let split_v = match (nv.children, nw.children) {
            (None, None) => unreachable!("distinct single points are always well separated"),
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(_), Some(_)) => nv.bbox.radius() >= nw.bbox.radius(),
        };
        if split_v {
            let (l, r) = nv.children.unwrap();
            work.push((r, w));
            work.push((l, w));
        } else {
            let (l, r) = nw.children.unwrap();
            work.push((v, r));
            work.push((v, l));
        }
    }
    let by_nodes = pairs
        .iter()
        .enumerate()
        .map(|(i, p)| ((p.a.min(p.b), p.a.max(p.b)), i))
        .collect();
    Ok(PairList {
        separation: s,
        pairs,
        by_nodes,
    })
}

/// Id of the unique pair whose sides separate points `p` and `q`.
pub fn find_pair(pairs: &PairList, tree: &SplitTree, p: usize, q: usize) -> Result<usize> {
    if p == q {
        return Err(Error::Parameter(
            "find_pair needs two distinct points".into(),
        ));
    }
    let up = tree.ancestors(tree.leaf(p));
    let uq = tree.ancestors(tree.leaf(q));
    for &a in &up {
        for &b in &uq {
            if let Some(&id) = pairs.by_nodes.get(&(a.min(b), a.max(b))) {
                return Ok(id);
            }
        }
    }
    unreachable!("pair decomposition covers every point pair")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn single_point_tree() {
        let t = build_split_tree(&[p(1.0, 1.0)]).unwrap();
        assert_eq!(t.nodes().len(), 1);
        assert!(t.node(0).children.is_none());
        assert!(build_split_tree(&[]).is_err());
    }

    #[test]
    fn two_points() {
        let t = build_split_tree(&[p(0.0, 0.0), p(1.0, 0.0)]).unwrap();
        assert_eq!(t.nodes().len(), 3);
        let pl = wspd_pairs(&t, 10.0).unwrap();
        assert_eq!(pl.len(), 1);
        assert_eq!(find_pair(&pl, &t, 0, 1).unwrap(), 0);
        assert_eq!(find_pair(&pl, &t, 1, 0).unwrap(), 0);
        assert!(find_pair(&pl, &t, 1, 1).is_err());
    }

    #[test]
    fn square_splits_along_x_first() {
        let t = build_split_tree(&[p(0.0, 0.0), p(0.0, 1.0), p(1.0, 0.0), p(1.0, 1.0)]).unwrap();
        let (l, r) = t.node(0).children.unwrap();
        assert_eq!(t.subset(l), vec![0, 1]);
        assert_eq!(t.subset(r), vec![2, 3]);
    }

    #[test]
    fn collinear_triple_gives_three_singletons() {
        let pts = [p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)];
        let t = build_split_tree(&pts).unwrap();
        let pl = wspd_pairs(&t, 100.0).unwrap();
        assert_eq!(pl.len(), 3);
        for pair in pl.pairs() {
            assert_eq!(t.node(pair.a).len, 1);
            assert_eq!(t.node(pair.b).len, 1);
        }
    }

    #[test]
    fn representatives_are_lowest_index() {
        let pts = [p(5.0, 5.0), p(0.0, 0.0), p(9.0, 1.0), p(0.5, 0.2)];
        let t = build_split_tree(&pts).unwrap();
        for (id, n) in t.nodes().iter().enumerate() {
            assert_eq!(n.representative, t.subset(id)[0]);
        }
    }

    #[test]
    fn dedup_merges_close_points() {
        let (d, map) = dedup_points(&[p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1e-12), p(1.0, 0.0)]);
        assert_eq!(d, vec![p(0.0, 0.0), p(1.0, 0.0)]);
        assert_eq!(map, vec![0, 1, 0, 1]);
    }
}
