use proptest::prelude::*;
use quickpath::candidates::build_cone_index;
use quickpath::gen::{random_network, rng, NetworkSpec};
use quickpath::geometry::{
    project_entry, project_exit, ray_hit, DirectionAngle, Point, SegmentGeom,
};
use quickpath::network::{parse_network, Road};
use quickpath::wspd::{build_split_tree, dedup_points, find_pair, wspd_pairs};

fn point() -> impl Strategy<Value = Point> {
    (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| Point::new(x, y))
}

fn road() -> impl Strategy<Value = Road> {
    (point(), point(), 0.05..0.999f64)
        .prop_filter("non-degenerate", |(u, v, _)| u.dist(*v) > 1.0)
        .prop_map(|(u, v, a)| Road::new(0, u, v, a))
}

fn ride_cost(p: Point, q: Point, road: &Road) -> f64 {
    p.dist(q) + road.alpha * q.dist(road.v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn entry_meets_road_at_arccos_alpha(r in road(), p in point()) {
        let seg = r.segment();
        prop_assume!(seg.side_distance(p).abs() > 1e-3);
        if let Some(q) = project_entry(p, &r) {
            prop_assume!(q.dist(r.u) > 1e-6);
            let back = (r.u - r.v).unit();
            let walk = (p - q).unit();
            prop_assert!((back.dot(walk) - r.alpha).abs() < 1e-9);
        }
    }

    #[test]
    fn entry_is_locally_optimal(r in road(), p in point()) {
        if let Some(q) = project_entry(p, &r) {
            let base = ride_cost(p, q, &r);
            let seg = r.segment();
            let t = seg.param_of(q);
            for dt in [-1e-3, 1e-3] {
                if t + dt >= 0.0 && t + dt <= seg.length() {
                    let moved = seg.point_at(t + dt);
                    prop_assert!(ride_cost(p, moved, &r) >= base - 1e-9);
                }
            }
        }
    }

    #[test]
    fn exit_mirrors_entry_on_reversed_road(r in road(), p in point()) {
        let rev = Road::new(0, r.v, r.u, r.alpha);
        match (project_exit(p, &r), project_entry(p, &rev)) {
            (Some(a), Some(b)) => prop_assert!(a.dist(b) < 1e-9),
            (None, None) => {}
            (a, b) => {
                // only at the very ends of the segment can tolerance differ
                let q = a.or(b).unwrap();
                prop_assert!(q.dist(r.u).min(q.dist(r.v)) < 1e-6);
            }
        }
    }

    #[test]
    fn ray_hits_lie_on_ray_and_segment(o in point(), a in point(), b in point(), ang in 0.0..std::f64::consts::TAU) {
        prop_assume!(a.dist(b) > 1e-3);
        let seg = SegmentGeom::new(a, b);
        let dir = DirectionAngle::new(ang);
        if let Some(h) = ray_hit(o, dir, &seg) {
            let d = dir.unit_vector();
            prop_assert!((h - o).cross(d).abs() < 1e-7);
            prop_assert!((h - o).dot(d) >= -1e-9);
            prop_assert!(seg.side_distance(h).abs() < 1e-7);
            let t = seg.param_of(h);
            prop_assert!(t >= -1e-7 && t <= seg.length() + 1e-7);
        }
    }

    #[test]
    fn cone_minimizers_match_brute_force(pts in prop::collection::vec(point(), 0..40), q in point(), eps in 0.1..0.9f64) {
        let idx = build_cone_index(&pts, eps).unwrap();
        let k = idx.cone_count();
        let width = std::f64::consts::TAU / k as f64;
        let mut best: Vec<Option<(f64, usize)>> = vec![None; k];
        for (i, &p) in pts.iter().enumerate() {
            let mut a = (p.y - q.y).atan2(p.x - q.x);
            if a < 0.0 {
                a += std::f64::consts::TAU;
            }
            let cone = idx.cone_of(q, p);
            // the cone spans (cone·w, (cone+1)·w], up to rounding
            prop_assert!(a >= cone as f64 * width - 1e-9 && a <= (cone + 1) as f64 * width + 1e-9);
            let mid = (cone as f64 + 0.5) * width;
            let proj = (p.x - q.x) * mid.cos() + (p.y - q.y) * mid.sin();
            if best[cone].is_none_or(|(b, _)| proj < b) {
                best[cone] = Some((proj, i));
            }
        }
        let expected: Vec<usize> = best.into_iter().flatten().map(|(_, i)| i).collect();
        prop_assert_eq!(idx.d1(q), expected);
    }

    #[test]
    fn find_pair_matches_linear_search(pts in prop::collection::vec(point(), 2..50), s in 1.0..12.0f64) {
        let (pts, _) = dedup_points(&pts);
        prop_assume!(pts.len() >= 2);
        let tree = build_split_tree(&pts).unwrap();
        let pairs = wspd_pairs(&tree, s).unwrap();
        for x in 0..pts.len() {
            for y in 0..pts.len() {
                if x == y {
                    continue;
                }
                let linear: Vec<usize> = pairs
                    .pairs()
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| {
                        let (a, b) = (tree.subset(p.a), tree.subset(p.b));
                        (a.contains(&x) && b.contains(&y)) || (a.contains(&y) && b.contains(&x))
                    })
                    .map(|(i, _)| i)
                    .collect();
                prop_assert_eq!(linear.len(), 1);
                prop_assert_eq!(find_pair(&pairs, &tree, x, y).unwrap(), linear[0]);
            }
        }
    }

    #[test]
    fn network_text_round_trips(seed in any::<u64>(), n in 0usize..10) {
        let net = random_network(&mut rng(seed), &NetworkSpec::with_roads(n));
        let text = net.serialize();
        let back = parse_network(&text).unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(back.serialize(), text);
        prop_assert_eq!(back.content_hash(), net.content_hash());
    }
}
