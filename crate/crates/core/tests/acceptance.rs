//! Acceptance criteria. Each criterion prints one `PASS`/`FAIL` line; the
//! process exits non-zero if any criterion fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use quickpath::engine::{DistanceTable, QueryIndex};
use quickpath::exact::{build_graph, sssp_walk_closure};
use quickpath::gen::{random_network, random_point, rng, NetworkSpec};
use quickpath::oracle::oracle_cost;
use quickpath::wspd::{build_split_tree, dedup_points, wspd_pairs, SplitTree};
use quickpath::{
    build_fixed, build_two_point, quickest_path, LegKind, Network, Point, QuickestPath,
    TwoPointMode,
};
use rand::Rng;

/// Relative slack on approximation upper bounds.
const REL_SLACK: f64 = 1e-9;
/// Absolute slack for exact-vs-oracle comparisons and for the oracle's
/// refinement monotonicity (finer ride chains sum in a different order).
const ABS_SLACK: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    check(elapsed < limit, || {
        format!("{what} took {elapsed:?}, limit {limit:?}")
    })
}

fn small_spec(roads: usize) -> NetworkSpec {
    NetworkSpec {
        max_length: 16.0,
        ..NetworkSpec::with_roads(roads)
    }
}

fn c1_closed_form() -> Outcome {
    let clock = Instant::now();
    let net = Network::new([(p(-10.0, 0.0), p(30.0, 0.0), 0.6)]).unwrap();
    let (s, t) = (p(0.0, 4.0), p(20.0, 4.0));
    // walk 4/sin φ twice, ride 20 − 2·4·cot φ; sin φ = 0.8, cot φ = 0.75
    let derived = 2.0 * 4.0 / 0.8 + 0.6 * (20.0 - 2.0 * 4.0 * 0.75);
    let exact = quickest_path(&net, s, t).cost;
    let oracle = oracle_cost(&net, s, t, 400).unwrap();
    within(clock.elapsed(), Duration::from_secs(1), "closed form")?;
    check((exact - derived).abs() <= 1e-9, || {
        format!("exact {exact} vs derived {derived}")
    })?;
    check((oracle - derived).abs() <= 0.005 * derived, || {
        format!("oracle {oracle} vs derived {derived}")
    })?;
    Ok(format!(
        "exact {exact:.12}, oracle(400) {oracle:.6}, {:?}",
        clock.elapsed()
    ))
}

fn c2_oracle_agreement() -> Outcome {
    let clock = Instant::now();
    let ks = [50, 99, 197, 393];
    let mut worst_rel: f64 = 0.0;
    let instances = 60;
    for seed in 0..instances {
        let mut r = rng(1000 + seed);
        let n = r.random_range(1..=12);
        let net = random_network(&mut r, &small_spec(n));
        let (s, t) = (random_point(&mut r, 40.0), random_point(&mut r, 40.0));
        let exact = quickest_path(&net, s, t).cost;
        let mut prev = f64::INFINITY;
        for k in ks {
            let o = oracle_cost(&net, s, t, k).unwrap();
            check(exact <= o + ABS_SLACK, || {
                format!("seed {seed}: exact {exact} > oracle({k}) {o}")
            })?;
            check(o <= prev + ABS_SLACK, || {
                format!("seed {seed}: oracle({k}) {o} > previous {prev}")
            })?;
            prev = o;
        }
        let rel = (prev - exact).abs() / exact;
        worst_rel = worst_rel.max(rel);
        check(rel <= 0.01, || {
            format!("seed {seed}: oracle(393) {prev} vs exact {exact}")
        })?;
    }
    within(
        clock.elapsed(),
        Duration::from_secs(300),
        "oracle agreement",
    )?;
    Ok(format!(
        "{instances} networks, worst |oracle(393) − exact|/exact {worst_rel:.2e}, {:?}",
        clock.elapsed()
    ))
}

fn c3_fixed_destination() -> Outcome {
    let clock = Instant::now();
    let mut summary = Vec::new();
    for eps in [0.5, 0.25, 0.1] {
        let mut worst: f64 = 1.0;
        let mut count = 0;
        for seed in 0..50 {
            let mut r = rng(2000 + seed);
            let n = r.random_range(1..=12);
            let net = random_network(&mut r, &small_spec(n));
            let t = random_point(&mut r, 40.0);
            let idx = build_fixed(&net, t, eps).unwrap();
            for _ in 0..10 {
                let s = random_point(&mut r, 40.0);
                let exact = quickest_path(&net, s, t).cost;
                let approx = idx.query(s).cost;
                check(exact <= approx + ABS_SLACK, || {
                    format!("eps {eps} seed {seed}: {approx} below exact {exact}")
                })?;
                check(approx <= (1.0 + eps) * exact * (1.0 + REL_SLACK), || {
                    format!("eps {eps} seed {seed} s {s}: {approx} exceeds (1+ε)·{exact}")
                })?;
                if exact > 0.0 {
                    worst = worst.max(approx / exact);
                }
                count += 1;
            }
        }
        summary.push(format!("ε={eps}: {count} queries, worst ratio {worst:.6}"));
    }
    within(
        clock.elapsed(),
        Duration::from_secs(300),
        "fixed destination",
    )?;
    Ok(format!("{}, {:?}", summary.join("; "), clock.elapsed()))
}

fn c4_two_point() -> Outcome {
    let mut summary = Vec::new();
    for (mode, max_roads, tau_needed) in [
        (TwoPointMode::ExactApsp, 15, false),
        (TwoPointMode::Wspd, 10, true),
    ] {
        for sigma in [0.6, 0.3] {
            let eps = sigma / 3.0;
            let tau = tau_needed.then_some(sigma / 3.0);
            let mut worst: f64 = 1.0;
            let mut count = 0;
            for seed in 0..20 {
                let mut r = rng(3000 + seed);
                let n = r.random_range(1..=max_roads);
                let net = random_network(&mut r, &small_spec(n));
                let idx = build_two_point(&net, eps, mode, tau).unwrap();
                for _ in 0..10 {
                    let (s, t) = (random_point(&mut r, 40.0), random_point(&mut r, 40.0));
                    let exact = quickest_path(&net, s, t).cost;
                    let approx = idx.query(s, t).cost;
                    check(exact <= approx + ABS_SLACK, || {
                        format!(
                            "{} σ {sigma} seed {seed}: {approx} below exact {exact}",
                            mode.name()
                        )
                    })?;
                    check(approx <= (1.0 + sigma) * exact * (1.0 + REL_SLACK), || {
                        format!(
                            "{} σ {sigma} seed {seed} {s}→{t}: {approx} exceeds (1+σ)·{exact}",
                            mode.name()
                        )
                    })?;
                    if exact > 0.0 {
                        worst = worst.max(approx / exact);
                    }
                    count += 1;
                }
            }
            summary.push(format!(
                "{} σ={sigma}: {count} queries, worst {worst:.6}",
                mode.name()
            ));
        }
    }
    Ok(summary.join("; "))
}

fn c5_wspd_sandwich() -> Outcome {
    let tau = 0.2;
    let mut pairs = 0;
    let mut worst: f64 = 1.0;
    let mut sources = Vec::new();
    for seed in 0..20 {
        let mut r = rng(4000 + seed);
        let n = r.random_range(2..=10);
        let net = random_network(&mut r, &small_spec(n));
        let idx = build_two_point(&net, 0.5, TwoPointMode::Wspd, Some(tau)).unwrap();
        if let DistanceTable::Wspd(w) = idx.table() {
            sources.push(format!("{}/{}", w.sources, idx.graph().vertex_count()));
        }
        let v = idx.graph().vertex_count();
        let mut rows: HashMap<usize, Vec<f64>> = HashMap::new();
        for _ in 0..60 {
            let (a, b) = (r.random_range(0..v), r.random_range(0..v));
            let delta = rows
                .entry(a)
                .or_insert_with(|| sssp_walk_closure(idx.graph(), a, false))[b];
            let est = idx.estimate_wspd(a, b).unwrap();
            check(delta <= est + ABS_SLACK, || {
                format!("seed {seed}: estimate {est} below δ_G {delta} ({a}→{b})")
            })?;
            check(
                est <= (1.0 + tau) * delta * (1.0 + REL_SLACK) + ABS_SLACK,
                || format!("seed {seed}: estimate {est} exceeds (1+τ)·{delta} ({a}→{b})"),
            )?;
            if delta > 0.0 {
                worst = worst.max(est / delta);
            }
            pairs += 1;
        }
    }
    Ok(format!(
        "{pairs} pairs over 20 instances, worst ratio {worst:.6}; SSSP sources/vertices per instance: {}",
        sources.join(" ")
    ))
}

fn separation_checks(tree: &SplitTree, s: f64, seed: u64) -> Result<usize, String> {
    let pairs = wspd_pairs(tree, s).unwrap();
    let pts = tree.points();
    let mut r = rng(seed);
    let mut checks = 0;
    for pair in pairs.pairs() {
        let (a, b) = (tree.subset(pair.a), tree.subset(pair.b));
        for _ in 0..4 {
            let pi = pts[a[r.random_range(0..a.len())]];
            let xi = pts[a[r.random_range(0..a.len())]];
            let qi = pts[b[r.random_range(0..b.len())]];
            let yi = pts[b[r.random_range(0..b.len())]];
            let pq = pi.dist(qi);
            check(
                xi.dist(yi) <= (1.0 + 4.0 / s) * pq * (1.0 + REL_SLACK),
                || format!("s {s}: |xy| {} > (1+4/s)|pq| for |pq| {pq}", xi.dist(yi)),
            )?;
            check(pi.dist(xi) <= 2.0 / s * pq * (1.0 + REL_SLACK), || {
                format!("s {s}: |px| {} > (2/s)|pq| for |pq| {pq}", pi.dist(xi))
            })?;
            checks += 1;
        }
    }
    Ok(checks)
}

fn c6_wspd_axioms() -> Outcome {
    let mut covered = 0;
    let mut separation = 0;
    for (i, n) in [2, 3, 10, 50, 100, 200].into_iter().enumerate() {
        let mut r = rng(5000 + i as u64);
        let raw: Vec<Point> = (0..n).map(|_| random_point(&mut r, 100.0)).collect();
        let (pts, _) = dedup_points(&raw);
        let tree = build_split_tree(&pts).unwrap();
        for s in [1.0, 4.0, 10.0] {
            let pairs = wspd_pairs(&tree, s).unwrap();
            let m = pts.len();
            let mut count = vec![0u32; m * m];
            for pair in pairs.pairs() {
                let (a, b) = (tree.subset(pair.a), tree.subset(pair.b));
                for &x in &a {
                    for &y in &b {
                        count[x.min(y) * m + x.max(y)] += 1;
                    }
                }
            }
            for x in 0..m {
                for y in x + 1..m {
                    check(count[x * m + y] == 1, || {
                        format!(
                            "n {n} s {s}: pair ({x},{y}) covered {} times",
                            count[x * m + y]
                        )
                    })?;
                    covered += 1;
                }
            }
            separation += separation_checks(&tree, s, 5100 + i as u64)?;
        }
    }
    Ok(format!(
        "{covered} point pairs covered exactly once, {separation} separation checks"
    ))
}

/// `n` horizontal roads at distinct random heights, each spanning a random
/// interval of length at least 20 in `[0, 40]`, with random direction and
/// weight. Most endpoints project onto most roads, so the projection count
/// is close to its quadratic worst case.
fn stacked_network(r: &mut impl Rng, n: usize) -> Network {
    let mut ys: Vec<f64> = Vec::new();
    while ys.len() < n {
        let y = r.random_range(0.0..40.0);
        if ys.iter().all(|&o| (o - y).abs() > 0.1) {
            ys.push(y);
        }
    }
    let roads = ys.into_iter().map(|y| {
        let a = r.random_range(0.0..20.0);
        let b = r.random_range(a + 20.0..=40.0);
        let alpha = r.random_range(0.2..=1.0);
        if r.random_bool(0.5) {
            (p(a, y), p(b, y), alpha)
        } else {
            (p(b, y), p(a, y), alpha)
        }
    });
    Network::new(roads.collect::<Vec<_>>()).unwrap()
}

fn graph_size(net: &Network, r: &mut impl Rng) -> (f64, f64) {
    let g = build_graph(
        net,
        Some(random_point(r, 40.0)),
        Some(random_point(r, 40.0)),
    );
    (g.vertex_count() as f64, g.edge_count() as f64)
}

fn c7_graph_scaling() -> Outcome {
    let sizes = [5, 10, 20, 40, 80];
    let reps = 3;
    let mut rows = Vec::new();
    let (mut cv, mut ce, mut sparse) = (Vec::new(), Vec::new(), Vec::new());
    for n in sizes {
        let (mut vs, mut es, mut sv) = (0.0, 0.0, 0.0);
        for seed in 0..reps {
            let mut r = rng(6000 + 100 * n as u64 + seed);
            let (v, e) = graph_size(&stacked_network(&mut r, n), &mut r);
            vs += v;
            es += e;
            let spec = NetworkSpec {
                max_length: 6.0,
                min_length: 1.0,
                ..NetworkSpec::with_roads(n)
            };
            let net = random_network(&mut r, &spec);
            check(net.len() == n, || {
                format!("generator produced {} of {n} roads", net.len())
            })?;
            sv += graph_size(&net, &mut r).0;
        }
        let n2 = (n * n) as f64;
        let reps = reps as f64;
        cv.push(vs / reps / n2);
        ce.push(es / reps / n2);
        sparse.push(sv / reps / n2);
        rows.push(format!("n={n}: |V|={:.0} |E|={:.0}", vs / reps, es / reps));
    }
    let spread = |c: &[f64]| {
        c.iter().cloned().fold(0.0, f64::max) / c.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let (sv, se) = (spread(&cv), spread(&ce));
    check(sv <= 2.0, || {
        format!("|V|/n² varies by {sv:.2}× ({cv:.3?})")
    })?;
    check(se <= 2.0, || {
        format!("|E|/n² varies by {se:.2}× ({ce:.3?})")
    })?;
    Ok(format!(
        "stacked roads {}; c_V {cv:.2?} (spread {sv:.2}×), c_E {ce:.2?} (spread {se:.2}×); short uniform roads c_V {sparse:.2?}",
        rows.join(", ")
    ))
}

/// Largest cost decrease from sliding any walk/ride junction of `qp` by
/// `delta` along its road.
fn junction_improvement(net: &Network, qp: &QuickestPath, delta: f64) -> f64 {
    let mut best: f64 = 0.0;
    for w in qp.legs.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (ride, walk_end, entering) = match (a.kind, b.kind) {
            (LegKind::Walk, LegKind::Ride { road }) => (road, a.from, true),
            (LegKind::Ride { road }, LegKind::Walk) => (road, b.to, false),
            _ => continue,
        };
        let road = &net.roads()[ride];
        let dir = (road.v - road.u).unit();
        let (junction, ride_other) = if entering {
            (b.from, b.to)
        } else {
            (a.to, a.from)
        };
        let old = walk_end.dist(junction) + road.alpha * junction.dist(ride_other);
        for sign in [-1.0, 1.0] {
            let moved = junction + dir * (sign * delta);
            let on_road = road.segment().param_of(moved);
            if on_road < 0.0 || on_road > road.length() {
                continue;
            }
            // the ride must keep its direction
            let along = (if entering {
                ride_other - moved
            } else {
                moved - ride_other
            })
            .dot(dir);
            if along < 0.0 {
                continue;
            }
            let new = walk_end.dist(moved) + road.alpha * moved.dist(ride_other);
            best = best.max(old - new);
        }
    }
    best
}

fn c8_structure() -> Outcome {
    let mut worst_gain: f64 = 0.0;
    let mut junctions = 0;
    for trial in 0..100 {
        let mut r = rng(7000 + trial);
        let n = r.random_range(1..=10);
        let bigger = random_network(&mut r, &small_spec(n + 1));
        if bigger.len() < 2 {
            continue;
        }
        let roads: Vec<_> = bigger.roads()[..bigger.len() - 1]
            .iter()
            .map(|r| (r.u, r.v, r.alpha))
            .collect();
        let base = Network::new(roads).unwrap();
        let (s, t) = (random_point(&mut r, 40.0), random_point(&mut r, 40.0));
        let before = quickest_path(&base, s, t);
        let after = quickest_path(&bigger, s, t);
        check(after.cost <= before.cost + ABS_SLACK, || {
            format!(
                "trial {trial}: adding a road raised the cost {} → {}",
                before.cost, after.cost
            )
        })?;
        for (net, qp) in [(&base, &before), (&bigger, &after)] {
            let st = s.dist(t);
            check(
                qp.cost >= net.alpha_min() * st - ABS_SLACK && qp.cost <= st + ABS_SLACK,
                || {
                    format!(
                        "trial {trial}: cost {} outside [{}, {st}]",
                        qp.cost,
                        net.alpha_min() * st
                    )
                },
            )?;
            let gain = junction_improvement(net, qp, 1e-3);
            check(gain <= 1e-5, || {
                format!("trial {trial}: moving a junction saves {gain}")
            })?;
            worst_gain = worst_gain.max(gain);
            junctions += qp.legs.len();
        }
    }
    Ok(format!(
        "100 trials, {junctions} legs checked, largest perturbation gain {worst_gain:.2e}"
    ))
}

fn c9_determinism() -> Outcome {
    let mut r = rng(8000);
    let net = random_network(&mut r, &small_spec(8));
    let queries: Vec<(Point, Point)> = (0..20)
        .map(|_| (random_point(&mut r, 40.0), random_point(&mut r, 40.0)))
        .collect();
    let t = queries[0].1;
    let exact_bits = |net: &Network| -> Vec<u64> {
        queries
            .iter()
            .map(|&(s, t)| quickest_path(net, s, t).cost.to_bits())
            .collect()
    };
    check(exact_bits(&net) == exact_bits(&net), || {
        "exact costs differ between runs".into()
    })?;

    let indexes: Vec<QueryIndex> = vec![
        build_fixed(&net, t, 0.25).unwrap().into(),
        build_two_point(&net, 0.25, TwoPointMode::ExactApsp, None)
            .unwrap()
            .into(),
        build_two_point(&net, 0.25, TwoPointMode::Wspd, Some(0.2))
            .unwrap()
            .into(),
    ];
    let rebuilt: Vec<QueryIndex> = vec![
        build_fixed(&net, t, 0.25).unwrap().into(),
        build_two_point(&net, 0.25, TwoPointMode::ExactApsp, None)
            .unwrap()
            .into(),
        build_two_point(&net, 0.25, TwoPointMode::Wspd, Some(0.2))
            .unwrap()
            .into(),
    ];
    let dir = std::env::temp_dir().join(format!("quickpath-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut answers = 0;
    for (idx, again) in indexes.iter().zip(&rebuilt) {
        check(idx.serialize() == again.serialize(), || {
            format!("{} index differs between builds", idx.mode_name())
        })?;
        let path = dir.join(format!("{}.qpx", idx.mode_name()));
        idx.save(&path).map_err(|e| e.to_string())?;
        let loaded = QueryIndex::load(&path).map_err(|e| e.to_string())?;
        for &(s, qt) in &queries {
            let target = matches!(idx, QueryIndex::TwoPoint(_)).then_some(qt);
            let a = idx.query(s, target).unwrap();
            let b = loaded.query(s, target).unwrap();
            let c = again.query(s, target).unwrap();
            check(
                a.cost.to_bits() == b.cost.to_bits() && a.cost.to_bits() == c.cost.to_bits(),
                || format!("{}: {} / {} / {}", idx.mode_name(), a.cost, b.cost, c.cost),
            )?;
            check(a == b, || {
                format!("{}: persisted answer differs in detail", idx.mode_name())
            })?;
            answers += 1;
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!(
        "{answers} answers bit-identical across rebuilds and save/load"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("C1 closed-form single road", c1_closed_form),
        ("C2 exact vs oracle", c2_oracle_agreement),
        ("C3 fixed-destination (1+ε) bound", c3_fixed_destination),
        ("C4 two-point (1+σ) bound", c4_two_point),
        ("C5 WSPD distance sandwich", c5_wspd_sandwich),
        ("C6 WSPD coverage and separation", c6_wspd_axioms),
        ("C7 graph size quadratic", c7_graph_scaling),
        ("C8 structural invariants", c8_structure),
        ("C9 determinism and persistence", c9_determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
