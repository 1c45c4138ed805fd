use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use quickpath::gen::{random_network, random_point, rng, NetworkSpec};
use quickpath::network::{fmt_real, parse_records};
use quickpath::oracle::oracle_cost_records;
use quickpath::{
    build_fixed, build_graph, build_two_point, quickest_path, Error, LegKind, Network, Point,
    QueryIndex, QuickestPath, TwoPointMode,
};

#[derive(Parser)]
#[command(
    name = "quickpath",
    version,
    about = "Quickest paths on planar transportation networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a network file and list every violated invariant.
    Validate { network: PathBuf },
    /// Exact quickest path between two points.
    Solve {
        network: PathBuf,
        #[arg(long, value_parser = parse_point)]
        from: Point,
        #[arg(long, value_parser = parse_point)]
        to: Point,
    },
    /// Brute-force reference cost from sampling every road.
    Oracle {
        network: PathBuf,
        #[arg(long, value_parser = parse_point)]
        from: Point,
        #[arg(long, value_parser = parse_point)]
        to: Point,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Preprocess a network for approximate queries.
    BuildIndex {
        network: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Destination (fixed mode only).
        #[arg(long, value_parser = parse_point)]
        to: Option<Point>,
        #[arg(long)]
        eps: f64,
        /// Table error for wspd mode.
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer a query from a saved index.
    Query {
        index: PathBuf,
        #[arg(long, value_parser = parse_point)]
        from: Point,
        #[arg(long, value_parser = parse_point)]
        to: Option<Point>,
        /// Must match the index when given.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Time graph construction and queries on random networks; prints CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [5, 10, 20, 40])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        queries: usize,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
    },
    /// Write the exact path as CSV polyline vertices.
    ExportPath {
        network: PathBuf,
        #[arg(long, value_parser = parse_point)]
        from: Point,
        #[arg(long, value_parser = parse_point)]
        to: Point,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Fixed,
    Apsp,
    Wspd,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let x: f64 = x
        .trim()
        .parse()
        .map_err(|_| format!("invalid x coordinate `{x}`"))?;
    let y: f64 = y
        .trim()
        .parse()
        .map_err(|_| format!("invalid y coordinate `{y}`"))?;
    let p = Point::new(x, y);
    if p.is_finite() {
        Ok(p)
    } else {
        Err(format!("coordinates must be finite, got `{s}`"))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parameter(_) => 2,
        _ => 1,
    }
}

fn load_network(path: &PathBuf) -> Result<Network, Error> {
    let text = std::fs::read_to_string(path)?;
    Network::from_records(&parse_records(&text)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cmd: Command) -> Result<String, Error> {
    let mut out = String::new();
    match cmd {
        Command::Validate { network } => {
            let net = load_network(&network)?;
            writeln!(out, "ok: {} directed roads", net.len()).unwrap();
        }
        Command::Solve { network, from, to } => {
            let net = load_network(&network)?;
            write_path(&mut out, &quickest_path(&net, from, to));
        }
        Command::Oracle {
            network,
            from,
            to,
            samples,
        } => {
            let text = std::fs::read_to_string(&network)?;
            let records = parse_records(&text)?;
            Network::from_records(&records)?;
            writeln!(
                out,
                "cost {}",
                fmt_real(oracle_cost_records(&records, from, to, samples)?)
            )
            .unwrap();
        }
        Command::BuildIndex {
            network,
            mode,
            to,
            eps,
            tau,
            out: path,
        } => {
            let net = load_network(&network)?;
            let index: QueryIndex = match mode {
                Mode::Fixed => {
                    let t = to.ok_or_else(|| Error::Parameter("fixed mode needs --to".into()))?;
                    build_fixed(&net, t, eps)?.into()
                }
                Mode::Apsp => build_two_point(&net, eps, TwoPointMode::ExactApsp, None)?.into(),
                Mode::Wspd => build_two_point(&net, eps, TwoPointMode::Wspd, tau)?.into(),
            };
            index.save(&path)?;
            writeln!(
                out,
                "wrote {} index to {}",
                index.mode_name(),
                path.display()
            )
            .unwrap();
        }
        Command::Query {
            index,
            from,
            to,
            eps,
        } => {
            if let Some(e) = eps {
                if !(e > 0.0 && e < 1.0) {
                    return Err(Error::Parameter(format!("eps must lie in (0, 1), got {e}")));
                }
            }
            let idx = QueryIndex::load(&index)?;
            if let Some(e) = eps {
                if e != idx.eps() {
                    return Err(Error::Parameter(format!(
                        "index was built with eps {}, not {e}",
                        idx.eps()
                    )));
                }
            }
            let answer = idx.query(from, to)?;
            writeln!(out, "cost {}", fmt_real(answer.cost)).unwrap();
            write!(out, "source {:?}", answer.source_kind).unwrap();
            if let Some(k) = answer.target_kind {
                write!(out, " target {k:?}").unwrap();
            }
            out.push('\n');
            if let Some(w) = &answer.witness {
                write_legs(&mut out, w);
            }
        }
        Command::Bench {
            sizes,
            seed,
            queries,
            eps,
        } => {
            writeln!(out, "roads,vertices,edges,exact_ms,fixed_build_ms,fixed_query_us,wspd_build_ms,wspd_query_us")
                .unwrap();
            for n in sizes {
                let mut r = rng(seed ^ n as u64);
                let spec = NetworkSpec {
                    max_length: 12.0,
                    ..NetworkSpec::with_roads(n)
                };
                let net = random_network(&mut r, &spec);
                let pts: Vec<Point> = (0..queries.max(1) + 1)
                    .map(|_| random_point(&mut r, spec.extent))
                    .collect();
                let (t, sources) = (pts[0], &pts[1..]);
                let g = build_graph(&net, Some(sources[0]), Some(t));

                let clock = Instant::now();
                for &s in sources {
                    quickest_path(&net, s, t);
                }
                let exact_ms = clock.elapsed().as_secs_f64() * 1e3 / sources.len() as f64;

                let clock = Instant::now();
                let fixed = build_fixed(&net, t, eps)?;
                let fixed_build = clock.elapsed().as_secs_f64() * 1e3;
                let clock = Instant::now();
                for &s in sources {
                    fixed.query(s);
                }
                let fixed_query = clock.elapsed().as_secs_f64() * 1e6 / sources.len() as f64;

                let clock = Instant::now();
                let wspd = build_two_point(&net, eps, TwoPointMode::Wspd, Some(eps / 2.0))?;
                let wspd_build = clock.elapsed().as_secs_f64() * 1e3;
                let clock = Instant::now();
                for &s in sources {
                    wspd.query(s, t);
                }
                let wspd_query = clock.elapsed().as_secs_f64() * 1e6 / sources.len() as f64;

                writeln!(
                    out,
                    "{},{},{},{exact_ms:.3},{fixed_build:.3},{fixed_query:.1},{wspd_build:.3},{wspd_query:.1}",
                    net.len(),
                    g.vertex_count(),
                    g.edge_count()
                )
                .unwrap();
            }
        }
        Command::ExportPath {
            network,
            from,
            to,
            out: path,
        } => {
            let net = load_network(&network)?;
            let qp = quickest_path(&net, from, to);
            let mut csv = String::from("x,y,kind\n");
            if qp.legs.is_empty() {
                // s == t
                writeln!(csv, "{},{},start", fmt_real(from.x), fmt_real(from.y)).unwrap();
            }
            for (i, (p, kind)) in qp.polyline().into_iter().enumerate() {
                let label = if i == 0 { "start" } else { kind_name(kind) };
                writeln!(csv, "{},{},{label}", fmt_real(p.x), fmt_real(p.y)).unwrap();
            }
            match path {
                Some(path) => {
                    std::fs::write(&path, csv)?;
                    writeln!(out, "wrote {}", path.display()).unwrap();
                }
                None => out = csv,
            }
        }
    }
    Ok(out)
}

fn kind_name(kind: LegKind) -> &'static str {
    match kind {
        LegKind::Walk => "walk",
        LegKind::Ride { .. } => "ride",
    }
}

fn write_path(out: &mut String, qp: &QuickestPath) {
    writeln!(out, "cost {}", fmt_real(qp.cost)).unwrap();
    write_legs(out, qp);
}

fn write_legs(out: &mut String, qp: &QuickestPath) {
    for leg in &qp.legs {
        let kind = match leg.kind {
            LegKind::Walk => "walk".to_string(),
            LegKind::Ride { road } => format!("ride {road}"),
        };
        writeln!(
            out,
            "leg {kind} from {} {} to {} {} cost {}",
            fmt_real(leg.from.x),
            fmt_real(leg.from.y),
            fmt_real(leg.to.x),
            fmt_real(leg.to.y),
            fmt_real(leg.cost)
        )
        .unwrap();
    }
}
