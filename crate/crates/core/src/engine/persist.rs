//! Text serialization of query indexes.
//!
//! ```text
//! qpx v1
//! mode fixed|apsp|wspd
//! eps <real>
//! tau <real>|-
//! target <x> <y>|-
//! network-hash <sha256 hex>
//! network <n>
//! road ...                      (n lines, as in a network file)
//! vertices <V>
//! <x> <y>                       (V lines)
//! costs <V>                     fixed: cost to the target per vertex
//! table <V>                     apsp: V rows of V costs
//! pairs <P>                     wspd: `rep_a rep_b cost_ab cost_ba` per pair
//! end
//! ```
//!
//! Loading rebuilds the graph from the embedded network and rejects the file
//! if the vertex table disagrees, so stored costs always refer to the same
//! vertex ids.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::exact::{build_graph, sssp};
use crate::geometry::Point;
use crate::network::{fmt_real, parse_real, parse_records, road_line, Network, NETWORK_HEADER};

use super::{DistanceTable, FixedDestIndex, QueryAnswer, TwoPointIndex, TwoPointMode, WspdTable};

pub const INDEX_HEADER: &str = "qpx v1";

#[derive(Debug, Clone)]
pub enum QueryIndex {
    Fixed(FixedDestIndex),
    TwoPoint(TwoPointIndex),
}

impl QueryIndex {
    pub fn mode_name(&self) -> &'static str {
        match self {
            QueryIndex::Fixed(_) => "fixed",
            QueryIndex::TwoPoint(i) => i.mode().name(),
        }
    }

    pub fn network(&self) -> &Network {
        match self {
            QueryIndex::Fixed(i) => i.network(),
            QueryIndex::TwoPoint(i) => i.network(),
        }
    }

    pub fn eps(&self) -> f64 {
        match self {
            QueryIndex::Fixed(i) => i.eps(),
            QueryIndex::TwoPoint(i) => i.eps(),
        }
    }

    /// Answers a query; `t` is required for two-point indexes and must be
    /// absent or equal to the stored target for fixed ones.
    pub fn query(&self, s: Point, t: Option<Point>) -> Result<QueryAnswer> {
        match (self, t) {
            (QueryIndex::Fixed(i), None) => Ok(i.query(s)),
            (QueryIndex::Fixed(i), Some(t)) if t == i.target() => Ok(i.query(s)),
            (QueryIndex::Fixed(i), Some(t)) => Err(Error::Parameter(format!(
                "index is built for target ({}, {}), not ({}, {})",
                i.target().x,
                i.target().y,
                t.x,
                t.y
            ))),
            (QueryIndex::TwoPoint(i), Some(t)) => Ok(i.query(s, t)),
            (QueryIndex::TwoPoint(_), None) => {
                Err(Error::Parameter("two-point index needs a target".into()))
            }
        }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{INDEX_HEADER}").unwrap();
        writeln!(out, "mode {}", self.mode_name()).unwrap();
        writeln!(out, "eps {}", fmt_real(self.eps())).unwrap();
        let (tau, target, graph) = match self {
            QueryIndex::Fixed(i) => (None, Some(i.target()), i.graph()),
            QueryIndex::TwoPoint(i) => (i.tau(), None, i.graph()),
        };
        writeln!(out, "tau {}", tau.map_or("-".into(), fmt_real)).unwrap();
        match target {
            Some(t) => writeln!(out, "target {} {}", fmt_real(t.x), fmt_real(t.y)).unwrap(),
            None => writeln!(out, "target -").unwrap(),
        }
        let net = self.network();
        writeln!(out, "network-hash {}", net.content_hash()).unwrap();
        writeln!(out, "network {}", net.len()).unwrap();
        for r in net.roads() {
            writeln!(out, "{}", road_line(r)).unwrap();
        }
        writeln!(out, "vertices {}", graph.vertex_count()).unwrap();
        for v in graph.vertices() {
            writeln!(out, "{} {}", fmt_real(v.location.x), fmt_real(v.location.y)).unwrap();
        }
        match self {
            QueryIndex::Fixed(i) => {
                writeln!(out, "costs {}", i.costs().len()).unwrap();
                for &c in i.costs() {
                    writeln!(out, "{}", fmt_real(c)).unwrap();
                }
            }
            QueryIndex::TwoPoint(i) => match i.table() {
                DistanceTable::Apsp { n, costs } => {
                    writeln!(out, "table {n}").unwrap();
                    for row in costs.chunks(*n) {
                        let cells: Vec<String> = row.iter().map(|&c| fmt_real(c)).collect();
                        writeln!(out, "{}", cells.join(" ")).unwrap();
                    }
                }
                DistanceTable::Wspd(w) => {
                    writeln!(out, "pairs {}", w.pairs.len()).unwrap();
                    for (pair, &(fwd, bwd)) in w.pairs.pairs().iter().zip(&w.rep_costs) {
                        writeln!(
                            out,
                            "{} {} {} {}",
                            w.location_vertex[pair.rep_a],
                            w.location_vertex[pair.rep_b],
                            fmt_real(fwd),
                            fmt_real(bwd)
                        )
                        .unwrap();
                    }
                }
            },
        }
        writeln!(out, "end").unwrap();
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.serialize())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut r = Reader {
            lines: text
                .lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .collect(),
            pos: 0,
        };
        let (line, header) = r.next()?;
        if header != INDEX_HEADER {
            return Err(Error::Parse {
                line,
                message: format!("expected `{INDEX_HEADER}`, found `{header}`"),
            });
        }
        let (line, mode) = r.keyed("mode")?;
        let mode = match mode.as_slice() {
            ["fixed"] => None,
            ["apsp"] => Some(TwoPointMode::ExactApsp),
            ["wspd"] => Some(TwoPointMode::Wspd),
            _ => {
                return Err(Error::Parse {
                    line,
                    message: "mode must be fixed, apsp or wspd".into(),
                })
            }
        };
        let (line, eps) = r.keyed("eps")?;
        let eps = single_real(&eps, line)?;
        let (line, tau) = r.keyed("tau")?;
        let tau = match tau.as_slice() {
            ["-"] => None,
            _ => Some(single_real(&tau, line)?),
        };
        let (line, target) = r.keyed("target")?;
        let target = match target.as_slice() {
            ["-"] => None,
            [x, y] => Some(Point::new(parse_real(x, line)?, parse_real(y, line)?)),
            _ => {
                return Err(Error::Parse {
                    line,
                    message: "target needs two coordinates or `-`".into(),
                })
            }
        };
        let (_, hash) = r.keyed("network-hash")?;
        let hash = hash.concat();
        let (line, n) = r.keyed("network")?;
        let n = single_count(&n, line)?;
        let mut net_text = format!("{NETWORK_HEADER}\n");
        for _ in 0..n {
            net_text.push_str(r.next()?.1);
            net_text.push('\n');
        }
        let network = Network::from_records(&parse_records(&net_text)?)?;
        if network.content_hash() != hash {
            return Err(Error::Mismatch(
                "network hash does not match the embedded network".into(),
            ));
        }

        let graph = match mode {
            None => {
                let t =
                    target.ok_or_else(|| Error::Mismatch("fixed index without a target".into()))?;
                build_graph(&network, None, Some(t))
            }
            Some(_) => build_graph(&network, None, None),
        };
        let (line, v) = r.keyed("vertices")?;
        let v = single_count(&v, line)?;
        if v != graph.vertex_count() {
            return Err(Error::Mismatch(format!(
                "stored {v} vertices, rebuilt graph has {}",
                graph.vertex_count()
            )));
        }
        for id in 0..v {
            let (line, l) = r.next()?;
            let xy = reals(l, line)?;
            let loc = graph.location(id);
            if xy.len() != 2
                || xy[0].to_bits() != loc.x.to_bits()
                || xy[1].to_bits() != loc.y.to_bits()
            {
                return Err(Error::Mismatch(format!(
                    "vertex {id} differs from the rebuilt graph"
                )));
            }
        }

        let index = match mode {
            None => {
                let (line, c) = r.keyed("costs")?;
                expect_count(&c, line, v)?;
                let mut costs = Vec::with_capacity(v);
                for _ in 0..v {
                    let (line, l) = r.next()?;
                    costs.push(parse_real(l, line)?);
                }
                let tree = sssp(&graph, graph.target().unwrap(), true);
                QueryIndex::Fixed(FixedDestIndex::assemble(
                    network,
                    target.unwrap(),
                    eps,
                    graph,
                    costs,
                    tree,
                )?)
            }
            Some(TwoPointMode::ExactApsp) => {
                let (line, c) = r.keyed("table")?;
                expect_count(&c, line, v)?;
                let mut costs = Vec::with_capacity(v * v);
                for _ in 0..v {
                    let (line, l) = r.next()?;
                    let row = reals(l, line)?;
                    if row.len() != v {
                        return Err(Error::Parse {
                            line,
                            message: format!("expected {v} costs, found {}", row.len()),
                        });
                    }
                    costs.extend(row);
                }
                let table = DistanceTable::Apsp { n: v, costs };
                QueryIndex::TwoPoint(TwoPointIndex::assemble(network, eps, None, graph, table)?)
            }
            Some(TwoPointMode::Wspd) => {
                let tau = tau.ok_or_else(|| Error::Mismatch("wspd index without tau".into()))?;
                let mut w = WspdTable::skeleton(
                    &graph,
                    super::two_point::separation_for(tau, network.alpha_min()),
                )?;
                let (line, c) = r.keyed("pairs")?;
                expect_count(&c, line, w.pairs.len())?;
                for k in 0..w.pairs.len() {
                    let (line, l) = r.next()?;
                    let toks: Vec<&str> = l.split_whitespace().collect();
                    if toks.len() != 4 {
                        return Err(Error::Parse {
                            line,
                            message: "pair line needs 4 fields".into(),
                        });
                    }
                    let pair = w.pairs.pairs()[k];
                    let reps = (
                        w.location_vertex[pair.rep_a].to_string(),
                        w.location_vertex[pair.rep_b].to_string(),
                    );
                    if toks[0] != reps.0 || toks[1] != reps.1 {
                        return Err(Error::Mismatch(format!(
                            "pair {k} has different representatives"
                        )));
                    }
                    w.rep_costs[k] = (parse_real(toks[2], line)?, parse_real(toks[3], line)?);
                }
                QueryIndex::TwoPoint(TwoPointIndex::assemble(
                    network,
                    eps,
                    Some(tau),
                    graph,
                    DistanceTable::Wspd(w),
                )?)
            }
        };
        let (line, end) = r.next()?;
        if end != "end" {
            return Err(Error::Parse {
                line,
                message: format!("expected `end`, found `{end}`"),
            });
        }
        Ok(index)
    }
}

impl From<FixedDestIndex> for QueryIndex {
    fn from(i: FixedDestIndex) -> Self {
        QueryIndex::Fixed(i)
    }
}

impl From<TwoPointIndex> for QueryIndex {
    fn from(i: TwoPointIndex) -> Self {
        QueryIndex::TwoPoint(i)
    }
}

struct Reader<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn next(&mut self) -> Result<(usize, &'a str)> {
        while let Some(&(line, l)) = self.lines.get(self.pos) {
            self.pos += 1;
            if !l.is_empty() {
                return Ok((line, l));
            }
        }
        let line = self.lines.last().map_or(1, |l| l.0);
        Err(Error::Parse {
            line,
            message: "unexpected end of index".into(),
        })
    }

    fn keyed(&mut self, key: &str) -> Result<(usize, Vec<&'a str>)> {
        let (line, l) = self.next()?;
        let mut toks = l.split_whitespace();
        if toks.next() != Some(key) {
            return Err(Error::Parse {
                line,
                message: format!("expected `{key}`, found `{l}`"),
            });
        }
        Ok((line, toks.collect()))
    }
}

fn reals(l: &str, line: usize) -> Result<Vec<f64>> {
    l.split_whitespace().map(|t| parse_real(t, line)).collect()
}

fn single_real(toks: &[&str], line: usize) -> Result<f64> {
    match toks {
        [t] => parse_real(t, line),
        _ => Err(Error::Parse {
            line,
            message: "expected one number".into(),
        }),
    }
}

fn single_count(toks: &[&str], line: usize) -> Result<usize> {
    match toks {
        [t] => t.parse().map_err(|_| Error::Parse {
            line,
            message: format!("invalid count `{t}`"),
        }),
        _ => Err(Error::Parse {
            line,
            message: "expected one count".into(),
        }),
    }
}

fn expect_count(toks: &[&str], line: usize, want: usize) -> Result<()> {
    let got = single_count(toks, line)?;
    if got != want {
        return Err(Error::Mismatch(format!(
            "expected {want} entries, index stores {got}"
        )));
    }
    Ok(())
}
