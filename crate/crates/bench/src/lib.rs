//! Shared fixtures for the criterion benchmarks.

use quickpath::gen::{random_network, random_point, rng, NetworkSpec};
use quickpath::{Network, Point};

pub struct Instance {
    pub network: Network,
    pub sources: Vec<Point>,
    pub target: Point,
}

/// A random network with `roads` roads in `[0, 40]²` plus 64 query sources.
pub fn instance(roads: usize, seed: u64) -> Instance {
    let mut r = rng(seed);
    let spec = NetworkSpec {
        max_length: 12.0,
        ..NetworkSpec::with_roads(roads)
    };
    let network = random_network(&mut r, &spec);
    let sources = (0..64).map(|_| random_point(&mut r, spec.extent)).collect();
    let target = random_point(&mut r, spec.extent);
    Instance {
        network,
        sources,
        target,
    }
}
