//! Fixed inputs shared by the benchmarks.

use randflag::{Graph, Seed};

/// G(n, p) from a fixed seed, so every run measures the same graph.
pub fn fixture(n: usize, p: f64) -> Graph {
    Graph::sample_gnp(n, p, Seed::new(0xBE7C, 0)).expect("valid probability")
}
