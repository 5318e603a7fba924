use serde::{Deserialize, Serialize};

use crate::graph::FiniteGraph;
use crate::rng;

/// Open/closed states of the edges of a finite graph.
///
/// Edge `i` is open iff its uniform `U_i < p`, where `U_i` is drawn from the
/// stream `(seed, stream)`; raising `p` only opens more edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PercConfig {
    pub p_bits: u64,
    pub stream: u64,
    pub edge_count: usize,
    open: Vec<u64>,
}

impl PercConfig {
    pub fn p(&self) -> f64 {
        f64::from_bits(self.p_bits)
    }

    pub fn from_fn(edge_count: usize, p: f64, stream: u64, mut open: impl FnMut(usize) -> bool) -> Self {
        let mut bits = vec![0u64; edge_count.div_ceil(64)];
        for i in 0..edge_count {
            if open(i) {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        Self { p_bits: p.to_bits(), stream, edge_count, open: bits }
    }

    pub fn is_open(&self, e: usize) -> bool {
        self.open[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn open_count(&self) -> usize {
        self.open.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Whether every open edge here is also open in `other`.
    pub fn is_subset_of(&self, other: &PercConfig) -> bool {
        self.edge_count == other.edge_count && self.open.iter().zip(&other.open).all(|(a, b)| a & !b == 0)
    }
}

/// Stream key for `(seed, stream)`.
pub fn stream_key(seed: u64, stream: u64) -> u64 {
    rng::key(&[seed, stream, 0xbe7c])
}

/// Bernoulli(`p`) bond percolation on `g`, edge uniforms indexed by edge position.
pub fn percolate(g: &FiniteGraph, p: f64, seed: u64, stream: u64) -> PercConfig {
    let k = stream_key(seed, stream);
    PercConfig::from_fn(g.edge_count(), p, stream, |i| rng::uniform_at(k, i as u64) < p)
}

/// Percolation where edge `i` uses the uniform at counter `keys[i]`, so that
/// the same edge gets the same state in overlapping subgraphs.
pub fn percolate_keyed(keys: &[u64], p: f64, seed: u64, stream: u64) -> PercConfig {
    let k = stream_key(seed, stream);
    PercConfig::from_fn(keys.len(), p, stream, |i| rng::uniform_at(k, keys[i]) < p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        let g = FiniteGraph::grid_box(3);
        assert_eq!(percolate(&g, 0.0, 1, 0).open_count(), 0);
        assert_eq!(percolate(&g, 1.0, 1, 0).open_count(), g.edge_count());
    }

    #[test]
    fn open_fraction() {
        let keys: Vec<u64> = (0..1_000_000).collect();
        let c = percolate_keyed(&keys, 0.37, 11, 2);
        let f = c.open_count() as f64 / 1e6;
        assert!((f - 0.37).abs() < 0.002, "{f}");
    }

    #[test]
    fn monotone_in_p() {
        let g = FiniteGraph::grid_box(5);
        let a = percolate(&g, 0.3, 9, 4);
        let b = percolate(&g, 0.6, 9, 4);
        assert!(a.is_subset_of(&b));
        assert_eq!(a, percolate(&g, 0.3, 9, 4));
    }
}
