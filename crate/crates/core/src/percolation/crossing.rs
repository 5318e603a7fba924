use rayon::prelude::*;
use serde_json::json;

use crate::graph::FiniteGraph;
use crate::report::{source_hash, EstimateReport};
use crate::stats::{wilson_interval, Z95};

use super::{clusters, percolate};

fn index(n: usize, x: i64, y: i64) -> u32 {
    let side = 2 * n as i64 + 1;
    ((y + n as i64) * side + (x + n as i64)) as u32
}

/// Whether the four side midpoints of `Q_n` share an open cluster, for each
/// `p` in `ps`, on one shared configuration of edge uniforms.
fn crossing_indicators(g: &FiniteGraph, n: usize, ps: &[f64], seed: u64, replica: u64) -> Vec<bool> {
    let pts = [index(n, 0, n as i64), index(n, 0, -(n as i64)), index(n, n as i64, 0), index(n, -(n as i64), 0)];
    ps.iter()
        .map(|&p| {
            let mut c = clusters(g, &percolate(g, p, seed, replica));
            pts.iter().all(|&v| c.same_cluster(v, pts[0]))
        })
        .collect()
}

/// `P(four side midpoints of Q_n in one cluster)` at each `p`, coupled across `p`.
pub fn four_point_crossing_curve(n: usize, ps: &[f64], replicas: usize, seed: u64) -> Vec<EstimateReport> {
    let g = FiniteGraph::grid_box(n);
    let hits: Vec<Vec<bool>> =
        (0..replicas as u64).into_par_iter().map(|i| crossing_indicators(&g, n, ps, seed, i)).collect();
    let hash = source_hash(&json!({ "kind": "box", "params": { "n": n } }));
    ps.iter()
        .enumerate()
        .map(|(j, &p)| {
            let k = hits.iter().filter(|h| h[j]).count();
            let (lo, hi) = wilson_interval(k, replicas, Z95);
            EstimateReport {
                experiment: "crossing".into(),
                source_hash: hash.clone(),
                p,
                radius: n,
                replicas,
                estimate: k as f64 / replicas.max(1) as f64,
                ci_lo: lo,
                ci_hi: hi,
                seed,
            }
        })
        .collect()
}

pub fn four_point_crossing(n: usize, p: f64, replicas: usize, seed: u64) -> EstimateReport {
    four_point_crossing_curve(n, &[p], replicas, seed).remove(0)
}
