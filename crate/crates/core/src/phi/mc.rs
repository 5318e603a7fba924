use rayon::prelude::*;

use super::{PhiMethod, PhiResult};
use crate::error::Result;
use crate::graph::RootedSet;
use crate::rng;
use crate::stats::Summary;

/// Monte Carlo estimate of `phi_p(S)`: percolate inside `S` and on its boundary
/// edges, and count open boundary edges whose inner end is in the root cluster.
pub fn phi_monte_carlo(s: &RootedSet, p: f64, replicas: usize, seed: u64) -> Result<PhiResult> {
    s.validate()?;
    let m = s.graph.edge_count() as u64;
    let values: Vec<f64> = (0..replicas as u64)
        .into_par_iter()
        .map(|i| {
            let key = rng::key(&[seed, i, 0x9f1]);
            let open: Vec<bool> = (0..m).map(|e| rng::uniform_at(key, e) < p).collect();
            let reach = s.graph.bfs_with(s.root, |e| open[e]);
            s.boundary
                .iter()
                .enumerate()
                .filter(|&(j, &v)| reach[v as usize].is_some() && rng::uniform_at(key, m + j as u64) < p)
                .count() as f64
        })
        .collect();
    let sum = Summary::of(&values);
    Ok(PhiResult {
        value: sum.mean,
        se: sum.se,
        ci: Some(sum.ci()),
        p,
        method: PhiMethod::MonteCarlo,
        set_size: s.graph.vertex_count(),
        boundary_edges: s.boundary.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FiniteGraph;
    use crate::phi::phi_bruteforce;

    #[test]
    fn zero_p_is_zero() {
        let s = RootedSet::new(FiniteGraph::cycle(5), 0, vec![0, 1, 3]);
        let r = phi_monte_carlo(&s, 0.0, 200, 1).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.se, 0.0);
    }

    #[test]
    fn single_vertex_binomial_mean() {
        let s = RootedSet::new(FiniteGraph::new(1, vec![]), 0, vec![0; 4]);
        let r = phi_monte_carlo(&s, 0.7, 20_000, 2).unwrap();
        let (lo, hi) = r.ci.unwrap();
        assert!(lo < 2.8 && 2.8 < hi, "{r:?}");
    }

    #[test]
    fn agrees_with_enumeration() {
        let s = RootedSet::new(FiniteGraph::grid_box(1), 4, vec![0, 0, 1, 2, 2, 3, 5, 6, 6, 7, 8, 8]);
        let exact = phi_bruteforce(&s, 0.45).unwrap().value;
        let mc = phi_monte_carlo(&s, 0.45, 40_000, 3).unwrap();
        assert!((mc.value - exact).abs() < 4.0 * mc.se, "{exact} {mc:?}");
    }
}
