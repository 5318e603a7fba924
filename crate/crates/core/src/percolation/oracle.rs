//! Exact connection probabilities by enumerating all edge configurations.
//!
//! Results are kept as integer counts per number of open edges, so they can be
//! evaluated at any `p` in any numeric type, including exact rationals.

use num_traits::{FromPrimitive, Num};

use crate::error::{Error, Result};
use crate::graph::FiniteGraph;

/// Largest edge count accepted by the enumeration.
pub const ORACLE_EDGE_CAP: usize = 24;

/// `counts[v][k]`: number of edge subsets with `k` open edges in which
/// `root` and `v` are joined by an open path.
pub fn connection_counts(g: &FiniteGraph, root: u32) -> Result<Vec<Vec<u64>>> {
    let m = g.edge_count();
    if m > ORACLE_EDGE_CAP {
        return Err(Error::EdgeCap { cap: ORACLE_EDGE_CAP, got: m });
    }
    let n = g.vertex_count();
    if n > 64 {
        return Err(Error::EdgeCap { cap: ORACLE_EDGE_CAP, got: m });
    }
    let adj: Vec<Vec<(u32, u32)>> = (0..n as u32).map(|v| g.incident(v).to_vec()).collect();
    let mut counts = vec![vec![0u64; m + 1]; n];
    let mut stack = Vec::with_capacity(n);
    for mask in 0u32..(1u32 << m) {
        let k = mask.count_ones() as usize;
        let mut reach = 1u64 << root;
        stack.clear();
        stack.push(root);
        while let Some(v) = stack.pop() {
            counts[v as usize][k] += 1;
            for &(w, e) in &adj[v as usize] {
                if mask >> e & 1 == 1 && reach >> w & 1 == 0 {
                    reach |= 1 << w;
                    stack.push(w);
                }
            }
        }
    }
    Ok(counts)
}

/// `sum_k counts[k] p^k (1-p)^(m-k)`.
pub fn eval_counts<T: Num + Clone + FromPrimitive>(counts: &[u64], p: T) -> T {
    let m = counts.len() - 1;
    let q = T::one() - p.clone();
    let mut total = T::zero();
    for (k, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mut term = T::from_u64(c).expect("count representable");
        for _ in 0..k {
            term = term * p.clone();
        }
        for _ in k..m {
            term = term * q.clone();
        }
        total = total + term;
    }
    total
}

/// Exact `P_p(x <-> y)` in `g`.
pub fn connectivity_oracle<T: Num + Clone + FromPrimitive>(g: &FiniteGraph, p: T, x: u32, y: u32) -> Result<T> {
    if x == y {
        return Ok(T::one());
    }
    let counts = connection_counts(g, x)?;
    Ok(eval_counts(&counts[y as usize], p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn trivial_cases() {
        let g = FiniteGraph::path(2);
        assert_eq!(connectivity_oracle(&g, 0.3f64, 0, 0).unwrap(), 1.0);
        assert!((connectivity_oracle(&g, 0.3f64, 0, 1).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn triangle_exact() {
        let g = FiniteGraph::cycle(3);
        let half = Ratio::new(1i64, 2);
        // p + (1-p) p^2
        assert_eq!(connectivity_oracle(&g, half, 0, 1).unwrap(), Ratio::new(5, 8));
        assert!((connectivity_oracle(&g, 0.5f64, 0, 1).unwrap() - 0.625).abs() < 1e-15);
    }

    #[test]
    fn square_exact() {
        // two disjoint paths of lengths 1 and 3: p + p^3 - p^4
        let g = FiniteGraph::cycle(4);
        let p = Ratio::new(1i64, 3);
        let expect = p + p * p * p - p * p * p * p;
        assert_eq!(connectivity_oracle(&g, p, 0, 1).unwrap(), expect);
    }

    #[test]
    fn cap() {
        let g = FiniteGraph::grid_box(2);
        assert!(matches!(connectivity_oracle(&g, 0.5f64, 0, 1), Err(Error::EdgeCap { .. })));
    }
}
