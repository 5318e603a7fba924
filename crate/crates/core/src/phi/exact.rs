use num_traits::{FromPrimitive, Num};

use super::{PhiMethod, PhiResult};
use crate::error::{Error, Result};
use crate::graph::RootedSet;
use crate::percolation::{connection_counts, eval_counts};
use crate::scalar::Real;

/// Exact `phi_p(S)` by enumerating all open-edge configurations inside `S`.
pub fn phi_bruteforce_exact<T: Num + Clone + FromPrimitive>(s: &RootedSet, p: T) -> Result<T> {
    s.validate()?;
    let counts = connection_counts(&s.graph, s.root)?;
    let mut mult = vec![0u64; s.graph.vertex_count()];
    for &v in &s.boundary {
        mult[v as usize] += 1;
    }
    let mut total = T::zero();
    for (v, &k) in mult.iter().enumerate() {
        if k > 0 {
            let conn = eval_counts(&counts[v], p.clone());
            total = total + T::from_u64(k).expect("multiplicity") * p.clone() * conn;
        }
    }
    Ok(total)
}

pub fn phi_bruteforce(s: &RootedSet, p: f64) -> Result<PhiResult> {
    let v = phi_bruteforce_exact(s, p)?;
    Ok(PhiResult::exact(v, p, PhiMethod::Brute, s.graph.vertex_count(), s.boundary.len()))
}

/// Exact `phi_p(S)` for acyclic `S`: each boundary edge contributes
/// `p^(d(o, e-) + 1)`.
pub fn phi_tree_exact<T: Real>(s: &RootedSet, p: T) -> Result<T> {
    s.validate()?;
    if !s.graph.is_tree() {
        return Err(Error::NotATree);
    }
    let dist = s.graph.bfs(s.root);
    Ok(s
        .boundary
        .iter()
        .map(|&v| p.powi(dist[v as usize].expect("connected") as i32 + 1))
        .fold(T::zero(), |a, b| a + b))
}

pub fn phi_tree(s: &RootedSet, p: f64) -> Result<PhiResult> {
    let v = phi_tree_exact(s, p)?;
    Ok(PhiResult::exact(v, p, PhiMethod::Tree, s.graph.vertex_count(), s.boundary.len()))
}

/// Annealed `E phi_p(B(o, r))` on the canopy tree in closed form.
pub fn canopy_expected_phi_closed<T: Real>(p: T, r: usize) -> T {
    let s = T::lit(std::f64::consts::SQRT_2) * p;
    if r % 2 == 0 {
        T::lit(2.0) * p * s.powi(r as i32)
    } else {
        T::lit(1.5) * s.powi(r as i32 + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ball, FiniteGraph, LocalGraph};
    use crate::generators::{CanopyGraph, PathSource, GraphSource};

    fn star_set(deg: usize) -> RootedSet {
        RootedSet::new(FiniteGraph::new(1, vec![]), 0, vec![0; deg])
    }

    #[test]
    fn single_vertex() {
        let s = star_set(3);
        assert!((phi_bruteforce(&s, 0.2).unwrap().value - 0.6).abs() < 1e-15);
        assert!((phi_tree(&s, 0.2).unwrap().value - 0.6).abs() < 1e-15);
    }

    #[test]
    fn edge_with_one_boundary_edge() {
        let s = RootedSet::new(FiniteGraph::path(2), 0, vec![1]);
        assert!((phi_bruteforce(&s, 0.5).unwrap().value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn endpoints_of_p() {
        let s = RootedSet::new(FiniteGraph::cycle(4), 0, vec![0, 1, 2, 2, 3]);
        assert_eq!(phi_bruteforce(&s, 0.0).unwrap().value, 0.0);
        assert_eq!(phi_bruteforce(&s, 1.0).unwrap().value, 5.0);
        assert!(matches!(phi_tree(&s, 0.5), Err(Error::NotATree)));
    }

    #[test]
    fn path_ball() {
        let g = PathSource.sample(0).unwrap();
        let b = ball(&*g, &g.root(), 3).unwrap();
        let s = b.rooted_set();
        assert!((phi_tree(&s, 0.5).unwrap().value - 0.125).abs() < 1e-15);
        assert!((phi_bruteforce(&s, 0.5).unwrap().value - 0.125).abs() < 1e-15);
    }

    #[test]
    fn regular_tree_radius_one() {
        // a level-5 canopy vertex sees a 3-regular neighbourhood up to distance 5
        let g = CanopyGraph::new(5, None);
        let b = ball(&g, &g.root(), 1).unwrap();
        let p = 0.3;
        assert!((phi_tree(&b.rooted_set(), p).unwrap().value - 6.0 * p * p).abs() < 1e-15);
    }

    #[test]
    fn exact_rationals() {
        use num_rational::Ratio;
        let s = RootedSet::new(FiniteGraph::cycle(3), 0, vec![1, 2]);
        let half = Ratio::new(1i64, 2);
        // P(o <-> v) in a triangle at p=1/2 is 5/8
        assert_eq!(phi_bruteforce_exact(&s, half).unwrap(), Ratio::new(5, 8));
    }

    #[test]
    fn missing_root_and_disconnected() {
        let s = RootedSet::new(FiniteGraph::path(2), 4, vec![]);
        assert!(matches!(phi_bruteforce(&s, 0.5), Err(Error::RootNotInSet)));
        let s = RootedSet::new(FiniteGraph::new(3, vec![(0, 1)]), 0, vec![2]);
        assert!(matches!(phi_bruteforce(&s, 0.5), Err(Error::Disconnected)));
    }

    #[test]
    fn closed_form_values() {
        assert!((canopy_expected_phi_closed(0.5f64, 2) - 0.5).abs() < 1e-15);
        assert!((canopy_expected_phi_closed(0.5f64, 1) - 0.75).abs() < 1e-15);
        assert!((canopy_expected_phi_closed(0.4f32, 0) - 0.8).abs() < 1e-6);
    }
}
