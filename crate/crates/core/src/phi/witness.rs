use serde::Serialize;

use super::{expected_phi_radii, phi_of_set, MethodChoice, PhiOptions, PhiResult};
use crate::error::Result;
use crate::generators::GraphSource;
use crate::graph::{ball, LocalGraph, RootedSet, VertexId};
use crate::percolation::ORACLE_EDGE_CAP;
use crate::report::EstimateReport;

/// Percolation replicas when a candidate set is too large for the exact methods.
const WITNESS_MC_REPLICAS: usize = 4000;
/// Largest starting set for greedy trimming.
const GREEDY_CAP: usize = 64;

/// A finite set `S` around the root with `phi_p(S) < 1`.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    /// Radius when `S` is a ball.
    pub radius: Option<usize>,
    pub vertices: Vec<VertexId>,
    pub phi: PhiResult,
}

/// First ball `B(o, r)`, `r <= r_max`, with `phi_p < 1` (upper CI end for Monte
/// Carlo values), then optionally greedy vertex removal starting from `B(o, r_max)`.
/// `None` only means the searched family holds no witness.
pub fn witness_search(g: &dyn LocalGraph, p: f64, r_max: usize, greedy: bool) -> Result<Option<Witness>> {
    let big = ball(g, &g.root(), r_max)?;
    for r in 0..=r_max {
        let b = big.restrict(r);
        let phi = phi_of_set(&b.rooted_set(), p, MethodChoice::Auto, WITNESS_MC_REPLICAS, r as u64)?;
        if phi.upper() < 1.0 {
            return Ok(Some(Witness { radius: Some(r), vertices: b.vertices, phi }));
        }
    }
    if greedy && big.vertex_count() <= GREEDY_CAP {
        return greedy_trim(g, p, big.vertices);
    }
    Ok(None)
}

fn exact_phi(s: &RootedSet, p: f64) -> Option<PhiResult> {
    if s.graph.is_tree() || s.graph.edge_count() <= ORACLE_EDGE_CAP {
        phi_of_set(s, p, MethodChoice::Auto, 0, 0).ok()
    } else {
        None
    }
}

fn greedy_trim(g: &dyn LocalGraph, p: f64, mut members: Vec<VertexId>) -> Result<Option<Witness>> {
    let root = g.root();
    let Some(mut cur) = exact_phi(&RootedSet::from_vertices(g, &members)?, p) else {
        return Ok(None);
    };
    loop {
        let mut best: Option<(usize, PhiResult)> = None;
        for i in 0..members.len() {
            if members[i] == root {
                continue;
            }
            let mut cand = members.clone();
            cand.remove(i);
            let Ok(s) = RootedSet::from_vertices(g, &cand) else { continue };
            if let Some(phi) = exact_phi(&s, p) {
                if best.as_ref().map_or(true, |(_, b)| phi.value < b.value) {
                    best = Some((i, phi));
                }
            }
        }
        match best {
            Some((i, phi)) if phi.value < cur.value => {
                members.remove(i);
                cur = phi;
                if cur.value < 1.0 {
                    return Ok(Some(Witness { radius: None, vertices: members, phi: cur }));
                }
            }
            _ => return Ok(None),
        }
    }
}

/// Annealed phi per radius with a least-squares fit `log E phi ~ a + r log(rate)`.
#[derive(Clone, Debug, Serialize)]
pub struct DecayDiagnostic {
    pub rows: Vec<EstimateReport>,
    pub rate: f64,
    /// Set when the fitted rate is at least one.
    pub growth: bool,
}

pub fn phi_decay_diagnostic(
    src: &dyn GraphSource,
    p: f64,
    radii: &[usize],
    replicas: usize,
    seed: u64,
    opts: &PhiOptions,
) -> Result<DecayDiagnostic> {
    let rows = expected_phi_radii(src, radii, p, opts, replicas, seed)?.rows;
    let pts: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.estimate > 0.0).map(|r| (r.radius as f64, r.estimate.ln())).collect();
    let rate = if pts.len() < 2 {
        f64::NAN
    } else {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|q| q.0).sum::<f64>() / n;
        let my = pts.iter().map(|q| q.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|q| (q.0 - mx).powi(2)).sum();
        (sxy / sxx).exp()
    };
    Ok(DecayDiagnostic { rows, rate, growth: rate >= 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{CanopySource, GklSource, PathSource, UgwSource};

    #[test]
    fn path_first_ball_witness() {
        let g = PathSource.sample(0).unwrap();
        // 2 * 0.9^7 = 0.956 already beats 1, so B(o, 6) comes before B(o, 7)
        let w = witness_search(&*g, 0.9, 10, false).unwrap().unwrap();
        assert_eq!(w.radius, Some(6));
        assert!((w.phi.value - 2.0 * 0.9f64.powi(7)).abs() < 1e-12);
        let b7 = ball(&*g, &g.root(), 7).unwrap();
        let phi7 = super::super::phi_tree(&b7.rooted_set(), 0.9).unwrap().value;
        assert!((phi7 - 0.861).abs() < 1e-3);
    }

    #[test]
    fn zero_p_root_alone() {
        let g = UgwSource::regular3().sample(1).unwrap();
        let w = witness_search(&*g, 0.0, 3, false).unwrap().unwrap();
        assert_eq!(w.radius, Some(0));
        assert_eq!(w.vertices.len(), 1);
    }

    #[test]
    fn regular_tree_supercritical_has_no_ball_witness() {
        let g = UgwSource::regular3().sample(2).unwrap();
        assert!(witness_search(&*g, 0.6, 8, false).unwrap().is_none());
    }

    #[test]
    fn greedy_runs_on_small_sets() {
        let g = UgwSource::regular3().sample(2).unwrap();
        // trimming a radius-2 ball at p = 0.45 only ever removes leaves
        let w = witness_search(&*g, 0.45, 2, true).unwrap();
        if let Some(w) = w {
            assert!(w.phi.value < 1.0);
        }
    }

    #[test]
    fn decay_rates() {
        let opts = PhiOptions::default();
        let d = phi_decay_diagnostic(&PathSource, 0.5, &[1, 2, 3, 4, 5], 2, 1, &opts).unwrap();
        assert!((d.rate - 0.5).abs() < 1e-9);
        assert!(!d.growth);
        let strat = PhiOptions { stratified: true, ..opts };
        let d = phi_decay_diagnostic(&CanopySource::new(), 0.8, &[2, 4, 6, 8, 10], 1, 1, &strat).unwrap();
        assert!(d.growth && d.rate > 1.05, "{d:?}");
        let d = phi_decay_diagnostic(&GklSource::new(3, 5).unwrap(), 0.15, &[0, 1, 2, 3], 2000, 1, &opts).unwrap();
        assert!(d.rate < 1.0, "{d:?}");
    }
}
