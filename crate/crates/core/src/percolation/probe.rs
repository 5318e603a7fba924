//! Monte Carlo probes of the open cluster of the root on lazily explored
//! instances. Edge `{x, y}` of replica `i` is open iff the uniform at counter
//! `edge_key(x, y)` in stream `(seed, i)` is below `p`, so runs at different
//! `p` with the same seed are monotonically coupled.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{replica_seed, GraphSource};
use crate::graph::{ball, cluster_cap, edge_key, LocalGraph, VertexId};
use crate::report::{source_hash, EstimateReport};
use crate::rng;
use crate::stats::{wilson_interval, Summary, Z95};

/// Percolation stream of replica `i`.
pub fn perc_key(seed: u64, replica: u64) -> u64 {
    rng::key(&[seed, replica, 0x9e7c0])
}

#[inline]
pub fn edge_open(key: u64, x: &VertexId, y: &VertexId, p: f64) -> bool {
    rng::uniform_at(key, edge_key(x, y)) < p
}

/// Graph distances from the root, either from the generator or from an
/// extracted ball.
enum Dist {
    Direct,
    Table(HashMap<VertexId, u32>),
}

impl Dist {
    fn new(g: &dyn LocalGraph, r: usize) -> Result<Self> {
        let o = g.root();
        if g.root_distance(&o).is_some() {
            return Ok(Dist::Direct);
        }
        let b = ball(g, &o, r)?;
        Ok(Dist::Table(b.vertices.into_iter().zip(b.dist).collect()))
    }

    /// Distance, or `None` when known to exceed the extraction radius.
    fn get(&self, g: &dyn LocalGraph, v: &VertexId) -> Option<usize> {
        match self {
            Dist::Direct => g.root_distance(v),
            Dist::Table(t) => t.get(v).map(|&d| d as usize),
        }
    }
}

/// Largest distance from the root reached by its open cluster, capped at `rmax`.
pub fn cluster_reach(g: &dyn LocalGraph, p: f64, key: u64, rmax: usize) -> Result<usize> {
    let o = g.root();
    if rmax == 0 {
        return Ok(0);
    }
    let dist = Dist::new(g, rmax)?;
    let cap = cluster_cap();
    let mut seen = HashSet::new();
    seen.insert(o.clone());
    let mut stack = vec![(o, 0usize)];
    let mut best = 0;
    while let Some((v, d)) = stack.pop() {
        for w in g.neighbors(&v)?.iter() {
            if seen.contains(w) || !edge_open(key, &v, w, p) {
                continue;
            }
            let dw = dist.get(g, w).unwrap_or(rmax).min(rmax);
            if dw >= rmax {
                return Ok(rmax);
            }
            best = best.max(dw);
            if seen.len() >= cap {
                return Err(Error::BudgetExceeded { cap });
            }
            seen.insert(w.clone());
            stack.push((w.clone(), d + 1));
        }
    }
    Ok(best)
}

/// Sizes of the open cluster of the root inside `B(o, r)` (open paths staying
/// in the ball), for each `r` in `radii`.
pub fn cluster_sizes_in_balls(g: &dyn LocalGraph, p: f64, key: u64, radii: &[usize]) -> Result<Vec<f64>> {
    let rmax = radii.iter().copied().max().unwrap_or(0);
    let dist = Dist::new(g, rmax)?;
    let cap = cluster_cap();
    let explore = |r: usize| -> Result<Vec<usize>> {
        let o = g.root();
        let mut hist = vec![0usize; r + 1];
        let mut seen = HashSet::new();
        seen.insert(o.clone());
        hist[0] = 1;
        let mut q = VecDeque::from([o]);
        while let Some(v) = q.pop_front() {
            for w in g.neighbors(&v)?.iter() {
                if seen.contains(w) || !edge_open(key, &v, w, p) {
                    continue;
                }
                let Some(dw) = dist.get(g, w).filter(|&d| d <= r) else { continue };
                if seen.len() >= cap {
                    return Err(Error::BudgetExceeded { cap });
                }
                seen.insert(w.clone());
                hist[dw] += 1;
                q.push_back(w.clone());
            }
        }
        Ok(hist)
    };
    if g.is_tree() {
        // paths in a tree are geodesic, so one exploration serves every radius
        let hist = explore(rmax)?;
        return Ok(radii.iter().map(|&r| hist[..=r].iter().sum::<usize>() as f64).collect());
    }
    radii.iter().map(|&r| explore(r).map(|h| h.iter().sum::<usize>() as f64)).collect()
}

fn proportion_report(
    experiment: &str,
    src: &dyn GraphSource,
    p: f64,
    radius: usize,
    successes: usize,
    n: usize,
    seed: u64,
) -> EstimateReport {
    let (lo, hi) = wilson_interval(successes, n, Z95);
    EstimateReport {
        experiment: experiment.to_string(),
        source_hash: source_hash(&src.descriptor().to_json()),
        p,
        radius,
        replicas: n,
        estimate: if n == 0 { f64::NAN } else { successes as f64 / n as f64 },
        ci_lo: lo,
        ci_hi: hi,
        seed,
    }
}

pub(crate) fn mean_report(
    experiment: &str,
    src: &dyn GraphSource,
    p: f64,
    radius: usize,
    values: &[f64],
    seed: u64,
) -> EstimateReport {
    let s = Summary::of(values);
    let (lo, hi) = s.ci();
    EstimateReport {
        experiment: experiment.to_string(),
        source_hash: source_hash(&src.descriptor().to_json()),
        p,
        radius,
        replicas: values.len(),
        estimate: s.mean,
        ci_lo: lo,
        ci_hi: hi,
        seed,
    }
}

/// `P(o <-> dB(o, R))` for every `R` in `radii`, from one exploration per
/// replica out to the largest radius.
pub fn survival_profile(
    src: &dyn GraphSource,
    p: f64,
    radii: &[usize],
    replicas: usize,
    seed: u64,
) -> Result<Vec<EstimateReport>> {
    let rmax = radii.iter().copied().max().unwrap_or(0);
    let reach: Vec<usize> = (0..replicas as u64)
        .into_par_iter()
        .map(|i| {
            let g = src.sample(replica_seed(seed, i))?;
            cluster_reach(&*g, p, perc_key(seed, i), rmax)
        })
        .collect::<Result<_>>()?;
    Ok(radii
        .iter()
        .map(|&r| {
            let k = reach.iter().filter(|&&d| d >= r).count();
            proportion_report("survival", src, p, r, k, replicas, seed)
        })
        .collect())
}

/// `P(o <-> dB(o, R))` with a Wilson interval.
pub fn survival_probe(src: &dyn GraphSource, p: f64, radius: usize, replicas: usize, seed: u64) -> Result<EstimateReport> {
    Ok(survival_profile(src, p, &[radius], replicas, seed)?.remove(0))
}

/// How instances are drawn for cluster-size probes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Sampling {
    /// A fresh instance per replica: estimates the root-averaged mean.
    Annealed,
    /// One fixed instance (sampled with this seed), fresh percolation per replica.
    Quenched(u64),
}

/// Truncated mean cluster sizes with the per-replica values behind them.
#[derive(Clone, Debug, Serialize)]
pub struct ClusterSizeTable {
    pub rows: Vec<EstimateReport>,
    /// `values[i][j]`: replica `i`, radius `radii[j]`.
    pub values: Vec<Vec<f64>>,
}

impl ClusterSizeTable {
    /// Largest single-replica value over the mean, per radius.
    pub fn max_over_mean(&self) -> Vec<f64> {
        self.rows
            .iter()
            .enumerate()
            .map(|(j, r)| self.values.iter().map(|v| v[j]).fold(0.0, f64::max) / r.estimate)
            .collect()
    }
}

/// `E|C_o ∩ B(o, R)|` for each `R` in `radii`.
pub fn expected_cluster_size_probe(
    src: &dyn GraphSource,
    p: f64,
    radii: &[usize],
    replicas: usize,
    seed: u64,
    sampling: Sampling,
) -> Result<ClusterSizeTable> {
    let values: Vec<Vec<f64>> = match sampling {
        Sampling::Annealed => (0..replicas as u64)
            .into_par_iter()
            .map(|i| {
                let g = src.sample(replica_seed(seed, i))?;
                cluster_sizes_in_balls(&*g, p, perc_key(seed, i), radii)
            })
            .collect::<Result<_>>()?,
        Sampling::Quenched(inst) => {
            let chunks = rayon::current_num_threads().max(1);
            let per = replicas.div_ceil(chunks);
            let parts: Vec<Vec<Vec<f64>>> = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let g = src.sample(inst)?;
                    (c * per..((c + 1) * per).min(replicas))
                        .map(|i| cluster_sizes_in_balls(&*g, p, perc_key(seed, i as u64), radii))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            parts.into_iter().flatten().collect()
        }
    };
    let experiment = match sampling {
        Sampling::Annealed => "cluster_size_annealed",
        Sampling::Quenched(_) => "cluster_size_quenched",
    };
    let rows = radii
        .iter()
        .enumerate()
        .map(|(j, &r)| {
            let col: Vec<f64> = values.iter().map(|v| v[j]).collect();
            mean_report(experiment, src, p, r, &col, seed)
        })
        .collect();
    Ok(ClusterSizeTable { rows, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{PathSource, UgwSource, Z2Source};

    #[test]
    fn survival_extremes() {
        let r = survival_probe(&Z2Source, 1.0, 10, 50, 1).unwrap();
        assert_eq!(r.estimate, 1.0);
        let r = survival_probe(&Z2Source, 0.0, 10, 50, 1).unwrap();
        assert_eq!(r.estimate, 0.0);
    }

    #[test]
    fn regular_tree_supercritical_survives() {
        let r = survival_probe(&UgwSource::regular3(), 0.75, 50, 400, 3).unwrap();
        assert!(r.ci_lo > 0.3, "{r:?}");
    }

    #[test]
    fn survival_nonincreasing_in_radius() {
        let rows = survival_profile(&UgwSource::regular3(), 0.55, &[5, 10, 20, 40], 500, 8).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].estimate <= w[0].estimate);
        }
    }

    #[test]
    fn survival_monotone_in_p() {
        let src = UgwSource::regular3();
        let mut last = 0.0;
        for p in [0.3, 0.45, 0.5, 0.6, 0.8] {
            let e = survival_probe(&src, p, 15, 300, 21).unwrap().estimate;
            assert!(e >= last);
            last = e;
        }
    }

    #[test]
    fn path_cluster_size_geometric() {
        let t = expected_cluster_size_probe(&PathSource, 0.5, &[1, 5, 40], 40_000, 4, Sampling::Annealed).unwrap();
        // 1 + 2 sum_{k<=R} p^k
        assert!((t.rows[0].estimate - 2.0).abs() < 0.03);
        assert!((t.rows[2].estimate - 3.0).abs() < 0.05, "{:?}", t.rows[2]);
        assert!(t.rows[0].estimate <= t.rows[1].estimate);
    }

    #[test]
    fn p_zero_cluster_is_root() {
        let t = expected_cluster_size_probe(&Z2Source, 0.0, &[0, 3], 10, 4, Sampling::Quenched(1)).unwrap();
        assert!(t.rows.iter().all(|r| r.estimate == 1.0));
    }
}
