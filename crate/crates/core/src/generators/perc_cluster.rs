//! The open cluster of the root under Bernoulli bond percolation on a base
//! instance, optionally conditioned (by retries) on reaching a given
//! intrinsic radius.

use std::collections::{HashMap, VecDeque};
use std::rc::Rc;

use serde_json::json;

use super::memo::Memo;
use super::{GraphSource, Instance, SourceDescriptor};
use crate::error::{Error, Result};
use crate::graph::{cluster_cap, edge_key, LocalGraph, VertexId};
use crate::rng;

pub struct PercClusterSource {
    base: Box<dyn GraphSource>,
    p: f64,
    condition_radius: Option<usize>,
    max_retries: usize,
}

impl PercClusterSource {
    pub fn new(base: Box<dyn GraphSource>, p: f64, condition_radius: Option<usize>, max_retries: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p = {p} is not a probability")));
        }
        Ok(Self { base, p, condition_radius, max_retries: max_retries.max(1) })
    }
}

impl GraphSource for PercClusterSource {
    fn descriptor(&self) -> SourceDescriptor {
        SourceDescriptor::new(
            "perc_cluster",
            json!({
                "base": self.base.descriptor().to_json(),
                "p": self.p,
                "condition_radius": self.condition_radius,
                "max_retries": self.max_retries,
            }),
        )
    }

    fn sample(&self, seed: u64) -> Result<Instance> {
        for attempt in 0..self.max_retries as u64 {
            let s = rng::key(&[seed, attempt]);
            let g = OpenCluster {
                base: self.base.sample(s)?,
                p: self.p,
                key: rng::key(&[s, 0x9e7c]),
                memo: Memo::default(),
            };
            match self.condition_radius {
                None => return Ok(Box::new(g)),
                Some(r) if g.reaches(r)? => return Ok(Box::new(g)),
                Some(_) => {}
            }
        }
        Err(Error::RetryCap(self.max_retries))
    }

    fn max_degree(&self) -> Option<usize> {
        self.base.max_degree()
    }
}

pub struct OpenCluster {
    base: Instance,
    p: f64,
    key: u64,
    memo: Memo,
}

impl OpenCluster {
    fn open(&self, x: &VertexId, y: &VertexId) -> bool {
        rng::uniform_at(self.key, edge_key(x, y)) < self.p
    }

    /// Whether the cluster contains a vertex at intrinsic distance `r`.
    fn reaches(&self, r: usize) -> Result<bool> {
        let o = self.root();
        let mut dist = HashMap::new();
        dist.insert(o.clone(), 0usize);
        let mut q = VecDeque::from([o]);
        let cap = cluster_cap();
        while let Some(v) = q.pop_front() {
            let d = dist[&v];
            if d >= r {
                return Ok(true);
            }
            for w in self.neighbors(&v)?.iter() {
                if !dist.contains_key(w) {
                    if dist.len() >= cap {
                        return Err(Error::BudgetExceeded { cap });
                    }
                    dist.insert(w.clone(), d + 1);
                    q.push_back(w.clone());
                }
            }
        }
        Ok(false)
    }
}

impl LocalGraph for OpenCluster {
    fn root(&self) -> VertexId {
        self.base.root()
    }

    fn neighbors(&self, v: &VertexId) -> Result<Rc<[VertexId]>> {
        self.memo.get_or(v, || {
            Ok(self.base.neighbors(v)?.iter().filter(|w| self.open(v, w)).cloned().collect())
        })
    }

    fn root_distance(&self, _v: &VertexId) -> Option<usize> {
        None
    }

    fn edge_label(&self, u: &VertexId, v: &VertexId) -> i64 {
        self.base.edge_label(u, v)
    }

    fn level(&self, v: &VertexId) -> Option<i64> {
        self.base.level(v)
    }

    fn is_tree(&self) -> bool {
        self.base.is_tree()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Z2Source;
    use crate::graph::ball;

    #[test]
    fn extreme_p() {
        let full = PercClusterSource::new(Box::new(Z2Source), 1.0, None, 1).unwrap();
        let g = full.sample(1).unwrap();
        assert_eq!(ball(&g, &g.root(), 2).unwrap().vertex_count(), 13);
        let empty = PercClusterSource::new(Box::new(Z2Source), 0.0, None, 1).unwrap();
        let g = empty.sample(1).unwrap();
        assert_eq!(ball(&g, &g.root(), 2).unwrap().vertex_count(), 1);
    }

    #[test]
    fn supercritical_lattice_mostly_survives() {
        let src = PercClusterSource::new(Box::new(Z2Source), 0.9, None, 1).unwrap();
        let mut ok = 0;
        for seed in 0..40 {
            let g = src.sample(seed).unwrap();
            let b = ball(&g, &g.root(), 50).unwrap();
            ok += usize::from(b.dist.iter().any(|&d| d == 50));
        }
        assert!(ok >= 30, "{ok}");
    }

    #[test]
    fn retry_cap_reported() {
        let src = PercClusterSource::new(Box::new(Z2Source), 0.0, Some(1), 5).unwrap();
        assert!(matches!(src.sample(0), Err(Error::RetryCap(5))));
    }
}
