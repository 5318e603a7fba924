//! The canopy tree: levels `L(0), L(1), ...`, where `L(0)` are leaves and every
//! vertex of `L(n+1)` has two children in `L(n)` and one parent in `L(n+2)`.
//!
//! Address `[a, b1, b2, ...]`: climb `a` steps from the root, then descend
//! along child indices `b`. The root's ancestors are reached through child 0,
//! so a canonical address with `a >= 1` has `b1 = 1`.

use std::rc::Rc;

use serde_json::json;

use super::memo::Memo;
use super::{GraphSource, Instance, SourceDescriptor};
use crate::error::{Error, Result};
use crate::graph::{LocalGraph, VertexId};
use crate::rng::{self, CounterRng};

/// Root levels above this are truncated; the discarded mass is below 1e-9.
pub const CANOPY_LEVEL_CAP: usize = 29;

pub struct CanopyGraph {
    level: usize,
    max_level: Option<usize>,
    memo: Memo,
}

impl CanopyGraph {
    /// Canopy rooted at a vertex of level `level`, optionally cut above `max_level`.
    pub fn new(level: usize, max_level: Option<usize>) -> Self {
        Self { level, max_level, memo: Memo::default() }
    }

    fn split(v: &VertexId) -> Option<(i64, &[i32])> {
        let p = v.parts();
        let (&a, path) = p.split_first()?;
        Some((a as i64, path))
    }

    fn level_of(&self, a: i64, path: &[i32]) -> i64 {
        self.level as i64 + a - path.len() as i64
    }

    fn valid(&self, v: &VertexId) -> bool {
        let Some((a, path)) = Self::split(v) else { return false };
        if a < 0 || path.iter().any(|&b| b != 0 && b != 1) {
            return false;
        }
        if a >= 1 && path.first() == Some(&0) {
            return false;
        }
        let lvl = self.level_of(a, path);
        lvl >= 0 && self.max_level.is_none_or(|m| lvl <= m as i64)
    }

    fn make(a: i64, path: &[i32]) -> VertexId {
        let mut parts = Vec::with_capacity(path.len() + 1);
        parts.push(a as i32);
        parts.extend_from_slice(path);
        VertexId::from_slice(&parts)
    }
}

impl LocalGraph for CanopyGraph {
    fn root(&self) -> VertexId {
        VertexId::from_slice(&[0])
    }

    fn neighbors(&self, v: &VertexId) -> Result<Rc<[VertexId]>> {
        if !self.valid(v) {
            return Err(Error::InvalidVertex(v.clone()));
        }
        self.memo.get_or(v, || {
            let (a, path) = Self::split(v).expect("validated");
            let lvl = self.level_of(a, path);
            let mut out = Vec::with_capacity(3);
            let top = self.max_level.is_some_and(|m| lvl == m as i64);
            if !top {
                match path.split_last() {
                    Some((_, rest)) => out.push(Self::make(a, rest)),
                    None => out.push(Self::make(a + 1, &[])),
                }
            }
            if lvl >= 1 {
                for c in 0..2 {
                    if path.is_empty() && a >= 1 && c == 0 {
                        out.push(Self::make(a - 1, &[]));
                    } else {
                        let mut p = path.to_vec();
                        p.push(c);
                        out.push(Self::make(a, &p));
                    }
                }
            }
            Ok(out)
        })
    }

    fn root_distance(&self, v: &VertexId) -> Option<usize> {
        let (a, path) = Self::split(v)?;
        Some(a as usize + path.len())
    }

    fn edge_label(&self, u: &VertexId, v: &VertexId) -> i64 {
        match (self.level(u), self.level(v)) {
            (Some(x), Some(y)) => x.min(y),
            _ => 0,
        }
    }

    fn level(&self, v: &VertexId) -> Option<i64> {
        let (a, path) = Self::split(v)?;
        Some(self.level_of(a, path))
    }

    fn is_tree(&self) -> bool {
        true
    }

    fn sphere_sizes(&self, max_d: usize) -> Option<Vec<f64>> {
        if self.max_level.is_some() {
            return None;
        }
        Some((0..=max_d).map(|d| canopy_sphere_count(self.level, d)).collect())
    }
}

/// Number of vertices at distance `d` from a root of level `n` in the canopy tree.
pub fn canopy_sphere_count(n: usize, d: usize) -> f64 {
    if d == 0 {
        return 1.0;
    }
    let (n, d) = (n as i64, d as i64);
    let mut total = 1.0;
    if d <= n {
        total += 2f64.powi(d as i32);
    }
    let lo = ((d - n + 1) / 2).max(1);
    for a in lo..d {
        total += 2f64.powi((d - a - 1) as i32);
    }
    total
}

/// The canopy tree with root level `n` drawn with probability proportional to
/// `decay^(-n)`. `decay = 2` is the unimodular law `2^(-n-1)`; any other value
/// is a deliberately wrong root law. With `max_level`, the finite canopy of
/// that height with a uniform root.
#[derive(Clone, Debug)]
pub struct CanopySource {
    pub decay: f64,
    pub max_level: Option<usize>,
    weights: Vec<f64>,
    cdf: Vec<f64>,
    tail: f64,
}

impl CanopySource {
    pub fn new() -> Self {
        Self::with_decay(2.0)
    }

    pub fn with_decay(decay: f64) -> Self {
        Self::build(decay, None)
    }

    pub fn truncated(max_level: usize) -> Self {
        Self::build(2.0, Some(max_level))
    }

    fn build(decay: f64, max_level: Option<usize>) -> Self {
        assert!(decay > 1.0, "level decay must exceed 1");
        let (raw, tail): (Vec<f64>, f64) = match max_level {
            Some(m) => ((0..=m).map(|n| 2f64.powi((m - n) as i32)).collect(), 0.0),
            None => {
                let mut n = 0;
                while decay.powi(-(n as i32 + 1)) >= 1e-9 {
                    n += 1;
                }
                let w = (0..=n).map(|k| decay.powi(-(k as i32))).collect();
                let tail = decay.powi(-(n as i32 + 1));
                (w, tail)
            }
        };
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let mut acc = 0.0;
        let cdf = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Self { decay, max_level, weights, cdf, tail }
    }

    /// Root-level probabilities after truncation.
    pub fn level_law(&self) -> &[f64] {
        &self.weights
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail
    }
}

impl Default for CanopySource {
    fn default() -> Self {
        Self::new()
    }
}

impl GraphSource for CanopySource {
    fn descriptor(&self) -> SourceDescriptor {
        let mut params = json!({ "tail_mass": self.tail });
        if self.decay != 2.0 {
            params["level_decay"] = json!(self.decay);
        }
        if let Some(m) = self.max_level {
            params["max_level"] = json!(m);
        }
        SourceDescriptor::new("canopy", params)
    }

    fn sample(&self, seed: u64) -> Result<Instance> {
        let mut r = CounterRng::new(rng::key(&[seed, 0xca_0097]));
        let level = rng::sample_cdf(&self.cdf, r.uniform());
        Ok(Box::new(CanopyGraph::new(level, self.max_level)))
    }

    fn strata(&self) -> Option<(Vec<f64>, f64)> {
        Some((self.weights.clone(), self.tail))
    }

    fn sample_stratum(&self, stratum: usize, _seed: u64) -> Result<Instance> {
        Ok(Box::new(CanopyGraph::new(stratum, self.max_level)))
    }

    fn strata_are_deterministic(&self) -> bool {
        true
    }

    fn max_degree(&self) -> Option<usize> {
        Some(3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ball, FiniteGraph};

    /// Explicit finite canopy of height `h`: a complete binary tree, vertices
    /// indexed heap-style with index 1 the top (level `h`).
    fn explicit(h: usize) -> (FiniteGraph, Vec<usize>) {
        let n = (1usize << (h + 1)) - 1;
        let mut edges = Vec::new();
        let mut level = vec![0; n];
        for i in 1..=n {
            level[i - 1] = h - (usize::BITS - 1 - i.leading_zeros()) as usize;
            if i > 1 {
                edges.push(((i / 2 - 1) as u32, (i - 1) as u32));
            }
        }
        (FiniteGraph::new(n, edges), level)
    }

    #[test]
    fn sphere_counts_match_explicit_construction() {
        let h = 14;
        let (g, level) = explicit(h);
        for n in 0..5 {
            // a level-n vertex deep inside: leftmost descendant chain avoids the top
            let v = (0..level.len()).find(|&i| level[i] == n).unwrap();
            let d = g.bfs(v as u32);
            for dist in 0..=8 {
                let c = d.iter().filter(|x| **x == Some(dist as u32)).count();
                assert_eq!(c as f64, canopy_sphere_count(n, dist), "n={n} d={dist}");
            }
        }
        assert_eq!(canopy_sphere_count(0, 1), 1.0);
        assert_eq!(canopy_sphere_count(0, 2), 2.0);
    }

    #[test]
    fn lazy_spheres_match_formula() {
        for n in 0..6 {
            let g = CanopyGraph::new(n, None);
            let b = ball(&g, &g.root(), 7).unwrap();
            let s = b.sphere_sizes();
            for d in 0..=7 {
                assert_eq!(s[d] as f64, canopy_sphere_count(n, d), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn leaf_root_small_balls() {
        let g = CanopyGraph::new(0, None);
        let b1 = ball(&g, &g.root(), 1).unwrap();
        assert_eq!(b1.vertex_count(), 2);
        assert_eq!(b1.edges.len(), 1);
        assert_eq!(b1.boundary.len(), 2);
        // leaf, parent, sibling, grandparent
        assert_eq!(ball(&g, &g.root(), 2).unwrap().vertex_count(), 4);
        let gp = VertexId::from_slice(&[2]);
        assert_eq!(crate::graph::distance(&g, &g.root(), &gp, 5).unwrap(), Some(2));
    }

    #[test]
    fn degrees_by_level() {
        let g = CanopyGraph::new(3, None);
        let b = ball(&g, &g.root(), 5).unwrap();
        for (i, v) in b.vertices.iter().enumerate() {
            if (b.dist[i] as usize) < 5 {
                let deg = g.neighbors(v).unwrap().len();
                let lvl = g.level(v).unwrap();
                assert_eq!(deg, if lvl == 0 { 1 } else { 3 });
            }
        }
    }

    #[test]
    fn truncation_mass_is_small() {
        let s = CanopySource::new();
        assert!(s.tail_mass() < 1e-9);
        assert!((s.level_law()[0] - 0.5).abs() < 1e-8);
        assert!((s.level_law()[3] - 1.0 / 16.0).abs() < 1e-8);
    }

    #[test]
    fn finite_canopy_is_uniform_tree() {
        let s = CanopySource::truncated(3);
        assert!((s.level_law()[0] - 8.0 / 15.0).abs() < 1e-12);
        let g = CanopyGraph::new(0, Some(3));
        let b = ball(&g, &g.root(), 10).unwrap();
        assert_eq!(b.vertex_count(), 15);
    }
}
