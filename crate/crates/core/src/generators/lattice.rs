//! Deterministic lattices and their finite boxes.

use std::rc::Rc;

use serde_json::json;

use super::{GraphSource, Instance, SourceDescriptor};
use crate::error::{Error, Result};
use crate::graph::{LocalGraph, VertexId};
use crate::rng::{self, CounterRng};

/// Bi-infinite path, vertex `[x]`.
pub struct PathGraph;

impl LocalGraph for PathGraph {
    fn root(&self) -> VertexId {
        VertexId::from_slice(&[0])
    }
    fn neighbors(&self, v: &VertexId) -> Result<Rc<[VertexId]>> {
        let [x] = v.parts() else { return Err(Error::InvalidVertex(v.clone())) };
        Ok(vec![VertexId::from_slice(&[x - 1]), VertexId::from_slice(&[x + 1])].into())
    }
    fn root_distance(&self, v: &VertexId) -> Option<usize> {
        Some(v.parts()[0].unsigned_abs() as usize)
    }
    fn is_tree(&self) -> bool {
        true
    }
    fn sphere_sizes(&self, max_d: usize) -> Option<Vec<f64>> {
        Some((0..=max_d).map(|d| if d == 0 { 1.0 } else { 2.0 }).collect())
    }
}

/// Cycle of length `n`, vertex `[x]` with `0 <= x < n`.
pub struct CycleGraph(pub usize);

impl LocalGraph for CycleGraph {
    fn root(&self) -> VertexId {
        VertexId::from_slice(&[0])
    }
    fn neighbors(&self, v: &VertexId) -> Result<Rc<[VertexId]>> {
        let n = self.0 as i32;
        let [x] = v.parts() else { return Err(Error::InvalidVertex(v.clone())) };
        if !(0..n).contains(x) {
            return Err(Error::InvalidVertex(v.clone()));
        }
        let mut out = vec![VertexId::from_slice(&[(x + 1) % n])];
        if n > 2 {
            out.push(VertexId::from_slice(&[(x + n - 1) % n]));
        }
        Ok(out.into())
    }
}

/// The square lattice, vertex `[x, y]`.
pub struct Z2Graph;

impl LocalGraph for Z2Graph {
    fn root(&self) -> VertexId {
        VertexId::from_slice(&[0, 0])
    }
    fn neighbors(&self, v: &VertexId) -> Result<Rc<[VertexId]>> {
        let [x, y] = v.parts() else { return Err(Error::InvalidVertex(v.clone())) };
        let (x, y) = (*x, *y);
        Ok([(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)]
            .iter()
            .map(|&(a, b)| VertexId::from_slice(&[a, b]))
            .collect::<Vec<_>>()
            .into())
    }
    fn root_distance(&self, v: &VertexId) -> Option<usize> {
        let p = v.parts();
        Some((p[0].unsigned_abs() + p[1].unsigned_abs()) as usize)
    }
}

/// The box `Q_n = [-n, n]^2` rooted at `root`.
pub struct BoxGraph {
    pub n: i32,
    pub root: (i32, i32),
}

impl LocalGraph for BoxGraph {
    fn root(&self) -> VertexId {
        VertexId::from_slice(&[self.root.0, self.root.1])
    }
    fn neighbors(&self, v: &VertexId) -> Result<Rc<[VertexId]>> {
        let n = self.n;
        let [x, y] = v.parts() else { return Err(Error::InvalidVertex(v.clone())) };
        let (x, y) = (*x, *y);
        if x.abs() > n || y.abs() > n {
            return Err(Error::InvalidVertex(v.clone()));
        }
        Ok([(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)]
            .iter()
            .filter(|(a, b)| a.abs() <= n && b.abs() <= n)
            .map(|&(a, b)| VertexId::from_slice(&[a, b]))
            .collect::<Vec<_>>()
            .into())
    }
    fn root_distance(&self, v: &VertexId) -> Option<usize> {
        let p = v.parts();
        Some(((p[0] - self.root.0).unsigned_abs() + (p[1] - self.root.1).unsigned_abs()) as usize)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PathSource;

impl GraphSource for PathSource {
    fn descriptor(&self) -> SourceDescriptor {
        SourceDescriptor::new("path", json!({}))
    }
    fn sample(&self, _seed: u64) -> Result<Instance> {
        Ok(Box::new(PathGraph))
    }
    fn is_deterministic(&self) -> bool {
        true
    }
    fn max_degree(&self) -> Option<usize> {
        Some(2)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CycleSource(pub usize);

impl GraphSource for CycleSource {
    fn descriptor(&self) -> SourceDescriptor {
        SourceDescriptor::new("cycle", json!({ "n": self.0 }))
    }
    fn sample(&self, _seed: u64) -> Result<Instance> {
        Ok(Box::new(CycleGraph(self.0)))
    }
    fn is_deterministic(&self) -> bool {
        true
    }
    fn max_degree(&self) -> Option<usize> {
        Some(2)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Z2Source;

impl GraphSource for Z2Source {
    fn descriptor(&self) -> SourceDescriptor {
        SourceDescriptor::new("z2", json!({}))
    }
    fn sample(&self, _seed: u64) -> Result<Instance> {
        Ok(Box::new(Z2Graph))
    }
    fn is_deterministic(&self) -> bool {
        true
    }
    fn max_degree(&self) -> Option<usize> {
        Some(4)
    }
}

/// `Q_n` with a uniform root.
#[derive(Clone, Copy, Debug)]
pub struct BoxSource(pub usize);

impl GraphSource for BoxSource {
    fn descriptor(&self) -> SourceDescriptor {
        SourceDescriptor::new("box", json!({ "n": self.0 }))
    }
    fn sample(&self, seed: u64) -> Result<Instance> {
        let n = self.0 as i32;
        let side = (2 * n + 1) as u64;
        let mut r = CounterRng::new(rng::key(&[seed, 0xb0c5]));
        let k = r.below(side * side);
        let root = ((k % side) as i32 - n, (k / side) as i32 - n);
        Ok(Box::new(BoxGraph { n, root }))
    }
    fn max_degree(&self) -> Option<usize> {
        Some(4)
    }
}
