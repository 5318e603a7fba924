use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ball_cap, FiniteGraph, LocalGraph, VertexId};

/// Induced ball `B(center, radius)` with its edge boundary.
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: VertexId,
    pub radius: usize,
    /// Vertices in BFS order; index 0 is the center.
    pub vertices: Vec<VertexId>,
    /// Distance from the center, parallel to `vertices`.
    pub dist: Vec<u32>,
    /// Induced edges as index pairs into `vertices`.
    pub edges: Vec<(u32, u32)>,
    /// Boundary edges `(e-, e+)`: inner endpoint index and the outside vertex.
    pub boundary: Vec<(u32, VertexId)>,
}

/// Extracts `B(center, r)` from `g`, failing if more than the exploration cap
/// of vertices would be touched.
pub fn ball<G: LocalGraph + ?Sized>(g: &G, center: &VertexId, r: usize) -> Result<Ball> {
    ball_with_cap(g, center, r, ball_cap())
}

pub fn ball_with_cap<G: LocalGraph + ?Sized>(
    g: &G,
    center: &VertexId,
    r: usize,
    cap: usize,
) -> Result<Ball> {
    let mut index: HashMap<VertexId, u32> = HashMap::new();
    let mut vertices = vec![center.clone()];
    let mut dist = vec![0u32];
    index.insert(center.clone(), 0);
    let mut nbrs: Vec<std::rc::Rc<[VertexId]>> = Vec::new();
    let mut head = 0;
    while head < vertices.len() {
        let v = vertices[head].clone();
        let d = dist[head];
        let ns = g.neighbors(&v)?;
        if (d as usize) < r {
            for w in ns.iter() {
                if !index.contains_key(w) {
                    if vertices.len() >= cap {
                        return Err(Error::BudgetExceeded { cap });
                    }
                    index.insert(w.clone(), vertices.len() as u32);
                    vertices.push(w.clone());
                    dist.push(d + 1);
                }
            }
        }
        nbrs.push(ns);
        head += 1;
    }
    let mut directed: Vec<(u32, u32)> = Vec::new();
    let mut boundary = Vec::new();
    for (i, ns) in nbrs.iter().enumerate() {
        for w in ns.iter() {
            match index.get(w) {
                Some(&j) => directed.push((i as u32, j)),
                None => boundary.push((i as u32, w.clone())),
            }
        }
    }
    // symmetry: every induced pair must be seen from both ends
    let mut norm: Vec<(u32, u32, bool)> = directed
        .iter()
        .map(|&(a, b)| if a < b { (a, b, true) } else { (b, a, false) })
        .collect();
    norm.sort_unstable();
    let mut edges = Vec::with_capacity(norm.len() / 2);
    let mut k = 0;
    while k < norm.len() {
        let (a, b, _) = norm[k];
        let mut fwd = 0;
        let mut bwd = 0;
        while k < norm.len() && norm[k].0 == a && norm[k].1 == b {
            if norm[k].2 {
                fwd += 1;
            } else {
                bwd += 1;
            }
            k += 1;
        }
        if fwd != 1 || bwd != 1 {
            return Err(Error::Asymmetric(
                vertices[a as usize].clone(),
                vertices[b as usize].clone(),
            ));
        }
        edges.push((a, b));
    }
    Ok(Ball {
        center: center.clone(),
        radius: r,
        vertices,
        dist,
        edges,
        boundary,
    })
}

impl Ball {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn graph(&self) -> FiniteGraph {
        FiniteGraph::new(self.vertices.len(), self.edges.clone())
    }

    /// The sub-ball of radius `r <= self.radius`, indices preserved in BFS order.
    pub fn restrict(&self, r: usize) -> Ball {
        assert!(r <= self.radius);
        if r == self.radius {
            return self.clone();
        }
        let n = self.dist.partition_point(|&d| d as usize <= r);
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| (a as usize) < n && (b as usize) < n)
            .collect();
        let mut boundary: Vec<(u32, VertexId)> = Vec::new();
        for &(a, b) in &self.edges {
            let (ia, ib) = (a as usize, b as usize);
            if ia < n && ib >= n {
                boundary.push((a, self.vertices[ib].clone()));
            } else if ib < n && ia >= n {
                boundary.push((b, self.vertices[ia].clone()));
            }
        }
        boundary.sort_by_key(|(i, _)| *i);
        Ball {
            center: self.center.clone(),
            radius: r,
            vertices: self.vertices[..n].to_vec(),
            dist: self.dist[..n].to_vec(),
            edges,
            boundary,
        }
    }

    /// View as a rooted finite set with boundary, for the phi computations.
    pub fn rooted_set(&self) -> RootedSet {
        RootedSet {
            graph: self.graph(),
            root: 0,
            boundary: self.boundary.iter().map(|(i, _)| *i).collect(),
        }
    }

    /// Sphere sizes `|S(center, d)|` for `d = 0..=radius+1` (the last from the boundary,
    /// counting distinct outside vertices).
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut s = vec![0usize; self.radius + 2];
        for &d in &self.dist {
            s[d as usize] += 1;
        }
        let mut outer: Vec<&VertexId> = self.boundary.iter().map(|(_, w)| w).collect();
        outer.sort();
        outer.dedup();
        s[self.radius + 1] = outer.len();
        s
    }
}

#[derive(Serialize)]
struct BallWire<'a> {
    center: &'a VertexId,
    radius: usize,
    vertices: &'a [VertexId],
    edges: Vec<(&'a VertexId, &'a VertexId)>,
    boundary: Vec<(&'a VertexId, &'a VertexId)>,
}

impl Serialize for Ball {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BallWire {
            center: &self.center,
            radius: self.radius,
            vertices: &self.vertices,
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| (&self.vertices[a as usize], &self.vertices[b as usize]))
                .collect(),
            boundary: self
                .boundary
                .iter()
                .map(|(a, w)| (&self.vertices[*a as usize], w))
                .collect(),
        }
        .serialize(s)
    }
}

/// A finite connected vertex set `S` containing the root, with the inner
/// endpoints of its boundary edges (one entry per boundary edge).
#[derive(Clone, Debug)]
pub struct RootedSet {
    pub graph: FiniteGraph,
    pub root: u32,
    pub boundary: Vec<u32>,
}

impl RootedSet {
    pub fn new(graph: FiniteGraph, root: u32, boundary: Vec<u32>) -> Self {
        Self { graph, root, boundary }
    }

    /// Builds the set induced by `members` (must contain `g.root()`), reading
    /// boundary edges from the neighbor oracle.
    pub fn from_vertices<G: LocalGraph + ?Sized>(g: &G, members: &[VertexId]) -> Result<Self> {
        let root = g.root();
        let index: HashMap<&VertexId, u32> =
            members.iter().enumerate().map(|(i, v)| (v, i as u32)).collect();
        let &root_idx = index.get(&root).ok_or(Error::RootNotInSet)?;
        let mut edges = Vec::new();
        let mut boundary = Vec::new();
        for (i, v) in members.iter().enumerate() {
            for w in g.neighbors(v)?.iter() {
                match index.get(w) {
                    Some(&j) if (i as u32) < j => edges.push((i as u32, j)),
                    Some(_) => {}
                    None => boundary.push(i as u32),
                }
            }
        }
        let graph = FiniteGraph::new(members.len(), edges);
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(Self { graph, root: root_idx, boundary })
    }

    /// Checks the structural preconditions shared by the exact phi methods.
    pub fn validate(&self) -> Result<()> {
        if self.root as usize >= self.graph.vertex_count() {
            return Err(Error::RootNotInSet);
        }
        if !self.graph.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(())
    }
}
