use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

/// Explicit finite simple graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
    #[serde(skip)]
    adj: Vec<Vec<(u32, u32)>>,
}

impl FiniteGraph {
    /// Builds a graph from an edge list; each pair is stored as given.
    pub fn new(n: usize, edges: Vec<(u32, u32)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (i, &(a, b)) in edges.iter().enumerate() {
            assert!((a as usize) < n && (b as usize) < n && a != b, "bad edge ({a},{b})");
            adj[a as usize].push((b, i as u32));
            adj[b as usize].push((a, i as u32));
        }
        Self { n, edges, adj }
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n as u32).map(|i| (i - 1, i)).collect())
    }

    pub fn cycle(n: usize) -> Self {
        let mut e: Vec<(u32, u32)> = (1..n as u32).map(|i| (i - 1, i)).collect();
        e.push((n as u32 - 1, 0));
        Self::new(n, e)
    }

    /// The box `[-n, n]^2` with vertex `(x, y)` at index `(y + n) * (2n + 1) + (x + n)`.
    pub fn grid_box(n: usize) -> Self {
        let side = 2 * n + 1;
        let idx = |x: usize, y: usize| (y * side + x) as u32;
        let mut e = Vec::with_capacity(2 * side * (side - 1));
        for y in 0..side {
            for x in 0..side {
                if x + 1 < side {
                    e.push((idx(x, y), idx(x + 1, y)));
                }
                if y + 1 < side {
                    e.push((idx(x, y), idx(x, y + 1)));
                }
            }
        }
        Self::new(side * side, e)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// `(neighbor, edge index)` pairs of `v`.
    pub fn incident(&self, v: u32) -> &[(u32, u32)] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    /// BFS distances from `src` using only edges accepted by `open`.
    pub fn bfs_with(&self, src: u32, open: impl Fn(usize) -> bool) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        dist[src as usize] = Some(0);
        let mut q = VecDeque::from([src]);
        while let Some(v) = q.pop_front() {
            let d = dist[v as usize].unwrap();
            for &(w, e) in &self.adj[v as usize] {
                if dist[w as usize].is_none() && open(e as usize) {
                    dist[w as usize] = Some(d + 1);
                    q.push_back(w);
                }
            }
        }
        dist
    }

    pub fn bfs(&self, src: u32) -> Vec<Option<u32>> {
        self.bfs_with(src, |_| true)
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.bfs(0).iter().all(Option::is_some)
    }

    pub fn is_tree(&self) -> bool {
        self.n > 0 && self.edges.len() + 1 == self.n && self.is_connected()
    }

    /// Length of the shortest cycle, `None` if acyclic.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..self.n as u32 {
            let mut dist = vec![u32::MAX; self.n];
            let mut via = vec![u32::MAX; self.n];
            dist[s as usize] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &(w, e) in &self.adj[v as usize] {
                    if e == via[v as usize] {
                        continue;
                    }
                    if dist[w as usize] == u32::MAX {
                        dist[w as usize] = dist[v as usize] + 1;
                        via[w as usize] = e;
                        q.push_back(w);
                    } else {
                        let len = (dist[v as usize] + dist[w as usize] + 1) as usize;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Subgraph induced by `keep` (given as sorted-or-not original indices).
    /// Returns the new graph and the map old index -> new index.
    pub fn induced(&self, keep: &[u32]) -> (Self, Vec<Option<u32>>) {
        let mut map = vec![None; self.n];
        for (i, &v) in keep.iter().enumerate() {
            map[v as usize] = Some(i as u32);
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((map[a as usize]?, map[b as usize]?)))
            .collect();
        (Self::new(keep.len(), edges), map)
    }
}

impl<'de> Deserialize<'de> for FiniteGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            n: usize,
            edges: Vec<(u32, u32)>,
        }
        let w = Wire::deserialize(d)?;
        if w.edges.iter().any(|&(a, b)| a == b || a as usize >= w.n || b as usize >= w.n) {
            return Err(serde::de::Error::custom("edge endpoint out of range or loop"));
        }
        Ok(FiniteGraph::new(w.n, w.edges))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn girth_examples() {
        assert_eq!(FiniteGraph::path(5).girth(), None);
        assert_eq!(FiniteGraph::cycle(3).girth(), Some(3));
        assert_eq!(FiniteGraph::cycle(7).girth(), Some(7));
        assert_eq!(FiniteGraph::grid_box(1).girth(), Some(4));
    }

    #[test]
    fn box_counts() {
        let q1 = FiniteGraph::grid_box(1);
        assert_eq!(q1.vertex_count(), 9);
        assert_eq!(q1.edge_count(), 12);
        assert_eq!(q1.degree(0), 2);
        assert_eq!(q1.degree(4), 4);
    }

    #[test]
    fn tree_detection() {
        assert!(FiniteGraph::path(4).is_tree());
        assert!(!FiniteGraph::cycle(4).is_tree());
        assert!(!FiniteGraph::new(3, vec![(0, 1)]).is_tree());
    }
}
