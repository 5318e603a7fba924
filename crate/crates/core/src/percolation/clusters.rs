use crate::graph::FiniteGraph;

use super::PercConfig;

/// Disjoint-set forest with union by size and path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        true
    }

    pub fn same(&mut self, a: u32, b: u32) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn size_of(&mut self, a: u32) -> usize {
        let r = self.find(a);
        self.size[r as usize] as usize
    }
}

/// Open clusters of a percolation configuration.
#[derive(Clone, Debug)]
pub struct ClusterPartition {
    uf: UnionFind,
    n: usize,
}

impl ClusterPartition {
    pub fn same_cluster(&mut self, a: u32, b: u32) -> bool {
        self.uf.same(a, b)
    }

    pub fn cluster_size(&mut self, v: u32) -> usize {
        self.uf.size_of(v)
    }

    /// Sizes of all clusters, largest first.
    pub fn sizes(&mut self) -> Vec<usize> {
        let mut out = Vec::new();
        for v in 0..self.n as u32 {
            if self.uf.find(v) == v {
                out.push(self.uf.size_of(v));
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn count(&mut self) -> usize {
        (0..self.n as u32).filter(|&v| self.uf.find(v) == v).count()
    }
}

pub fn clusters(g: &FiniteGraph, cfg: &PercConfig) -> ClusterPartition {
    let mut uf = UnionFind::new(g.vertex_count());
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        if cfg.is_open(i) {
            uf.union(a, b);
        }
    }
    ClusterPartition { uf, n: g.vertex_count() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::percolation::percolate;

    #[test]
    fn extremes() {
        let g = FiniteGraph::grid_box(2);
        assert_eq!(clusters(&g, &percolate(&g, 0.0, 0, 0)).count(), 25);
        assert_eq!(clusters(&g, &percolate(&g, 1.0, 0, 0)).count(), 1);
    }

    #[test]
    fn four_cycle_one_closed() {
        let g = FiniteGraph::cycle(4);
        let cfg = PercConfig::from_fn(4, 0.5, 0, |i| i != 2);
        let mut c = clusters(&g, &cfg);
        assert_eq!(c.sizes(), vec![4]);
    }

    #[test]
    fn sizes_sum_to_vertex_count() {
        let g = FiniteGraph::grid_box(6);
        for s in 0..10 {
            let mut c = clusters(&g, &percolate(&g, 0.5, s, 0));
            assert_eq!(c.sizes().iter().sum::<usize>(), g.vertex_count());
        }
    }

    #[test]
    fn union_find_matches_bfs() {
        let g = FiniteGraph::grid_box(5);
        for s in 0..10 {
            let cfg = percolate(&g, 0.5, s, 1);
            let mut c = clusters(&g, &cfg);
            let d = g.bfs_with(0, |e| cfg.is_open(e));
            let bfs = d.iter().filter(|x| x.is_some()).count();
            assert_eq!(c.cluster_size(0), bfs);
        }
    }
}
