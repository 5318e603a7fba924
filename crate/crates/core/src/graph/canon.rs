//! Canonical codes for finite rooted graphs.
//!
//! Trees use the AHU parenthesis encoding. Other graphs use an
//! individualization-refinement search over orderings compatible with the BFS
//! layers from the root, keeping the lexicographically smallest adjacency
//! certificate. Sibling branches already known to be equivalent under a
//! discovered automorphism are skipped.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Ball, FiniteGraph};

/// Maximum number of vertices accepted by the canonicalizer.
pub const CANON_CAP: usize = 64;

/// Byte string identifying a finite rooted graph up to rooted isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(pub Vec<u8>);

impl CanonicalCode {
    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> std::result::Result<Self, hex::FromHexError> {
        hex::decode(s).map(Self)
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

pub fn canonical_code(b: &Ball) -> Result<CanonicalCode> {
    canonical_code_of(&b.graph(), 0)
}

/// Canonical code of `g` rooted at `root`. Every vertex of `g` is encoded.
pub fn canonical_code_of(g: &FiniteGraph, root: u32) -> Result<CanonicalCode> {
    let n = g.vertex_count();
    if n > CANON_CAP {
        return Err(Error::CanonCap { cap: CANON_CAP, got: n });
    }
    if g.is_tree() {
        let mut out = vec![b'T'];
        ahu(g, root, u32::MAX, &mut out);
        return Ok(CanonicalCode(out));
    }
    let mut out = vec![b'G', n as u8];
    let cert = Search::new(g, root).run();
    for w in cert {
        out.extend_from_slice(&w.to_be_bytes());
    }
    Ok(CanonicalCode(out))
}

fn ahu(g: &FiniteGraph, v: u32, parent: u32, out: &mut Vec<u8>) {
    let mut kids: Vec<Vec<u8>> = g
        .incident(v)
        .iter()
        .filter(|&&(w, _)| w != parent)
        .map(|&(w, _)| {
            let mut s = Vec::new();
            ahu(g, w, v, &mut s);
            s
        })
        .collect();
    kids.sort();
    out.push(b'(');
    for k in kids {
        out.extend(k);
    }
    out.push(b')');
}

type Partition = Vec<Vec<u32>>;

struct Search<'a> {
    n: usize,
    adj: Vec<u64>,
    g: &'a FiniteGraph,
    root: u32,
    first: Option<(Vec<u64>, Vec<u32>)>,
    first_path: Vec<u32>,
    best: Option<(Vec<u64>, Vec<u32>)>,
    gens: Vec<Vec<u32>>,
}

impl<'a> Search<'a> {
    fn new(g: &'a FiniteGraph, root: u32) -> Self {
        let n = g.vertex_count();
        let mut adj = vec![0u64; n];
        for &(a, b) in g.edges() {
            adj[a as usize] |= 1 << b;
            adj[b as usize] |= 1 << a;
        }
        Self { n, adj, g, root, first: None, first_path: Vec::new(), best: None, gens: Vec::new() }
    }

    fn run(mut self) -> Vec<u64> {
        let dist = self.g.bfs(self.root);
        let maxd = dist.iter().map(|d| d.unwrap_or(u32::MAX)).filter(|&d| d != u32::MAX).max().unwrap_or(0);
        let mut cells: Partition = vec![Vec::new(); maxd as usize + 2];
        for (v, d) in dist.iter().enumerate() {
            match d {
                Some(d) => cells[*d as usize].push(v as u32),
                None => cells[maxd as usize + 1].push(v as u32),
            }
        }
        cells.retain(|c| !c.is_empty());
        let part = self.refine(cells);
        self.descend(part, &mut Vec::new());
        self.best.unwrap().0
    }

    fn refine(&self, mut part: Partition) -> Partition {
        loop {
            let mut cell_of = vec![0usize; self.n];
            for (i, c) in part.iter().enumerate() {
                for &v in c {
                    cell_of[v as usize] = i;
                }
            }
            let k = part.len();
            let mut next: Partition = Vec::with_capacity(k);
            for c in &part {
                if c.len() == 1 {
                    next.push(c.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u32>, u32)> = c
                    .iter()
                    .map(|&v| {
                        let mut counts = vec![0u32; k];
                        let mut m = self.adj[v as usize];
                        while m != 0 {
                            let w = m.trailing_zeros() as usize;
                            counts[cell_of[w]] += 1;
                            m &= m - 1;
                        }
                        (counts, v)
                    })
                    .collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|x| x.1).collect());
                        start = i;
                    }
                }
            }
            if next.len() == part.len() {
                return next;
            }
            part = next;
        }
    }

    fn certificate(&self, order: &[u32]) -> Vec<u64> {
        let n = self.n;
        let mut pos = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v as usize] = i;
        }
        let mut bits = vec![0u64; (n * n).div_ceil(64).max(1)];
        for i in 0..n {
            let mut m = self.adj[order[i] as usize];
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                let j = pos[w];
                if j > i {
                    let b = i * n + j;
                    bits[b / 64] |= 1 << (63 - b % 64);
                }
                m &= m - 1;
            }
        }
        bits
    }

    /// Returns `Some(depth)` to unwind to `depth` after proving the current
    /// branch equivalent to the first leaf.
    fn descend(&mut self, part: Partition, prefix: &mut Vec<u32>) -> Option<usize> {
        let target = part.iter().position(|c| c.len() > 1);
        let Some(ci) = target else {
            let order: Vec<u32> = part.iter().map(|c| c[0]).collect();
            return self.leaf(order, prefix);
        };
        let cell = part[ci].clone();
        let mut tried: Vec<u32> = Vec::new();
        for &v in &cell {
            if !tried.is_empty() && self.equivalent_to_tried(v, &tried, prefix) {
                continue;
            }
            tried.push(v);
            let mut p = part.clone();
            let rest: Vec<u32> = cell.iter().copied().filter(|&w| w != v).collect();
            p.splice(ci..=ci, [vec![v], rest]);
            let p = self.refine(p);
            prefix.push(v);
            let jump = self.descend(p, prefix);
            prefix.pop();
            if let Some(d) = jump {
                if d < prefix.len() {
                    return Some(d);
                }
            }
        }
        None
    }

    fn leaf(&mut self, order: Vec<u32>, prefix: &[u32]) -> Option<usize> {
        let cert = self.certificate(&order);
        let Some((first_cert, first_order)) = &self.first else {
            self.first = Some((cert.clone(), order.clone()));
            self.first_path = prefix.to_vec();
            self.best = Some((cert, order));
            return None;
        };
        if cert == *first_cert {
            let gamma = map_between(first_order, &order, self.n);
            self.gens.push(gamma);
            // deepest level where this path still agrees with the first path
            let agree = prefix
                .iter()
                .zip(&self.first_path)
                .take_while(|(a, b)| a == b)
                .count();
            return Some(agree);
        }
        let best = self.best.as_ref().unwrap();
        match cert.cmp(&best.0) {
            Ordering::Less => self.best = Some((cert, order)),
            Ordering::Equal => {
                let gamma = map_between(&best.1, &order, self.n);
                self.gens.push(gamma);
            }
            Ordering::Greater => {}
        }
        None
    }

    fn equivalent_to_tried(&self, v: u32, tried: &[u32], prefix: &[u32]) -> bool {
        let stab: Vec<&Vec<u32>> = self
            .gens
            .iter()
            .filter(|g| prefix.iter().all(|&x| g[x as usize] == x))
            .collect();
        if stab.is_empty() {
            return false;
        }
        let mut uf: Vec<u32> = (0..self.n as u32).collect();
        fn find(uf: &mut [u32], mut x: u32) -> u32 {
            while uf[x as usize] != x {
                uf[x as usize] = uf[uf[x as usize] as usize];
                x = uf[x as usize];
            }
            x
        }
        for g in stab {
            for x in 0..self.n as u32 {
                let (a, b) = (find(&mut uf, x), find(&mut uf, g[x as usize]));
                if a != b {
                    uf[a as usize] = b;
                }
            }
        }
        let rv = find(&mut uf, v);
        tried.iter().any(|&u| find(&mut uf, u) == rv)
    }
}

fn map_between(from: &[u32], to: &[u32], n: usize) -> Vec<u32> {
    let mut g = vec![0u32; n];
    for (a, b) in from.iter().zip(to) {
        g[*a as usize] = *b;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn relabel(g: &FiniteGraph, perm: &[u32]) -> FiniteGraph {
        let edges = g.edges().iter().map(|&(a, b)| (perm[a as usize], perm[b as usize])).collect();
        FiniteGraph::new(g.vertex_count(), edges)
    }

    #[test]
    fn relabeling_preserves_code() {
        let g = FiniteGraph::grid_box(2);
        let n = g.vertex_count() as u32;
        let perm: Vec<u32> = (0..n).map(|i| (i * 7 + 3) % n).collect();
        let h = relabel(&g, &perm);
        let c = n / 2;
        assert_eq!(canonical_code_of(&g, c).unwrap(), canonical_code_of(&h, perm[c as usize]).unwrap());
    }

    #[test]
    fn root_position_matters() {
        let g = FiniteGraph::grid_box(1);
        assert_ne!(canonical_code_of(&g, 4).unwrap(), canonical_code_of(&g, 0).unwrap());
        assert_eq!(canonical_code_of(&g, 0).unwrap(), canonical_code_of(&g, 8).unwrap());
    }

    #[test]
    fn trees_use_ahu() {
        let p = FiniteGraph::path(3);
        let c = canonical_code_of(&p, 1).unwrap();
        assert_eq!(c.0, b"T(()())".to_vec());
        assert_ne!(c, canonical_code_of(&p, 0).unwrap());
    }

    #[test]
    fn cycles_differ_by_length() {
        let a = canonical_code_of(&FiniteGraph::cycle(5), 0).unwrap();
        let b = canonical_code_of(&FiniteGraph::cycle(6), 0).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn complete_graph_is_fast() {
        let n = 14;
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        let g = FiniteGraph::new(n as usize, e);
        let c = canonical_code_of(&g, 0).unwrap();
        assert_eq!(c, canonical_code_of(&g, 5).unwrap());
    }

    #[test]
    fn hex_round_trip() {
        let c = canonical_code_of(&FiniteGraph::cycle(4), 0).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<CanonicalCode>(&s).unwrap(), c);
    }

    #[test]
    fn cap_enforced() {
        let g = FiniteGraph::cycle(65);
        assert!(matches!(canonical_code_of(&g, 0), Err(Error::CanonCap { .. })));
    }
}
