//! Vertex replacement: every vertex of the base graph becomes a finite graph,
//! base edges are wired between anchor vertices, and the root is resampled
//! uniformly inside its (size-biased) replacement.
//!
//! Box kits live on the square lattice: vertex `[m, n, i, j]` is cell `(i, j)`
//! of the box replacing lattice site `(m, n)`. All boxes in column `m` share a
//! width and all boxes in row `n` share a height, so anchors line up.

use std::rc::Rc;
use std::sync::{Arc, OnceLock};

use serde_json::json;

use super::{GraphSource, Instance, SourceDescriptor};
use crate::error::{Error, Result};
use crate::graph::{LocalGraph, VertexId};
use crate::rng::{self, sample_cdf, CounterRng};

/// Largest half-side kept by the heavy-tailed box law.
pub const HEAVY_TAIL_CAP: usize = 1_000_000;

/// Half-side law `P(X = k) = c k^(-5/2)`, `k >= 1`, truncated at
/// [`HEAVY_TAIL_CAP`], with its size-biased companion `P(Y = k)` proportional
/// to `k^(-3/2)`.
#[derive(Debug)]
pub struct HeavyTail {
    /// Normalizer of the untruncated law.
    pub c: f64,
    /// Mass of the untruncated law beyond the cap.
    pub tail: f64,
    /// Mass of the untruncated size-biased law beyond the cap.
    pub biased_tail: f64,
    cdf: Vec<f64>,
    biased_cdf: Vec<f64>,
}

fn cdf_from(w: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out: Vec<f64> = w
        .map(|x| {
            acc += x;
            acc
        })
        .collect();
    let z = acc;
    out.iter_mut().for_each(|x| *x /= z);
    out
}

impl HeavyTail {
    pub fn get() -> Arc<HeavyTail> {
        static LAW: OnceLock<Arc<HeavyTail>> = OnceLock::new();
        LAW.get_or_init(|| Arc::new(Self::build(HEAVY_TAIL_CAP))).clone()
    }

    fn build(cap: usize) -> Self {
        let k = cap as f64;
        let head: f64 = (1..=cap).rev().map(|i| (i as f64).powf(-2.5)).sum();
        // midpoint integral for the remainder, error O(cap^(-3.5))
        let rest = (2.0 / 3.0) * (k + 0.5).powf(-1.5);
        let c = 1.0 / (head + rest);
        let head_b: f64 = (1..=cap).rev().map(|i| (i as f64).powf(-1.5)).sum();
        let rest_b = 2.0 * (k + 0.5).powf(-0.5);
        Self {
            c,
            tail: c * rest,
            biased_tail: rest_b / (head_b + rest_b),
            cdf: cdf_from((1..=cap).map(|i| (i as f64).powf(-2.5))),
            biased_cdf: cdf_from((1..=cap).map(|i| (i as f64).powf(-1.5))),
        }
    }

    pub fn sample(&self, u: f64) -> usize {
        1 + sample_cdf(&self.cdf, u)
    }

    pub fn sample_biased(&self, u: f64) -> usize {
        1 + sample_cdf(&self.biased_cdf, u)
    }

    /// Truncated size-biased probabilities `P(Y = k)` for `k = 1..=kmax`.
    pub fn biased_pmf(&self, kmax: usize) -> Vec<f64> {
        (0..kmax)
            .map(|i| self.biased_cdf[i] - if i == 0 { 0.0 } else { self.biased_cdf[i - 1] })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub enum BoxLaw {
    /// Every site becomes `Q_n = [-n, n]^2`, anchored at side midpoints.
    Constant(usize),
    /// Column `m` has width `2 X_m`, row `n` height `2 X'_n`, anchors at index
    /// `X_m` and `X'_n`, with `X` heavy tailed.
    HeavyTail(Arc<HeavyTail>),
}

#[derive(Clone, Debug)]
pub enum VertexKit {
    /// One vertex carrying every anchor; leaves the base unchanged.
    Single,
    /// Boxes on the square lattice. With `uncorrected`, the root box is not
    /// size biased (a deliberately non-unimodular control).
    Boxes { law: BoxLaw, uncorrected: bool },
}

pub struct VertexReplacementSource {
    base: Box<dyn GraphSource>,
    kit: VertexKit,
}

impl VertexReplacementSource {
    pub fn new(base: Box<dyn GraphSource>, kit: VertexKit) -> Result<Self> {
        if matches!(kit, VertexKit::Boxes { .. }) && base.descriptor().kind != "z2" {
            return Err(Error::InvalidParameter("box kits require a z2 base".into()));
        }
        Ok(Self { base, kit })
    }

    /// `G_n`: constant `Q_n` boxes on the square lattice.
    pub fn constant_boxes(n: usize) -> Self {
        Self::new(Box::new(super::Z2Source), VertexKit::Boxes { law: BoxLaw::Constant(n), uncorrected: false })
            .expect("z2 base")
    }

    /// Heavy-tailed boxes on the square lattice.
    pub fn heavy_tail(uncorrected: bool) -> Self {
        Self::new(
            Box::new(super::Z2Source),
            VertexKit::Boxes { law: BoxLaw::HeavyTail(HeavyTail::get()), uncorrected },
        )
        .expect("z2 base")
    }
}

impl GraphSource for VertexReplacementSource {
    fn descriptor(&self) -> SourceDescriptor {
        let base = self.base.descriptor().to_json();
        let kit = match &self.kit {
            VertexKit::Single => json!({ "kind": "single" }),
            VertexKit::Boxes { law: BoxLaw::Constant(n), uncorrected } => {
                json!({ "kind": "constant_box", "n": n, "uncorrected": uncorrected })
            }
            VertexKit::Boxes { law: BoxLaw::HeavyTail(h), uncorrected } => json!({
                "kind": "heavy_tail_box",
                "uncorrected": uncorrected,
                "c": h.c,
                "cap": HEAVY_TAIL_CAP,
                "tail_mass": h.tail,
                "biased_tail_mass": h.biased_tail,
            }),
        };
        SourceDescriptor::new("vertex_repl", json!({ "base": base, "kit": kit }))
    }

    fn sample(&self, seed: u64) -> Result<Instance> {
        let VertexKit::Boxes { law, uncorrected } = &self.kit else {
            return self.base.sample(seed);
        };
        let mut r = CounterRng::new(rng::key(&[seed, 0x7e47]));
        let (col0, row0) = match law {
            BoxLaw::Constant(n) => (*n, *n),
            BoxLaw::HeavyTail(h) if *uncorrected => (h.sample(r.uniform()), h.sample(r.uniform())),
            BoxLaw::HeavyTail(h) => (h.sample_biased(r.uniform()), h.sample_biased(r.uniform())),
        };
        let g = BoxedLattice { seed, law: law.clone(), col0, row0, root: (0, 0) };
        let (w, h) = (g.col(0).0, g.row(0).0);
        let i = r.below(w as u64) as i32;
        let j = r.below(h as u64) as i32;
        Ok(Box::new(BoxedLattice { root: (i, j), ..g }))
    }

    fn max_degree(&self) -> Option<usize> {
        match self.kit {
            VertexKit::Single => self.base.max_degree(),
            VertexKit::Boxes { .. } => Some(6),
        }
    }
}

/// Square lattice with every site replaced by a box.
pub struct BoxedLattice {
    seed: u64,
    law: BoxLaw,
    col0: usize,
    row0: usize,
    root: (i32, i32),
}

const COL_TAG: u64 = 0xc01;
const ROW_TAG: u64 = 0x70e;

impl BoxedLattice {
    fn side(&self, idx: i32, tag: u64, root_half: usize) -> (i32, i32) {
        match &self.law {
            BoxLaw::Constant(n) => (2 * *n as i32 + 1, *n as i32),
            BoxLaw::HeavyTail(h) => {
                let x = if idx == 0 {
                    root_half
                } else {
                    h.sample(rng::uniform_at(rng::key(&[self.seed, tag]), idx as i64 as u64))
                };
                (2 * x as i32, x as i32)
            }
        }
    }

    /// Width and anchor column of boxes in column `m`.
    pub fn col(&self, m: i32) -> (i32, i32) {
        self.side(m, COL_TAG, self.col0)
    }

    /// Height and anchor row of boxes in row `n`.
    pub fn row(&self, n: i32) -> (i32, i32) {
        self.side(n, ROW_TAG, self.row0)
    }

    fn vid(m: i32, n: i32, i: i32, j: i32) -> VertexId {
        VertexId::from_slice(&[m, n, i, j])
    }
}

impl LocalGraph for BoxedLattice {
    fn root(&self) -> VertexId {
        Self::vid(0, 0, self.root.0, self.root.1)
    }

    fn neighbors(&self, v: &VertexId) -> Result<Rc<[VertexId]>> {
        let &[m, n, i, j] = v.parts() else { return Err(Error::InvalidVertex(v.clone())) };
        let (w, ax) = self.col(m);
        let (h, ay) = self.row(n);
        if !(0..w).contains(&i) || !(0..h).contains(&j) {
            return Err(Error::InvalidVertex(v.clone()));
        }
        let mut out = Vec::with_capacity(6);
        for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let (a, b) = (i + di, j + dj);
            if (0..w).contains(&a) && (0..h).contains(&b) {
                out.push(Self::vid(m, n, a, b));
            }
        }
        if j == ay {
            if i == w - 1 {
                out.push(Self::vid(m + 1, n, 0, ay));
            }
            if i == 0 {
                out.push(Self::vid(m - 1, n, self.col(m - 1).0 - 1, ay));
            }
        }
        if i == ax {
            if j == h - 1 {
                out.push(Self::vid(m, n + 1, ax, 0));
            }
            if j == 0 {
                out.push(Self::vid(m, n - 1, ax, self.row(n - 1).0 - 1));
            }
        }
        Ok(out.into())
    }

    fn edge_label(&self, u: &VertexId, v: &VertexId) -> i64 {
        i64::from(u.parts()[..2] != v.parts()[..2])
    }

    fn root_box(&self) -> Option<(i64, i64)> {
        match self.law {
            BoxLaw::Constant(n) => Some((n as i64, n as i64)),
            BoxLaw::HeavyTail(_) => Some((self.col0 as i64, self.row0 as i64)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ball;

    #[test]
    fn constant_boxes_have_midpoint_wiring() {
        let s = VertexReplacementSource::constant_boxes(1);
        let g = s.sample(5).unwrap();
        // the centre of each Q_1 box has degree 4, side midpoints degree 4 (3 + 1 wire), corners 2
        let c = VertexId::from_slice(&[0, 0, 1, 1]);
        assert_eq!(g.neighbors(&c).unwrap().len(), 4);
        let east = VertexId::from_slice(&[0, 0, 2, 1]);
        let ns = g.neighbors(&east).unwrap();
        assert_eq!(ns.len(), 4);
        assert!(ns.contains(&VertexId::from_slice(&[1, 0, 0, 1])));
        assert_eq!(g.neighbors(&VertexId::from_slice(&[3, -2, 0, 0])).unwrap().len(), 2);
        assert_eq!(g.edge_label(&east, &VertexId::from_slice(&[1, 0, 0, 1])), 1);
    }

    #[test]
    fn heavy_tail_normalizer() {
        let h = HeavyTail::get();
        // 1 / zeta(5/2)
        assert!((h.c - 1.0 / 1.341_487_257_250_917_2).abs() < 1e-12, "{}", h.c);
        assert!(h.tail < 1e-9);
    }

    #[test]
    fn heavy_tail_neighbors_are_symmetric() {
        let s = VertexReplacementSource::heavy_tail(false);
        for seed in 0..5 {
            let g = s.sample(seed).unwrap();
            // symmetry is asserted inside ball extraction
            ball(&g, &g.root(), 6).unwrap();
        }
    }

    #[test]
    fn single_kit_is_identity() {
        let s = VertexReplacementSource::new(Box::new(super::super::Z2Source), VertexKit::Single).unwrap();
        let g = s.sample(1).unwrap();
        assert_eq!(ball(&g, &g.root(), 2).unwrap().vertex_count(), 13);
    }

    #[test]
    fn box_kit_requires_lattice_base() {
        let r = VertexReplacementSource::new(
            Box::new(super::super::PathSource),
            VertexKit::Boxes { law: BoxLaw::Constant(1), uncorrected: false },
        );
        assert!(r.is_err());
    }
}
