//! Edge replacement: every base edge `{a, b}` becomes a finite two-pointed
//! graph glued to `a` and `b`. The root is re-biased: a base vertex `o` is
//! weighted by `1 + (1/2) * (interior kit vertices on edges at o)` and the new
//! root is `o` itself with probability `1 / w(o)`, otherwise an interior vertex
//! of an incident kit chosen in proportion to half-ownership.
//!
//! Addresses: `[0, base...]` for base vertices and
//! `[1, k, |a|, a..., b...]` for interior vertex `k` of the kit on `{a, b}`
//! with `a < b`.

use std::rc::Rc;
use std::sync::Arc;

use serde_json::json;

use super::memo::Memo;
use super::{GraphSource, Instance, SourceDescriptor};
use crate::error::{Error, Result};
use crate::graph::{FiniteGraph, LocalGraph, VertexId};
use crate::rng::{self, CounterRng};

/// A finite graph with two distinct distinguished vertices.
#[derive(Clone, Debug)]
pub struct TwoPointed {
    pub graph: FiniteGraph,
    pub s: u32,
    pub t: u32,
}

impl TwoPointed {
    pub fn edge() -> Self {
        Self { graph: FiniteGraph::path(2), s: 0, t: 1 }
    }

    pub fn path(len: usize) -> Self {
        Self { graph: FiniteGraph::path(len + 1), s: 0, t: len as u32 }
    }

    /// `Q_m` glued at `(0, -m)` and `(0, m)`.
    pub fn grid_box(m: usize) -> Self {
        let side = 2 * m + 1;
        let idx = |x: usize, y: usize| (y * side + x) as u32;
        Self { graph: FiniteGraph::grid_box(m), s: idx(m, 0), t: idx(m, 2 * m) }
    }

    pub fn interior(&self) -> usize {
        self.graph.vertex_count() - 2
    }

    fn is_single_edge(&self) -> bool {
        self.graph.vertex_count() == 2
    }
}

/// Which kit replaces an edge, by the base edge label.
#[derive(Clone, Debug)]
pub enum EdgeKit {
    /// Leave every edge alone.
    Identity,
    /// A path with `length` edges on edges whose label is listed (all edges
    /// when `labels` is empty).
    Path { length: usize, labels: Vec<i64> },
    /// Edges of label `n` (canopy level) become `Q_{2^n}`.
    CanopyBoxes,
}

impl EdgeKit {
    fn kit_for(&self, label: i64, cache: &KitCache) -> Arc<TwoPointed> {
        match self {
            EdgeKit::Identity => cache.edge.clone(),
            EdgeKit::Path { labels, .. } if !labels.is_empty() && !labels.contains(&label) => cache.edge.clone(),
            EdgeKit::Path { .. } => cache.path.clone().expect("path kit"),
            EdgeKit::CanopyBoxes => cache.boxes[label.max(0) as usize].clone(),
        }
    }
}

#[derive(Debug)]
struct KitCache {
    edge: Arc<TwoPointed>,
    path: Option<Arc<TwoPointed>>,
    boxes: Vec<Arc<TwoPointed>>,
}

pub struct EdgeReplacementSource {
    base: Box<dyn GraphSource>,
    kit: EdgeKit,
    cache: Arc<KitCache>,
    /// Stratum law re-weighted by `w`, for deterministic-stratum bases.
    strata: Option<Vec<f64>>,
    /// Envelope for rejection sampling otherwise.
    envelope: f64,
}

/// Cap on levels when gluing boxes onto a canopy.
const MAX_BOX_LEVEL: usize = 10;

impl EdgeReplacementSource {
    pub fn new(base: Box<dyn GraphSource>, kit: EdgeKit) -> Result<Self> {
        let mut boxes = Vec::new();
        if let EdgeKit::CanopyBoxes = kit {
            let d = base.descriptor();
            let max_level = d.params.get("max_level").and_then(|v| v.as_u64());
            match (d.kind.as_str(), max_level) {
                ("canopy", Some(m)) if (m as usize) <= MAX_BOX_LEVEL => {
                    boxes = (0..m as usize).map(|n| Arc::new(TwoPointed::grid_box(1 << n))).collect();
                }
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "canopy box kits need a canopy base with max_level <= {MAX_BOX_LEVEL}"
                    )))
                }
            }
        }
        let path = match kit {
            EdgeKit::Path { length, .. } if length == 0 => {
                return Err(Error::InvalidParameter("path kit length must be >= 1".into()))
            }
            EdgeKit::Path { length, .. } => Some(Arc::new(TwoPointed::path(length))),
            _ => None,
        };
        let cache = Arc::new(KitCache { edge: Arc::new(TwoPointed::edge()), path, boxes });
        let max_interior = match &kit {
            EdgeKit::Identity => 0,
            EdgeKit::Path { length, .. } => length - 1,
            EdgeKit::CanopyBoxes => cache.boxes.iter().map(|b| b.interior()).max().unwrap_or(0),
        };
        let mut src = Self { base, kit, cache, strata: None, envelope: 1.0 };
        if max_interior == 0 {
            return Ok(src);
        }
        if src.base.strata_are_deterministic() {
            if let Some((weights, _)) = src.base.strata() {
                let mut w = Vec::with_capacity(weights.len());
                for (s, p) in weights.iter().enumerate() {
                    let g = src.base.sample_stratum(s, 0)?;
                    w.push(p * src.weight(&g, &g.root())?);
                }
                let z: f64 = w.iter().sum();
                src.strata = Some(w.iter().map(|x| x / z).collect());
                return Ok(src);
            }
        }
        let deg = src.base.max_degree().ok_or_else(|| {
            Error::InvalidParameter("edge replacement needs a base with bounded degree or deterministic strata".into())
        })?;
        src.envelope = 1.0 + 0.5 * (deg * max_interior) as f64;
        Ok(src)
    }

    fn weight(&self, g: &dyn LocalGraph, o: &VertexId) -> Result<f64> {
        let mut w = 1.0;
        for y in g.neighbors(o)?.iter() {
            w += 0.5 * self.kit.kit_for(g.edge_label(o, y), &self.cache).interior() as f64;
        }
        Ok(w)
    }

    fn wrap(&self, base: Instance, r: &mut CounterRng) -> Result<Instance> {
        let o = base.root();
        let w = self.weight(&base, &o)?;
        let g = EdgeReplaced { base, kit: self.kit.clone(), cache: self.cache.clone(), root: vec_root(&o), memo: Memo::default() };
        let mut u = r.uniform() * w;
        if u < 1.0 {
            return Ok(Box::new(g));
        }
        u -= 1.0;
        for y in g.base.neighbors(&o)?.iter() {
            let kit = self.kit.kit_for(g.base.edge_label(&o, y), &self.cache);
            let share = 0.5 * kit.interior() as f64;
            if u < share {
                let k = ((u / share) * kit.interior() as f64) as usize;
                let interior: Vec<u32> = (0..kit.graph.vertex_count() as u32).filter(|&v| v != kit.s && v != kit.t).collect();
                let root = interior_id(interior[k.min(interior.len() - 1)], &o, y);
                return Ok(Box::new(EdgeReplaced { root, ..g }));
            }
            u -= share;
        }
        Ok(Box::new(g))
    }
}

fn vec_root(o: &VertexId) -> VertexId {
    let mut p = vec![0];
    p.extend_from_slice(o.parts());
    VertexId::from_slice(&p)
}

fn interior_id(k: u32, a: &VertexId, b: &VertexId) -> VertexId {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    let mut p = vec![1, k as i32, a.len() as i32];
    p.extend_from_slice(a.parts());
    p.extend_from_slice(b.parts());
    VertexId::from_slice(&p)
}

impl GraphSource for EdgeReplacementSource {
    fn descriptor(&self) -> SourceDescriptor {
        let kit = match &self.kit {
            EdgeKit::Identity => json!({ "kind": "edge" }),
            EdgeKit::Path { length, labels } => json!({ "kind": "path", "length": length, "labels": labels }),
            EdgeKit::CanopyBoxes => json!({ "kind": "canopy_boxes" }),
        };
        SourceDescriptor::new("edge_repl", json!({ "base": self.base.descriptor().to_json(), "kit": kit }))
    }

    fn sample(&self, seed: u64) -> Result<Instance> {
        let mut r = CounterRng::new(rng::key(&[seed, 0xed9e]));
        if let Some(strata) = &self.strata {
            let mut acc = 0.0;
            let u = r.uniform();
            let s = strata.iter().position(|p| {
                acc += p;
                u < acc
            });
            let s = s.unwrap_or(strata.len() - 1);
            let base = self.base.sample_stratum(s, seed)?;
            return self.wrap(base, &mut r);
        }
        for attempt in 0..1_000_000u64 {
            let base = self.base.sample(rng::key(&[seed, attempt]))?;
            let w = self.weight(&base, &base.root())?;
            if r.uniform() * self.envelope < w {
                return self.wrap(base, &mut r);
            }
        }
        Err(Error::RetryCap(1_000_000))
    }

    fn max_degree(&self) -> Option<usize> {
        let kit_deg = match &self.kit {
            EdgeKit::Identity => 0,
            EdgeKit::Path { .. } => 2,
            EdgeKit::CanopyBoxes => 4,
        };
        self.base.max_degree().map(|d| d.max(kit_deg))
    }
}

pub struct EdgeReplaced {
    base: Instance,
    kit: EdgeKit,
    cache: Arc<KitCache>,
    root: VertexId,
    memo: Memo,
}

impl EdgeReplaced {
    fn decode(v: &VertexId) -> Option<Decoded> {
        let p = v.parts();
        match p.first()? {
            0 => Some(Decoded::Base(VertexId::from_slice(&p[1..]))),
            1 if p.len() >= 3 => {
                let k = p[1] as u32;
                let la = p[2] as usize;
                let rest = &p[3..];
                (la <= rest.len()).then(|| {
                    Decoded::Interior(k, VertexId::from_slice(&rest[..la]), VertexId::from_slice(&rest[la..]))
                })
            }
            _ => None,
        }
    }

    fn kit(&self, a: &VertexId, b: &VertexId) -> Arc<TwoPointed> {
        self.kit.kit_for(self.base.edge_label(a, b), &self.cache)
    }

    /// Image of kit vertex `z` on the edge `{a, b}` (`a < b`).
    fn image(kit: &TwoPointed, z: u32, a: &VertexId, b: &VertexId) -> VertexId {
        if z == kit.s {
            vec_root(a)
        } else if z == kit.t {
            vec_root(b)
        } else {
            interior_id(z, a, b)
        }
    }
}

enum Decoded {
    Base(VertexId),
    Interior(u32, VertexId, VertexId),
}

impl LocalGraph for EdgeReplaced {
    fn root(&self) -> VertexId {
        self.root.clone()
    }

    fn neighbors(&self, v: &VertexId) -> Result<Rc<[VertexId]>> {
        self.memo.get_or(v, || {
            let bad = || Error::InvalidVertex(v.clone());
            let mut out = Vec::new();
            match Self::decode(v).ok_or_else(bad)? {
                Decoded::Base(x) => {
                    for y in self.base.neighbors(&x)?.iter() {
                        let kit = self.kit(&x, y);
                        if kit.is_single_edge() {
                            out.push(vec_root(y));
                            continue;
                        }
                        let (a, b) = if &x < y { (&x, y) } else { (y, &x) };
                        let end = if &x == a { kit.s } else { kit.t };
                        for &(z, _) in kit.graph.incident(end) {
                            out.push(Self::image(&kit, z, a, b));
                        }
                    }
                }
                Decoded::Interior(k, a, b) => {
                    if a >= b || !self.base.neighbors(&a)?.contains(&b) {
                        return Err(bad());
                    }
                    let kit = self.kit(&a, &b);
                    if k as usize >= kit.graph.vertex_count() || k == kit.s || k == kit.t {
                        return Err(bad());
                    }
                    for &(z, _) in kit.graph.incident(k) {
                        out.push(Self::image(&kit, z, &a, &b));
                    }
                }
            }
            Ok(out)
        })
    }

    fn is_tree(&self) -> bool {
        self.base.is_tree() && matches!(self.kit, EdgeKit::Identity | EdgeKit::Path { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{CanopySource, PathSource, Z2Source};
    use crate::graph::{ball, canonical_code};

    #[test]
    fn identity_kit_keeps_balls() {
        let base = CanopySource::new();
        let src = EdgeReplacementSource::new(Box::new(CanopySource::new()), EdgeKit::Identity).unwrap();
        for seed in 0..20 {
            let a = base.sample(rng::key(&[seed, 0])).unwrap();
            let b = src.sample(seed).unwrap();
            let ca = canonical_code(&ball(&a, &a.root(), 4).unwrap()).unwrap();
            let cb = canonical_code(&ball(&b, &b.root(), 4).unwrap()).unwrap();
            assert_eq!(ca, cb);
        }
    }

    #[test]
    fn subdivided_path_is_a_path() {
        let src = EdgeReplacementSource::new(Box::new(PathSource), EdgeKit::Path { length: 3, labels: vec![] }).unwrap();
        for seed in 0..10 {
            let g = src.sample(seed).unwrap();
            let b = ball(&g, &g.root(), 4).unwrap();
            assert_eq!(b.vertex_count(), 9);
            assert_eq!(b.boundary.len(), 2);
        }
    }

    #[test]
    fn subdivided_lattice_degrees() {
        let src = EdgeReplacementSource::new(Box::new(Z2Source), EdgeKit::Path { length: 2, labels: vec![] }).unwrap();
        let mut mids = 0;
        for seed in 0..300 {
            let g = src.sample(seed).unwrap();
            let d = g.neighbors(&g.root()).unwrap().len();
            assert!(d == 2 || d == 4);
            mids += usize::from(d == 2);
        }
        // two midpoints per lattice vertex: fraction 2/3
        assert!((mids as f64 / 300.0 - 2.0 / 3.0).abs() < 0.1, "{mids}");
    }

    #[test]
    fn canopy_boxes_need_truncation() {
        assert!(EdgeReplacementSource::new(Box::new(CanopySource::new()), EdgeKit::CanopyBoxes).is_err());
        let src = EdgeReplacementSource::new(Box::new(CanopySource::truncated(4)), EdgeKit::CanopyBoxes).unwrap();
        for seed in 0..10 {
            let g = src.sample(seed).unwrap();
            ball(&g, &g.root(), 6).unwrap();
        }
    }
}
