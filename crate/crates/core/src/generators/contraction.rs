//! Contraction of label-1 edges. Each component of the label-1 subgraph
//! becomes one vertex, addressed by its smallest constituent address. The
//! root law is re-biased by `1 / |C_o|` through rejection. Loops are dropped
//! and parallel edges merged.

use std::collections::{BTreeSet, HashSet};
use std::rc::Rc;

use serde_json::json;

use super::memo::Memo;
use super::{GraphSource, Instance, SourceDescriptor};
use crate::error::{Error, Result};
use crate::graph::{edge_key, LocalGraph, VertexId};
use crate::rng::{self, CounterRng};

/// Maximum number of base vertices in one contracted component.
pub const COMPONENT_CAP: usize = 100_000;
const RETRY_CAP: usize = 100_000;

/// How base edges receive the label 1.
#[derive(Clone, Debug)]
pub enum LabelRule {
    /// Use the base graph's own edge labels.
    Base,
    /// Each edge independently with probability `rho`.
    Bernoulli(f64),
    /// On the path: edges `{x, x+1}` with `x + phase` even, `phase` a fair bit.
    Alternating,
    /// An explicit list of edges (finite bases).
    Edges(Vec<(VertexId, VertexId)>),
}

pub struct ContractionSource {
    base: Box<dyn GraphSource>,
    rule: LabelRule,
}

impl ContractionSource {
    pub fn new(base: Box<dyn GraphSource>, rule: LabelRule) -> Result<Self> {
        if let LabelRule::Bernoulli(rho) = rule {
            if !(0.0..=1.0).contains(&rho) {
                return Err(Error::InvalidParameter(format!("rho = {rho} is not a probability")));
            }
        }
        if matches!(rule, LabelRule::Alternating) && base.descriptor().kind != "path" {
            return Err(Error::InvalidParameter("alternating labels need a path base".into()));
        }
        Ok(Self { base, rule })
    }
}

impl GraphSource for ContractionSource {
    fn descriptor(&self) -> SourceDescriptor {
        let rule = match &self.rule {
            LabelRule::Base => json!({ "kind": "base" }),
            LabelRule::Bernoulli(rho) => json!({ "kind": "bernoulli", "rho": rho }),
            LabelRule::Alternating => json!({ "kind": "alternating" }),
            LabelRule::Edges(e) => json!({ "kind": "edges", "edges": e }),
        };
        SourceDescriptor::new("contraction", json!({ "base": self.base.descriptor().to_json(), "labels": rule }))
    }

    fn sample(&self, seed: u64) -> Result<Instance> {
        let mut r = CounterRng::new(rng::key(&[seed, 0xc0c0]));
        for attempt in 0..RETRY_CAP as u64 {
            let s = rng::key(&[seed, attempt]);
            let base = self.base.sample(s)?;
            let phase = (rng::mix64(s) & 1) as i32;
            let g = Contracted {
                base,
                rule: self.rule.clone(),
                label_key: rng::key(&[s, 0x1abe1]),
                phase,
                explicit: match &self.rule {
                    LabelRule::Edges(e) => e.iter().map(|(a, b)| edge_key(a, b)).collect(),
                    _ => HashSet::new(),
                },
                root: VertexId::root(),
                memo: Memo::default(),
            };
            let comp = g.component(&g.base.root())?;
            if r.uniform() * comp.len() as f64 <= 1.0 {
                let root = comp.iter().next().expect("nonempty").clone();
                return Ok(Box::new(Contracted { root, ..g }));
            }
        }
        Err(Error::RetryCap(RETRY_CAP))
    }
}

pub struct Contracted {
    base: Instance,
    rule: LabelRule,
    label_key: u64,
    phase: i32,
    explicit: HashSet<u64>,
    root: VertexId,
    memo: Memo,
}

impl Contracted {
    fn contracted(&self, x: &VertexId, y: &VertexId) -> bool {
        match &self.rule {
            LabelRule::Base => self.base.edge_label(x, y) == 1,
            LabelRule::Bernoulli(rho) => rng::uniform_at(self.label_key, edge_key(x, y)) < *rho,
            LabelRule::Alternating => {
                let lo = x.parts()[0].min(y.parts()[0]);
                (lo + self.phase).rem_euclid(2) == 0
            }
            LabelRule::Edges(_) => self.explicit.contains(&edge_key(x, y)),
        }
    }

    /// Base vertices of the label-1 component of `x`, ordered.
    fn component(&self, x: &VertexId) -> Result<BTreeSet<VertexId>> {
        let mut seen = BTreeSet::new();
        seen.insert(x.clone());
        let mut stack = vec![x.clone()];
        while let Some(v) = stack.pop() {
            for w in self.base.neighbors(&v)?.iter() {
                if !seen.contains(w) && self.contracted(&v, w) {
                    if seen.len() >= COMPONENT_CAP {
                        return Err(Error::BudgetExceeded { cap: COMPONENT_CAP });
                    }
                    seen.insert(w.clone());
                    stack.push(w.clone());
                }
            }
        }
        Ok(seen)
    }

    fn representative(&self, x: &VertexId) -> Result<VertexId> {
        Ok(self.component(x)?.into_iter().next().expect("nonempty"))
    }
}

impl LocalGraph for Contracted {
    fn root(&self) -> VertexId {
        self.root.clone()
    }

    fn neighbors(&self, v: &VertexId) -> Result<Rc<[VertexId]>> {
        self.memo.get_or(v, || {
            let comp = self.component(v)?;
            if comp.iter().next() != Some(v) {
                return Err(Error::InvalidVertex(v.clone()));
            }
            let mut out = BTreeSet::new();
            for x in &comp {
                for y in self.base.neighbors(x)?.iter() {
                    if !comp.contains(y) {
                        out.insert(self.representative(y)?);
                    }
                }
            }
            Ok(out.into_iter().collect())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{CanopySource, CycleSource, PathSource};
    use crate::graph::{ball, canonical_code};

    #[test]
    fn no_labels_is_identity() {
        let src = ContractionSource::new(Box::new(CanopySource::new()), LabelRule::Bernoulli(0.0)).unwrap();
        let base = CanopySource::new();
        for seed in 0..10 {
            let a = base.sample(rng::key(&[seed, 0])).unwrap();
            let b = src.sample(seed).unwrap();
            let ca = canonical_code(&ball(&a, &a.root(), 3).unwrap()).unwrap();
            let cb = canonical_code(&ball(&b, &b.root(), 3).unwrap()).unwrap();
            assert_eq!(ca, cb);
        }
    }

    #[test]
    fn alternating_pairs_give_a_path() {
        let src = ContractionSource::new(Box::new(PathSource), LabelRule::Alternating).unwrap();
        for seed in 0..10 {
            let g = src.sample(seed).unwrap();
            let b = ball(&g, &g.root(), 4).unwrap();
            assert_eq!(b.vertex_count(), 9);
            assert_eq!(b.edges.len(), 8);
        }
    }

    #[test]
    fn six_cycle_with_one_label_is_five_cycle() {
        let e = (VertexId::from_slice(&[0]), VertexId::from_slice(&[1]));
        let src = ContractionSource::new(Box::new(CycleSource(6)), LabelRule::Edges(vec![e])).unwrap();
        let g = src.sample(3).unwrap();
        let b = ball(&g, &g.root(), 5).unwrap();
        assert_eq!(b.vertex_count(), 5);
        assert_eq!(b.edges.len(), 5);
        assert_eq!(b.graph().girth(), Some(5));
    }
}
