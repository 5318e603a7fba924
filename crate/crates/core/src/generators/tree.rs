//! Lazily grown rooted trees. A vertex address is the sequence of child
//! indices from the root; each vertex carries a type-state that determines the
//! law of its children.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde_json::json;

use super::law::{extinction_probability, OffspringLaw, SurvivalDecomposition};
use super::memo::Memo;
use super::{GraphSource, Instance, SourceDescriptor};
use crate::error::{Error, Result};
use crate::graph::{LocalGraph, VertexId};
use crate::rng::{self, sample_cdf, CounterRng};

/// Rule for growing a tree: a root state and, per state, the states of the
/// children. Randomness comes from a generator keyed by the vertex.
pub trait TreeRule {
    type State: Clone;
    fn root_state(&self, rng: &mut CounterRng) -> Self::State;
    fn children(&self, state: &Self::State, rng: &mut CounterRng) -> Vec<Self::State>;
}

pub struct LazyTree<R: TreeRule> {
    rule: R,
    seed: u64,
    root_state: R::State,
    kids: RefCell<HashMap<VertexId, Rc<Vec<R::State>>>>,
    memo: Memo,
}

impl<R: TreeRule> LazyTree<R> {
    pub fn new(rule: R, seed: u64) -> Self {
        let mut r = CounterRng::new(rng::key(&[seed, 0x7007]));
        let root_state = rule.root_state(&mut r);
        Self { rule, seed, root_state, kids: RefCell::default(), memo: Memo::default() }
    }

    fn kids_of(&self, v: &VertexId, state: &R::State) -> Rc<Vec<R::State>> {
        if let Some(k) = self.kids.borrow().get(v) {
            return k.clone();
        }
        let mut r = CounterRng::new(rng::key(&[self.seed, v.stable_hash()]));
        let k = Rc::new(self.rule.children(state, &mut r));
        self.kids.borrow_mut().insert(v.clone(), k.clone());
        k
    }

    /// State of `v`, or `None` if the address does not exist in this tree.
    pub fn state(&self, v: &VertexId) -> Option<R::State> {
        let parts = v.parts();
        let mut state = self.root_state.clone();
        let mut cur = VertexId::root();
        // start from the deepest ancestor whose children are cached
        let mut start = 0;
        for depth in (0..parts.len()).rev() {
            let anc = VertexId::from_slice(&parts[..depth]);
            if let Some(k) = self.kids.borrow().get(&anc) {
                let idx = parts[depth];
                if idx < 0 || idx as usize >= k.len() {
                    return None;
                }
                state = k[idx as usize].clone();
                cur = anc.child(idx);
                start = depth + 1;
                break;
            }
        }
        for &idx in &parts[start..] {
            let k = self.kids_of(&cur, &state);
            if idx < 0 || idx as usize >= k.len() {
                return None;
            }
            state = k[idx as usize].clone();
            cur = cur.child(idx);
        }
        Some(state)
    }

    pub fn rule(&self) -> &R {
        &self.rule
    }
}

impl<R: TreeRule> LocalGraph for LazyTree<R> {
    fn root(&self) -> VertexId {
        VertexId::root()
    }

    fn neighbors(&self, v: &VertexId) -> Result<Rc<[VertexId]>> {
        self.memo.get_or(v, || {
            let state = self.state(v).ok_or_else(|| Error::InvalidVertex(v.clone()))?;
            let k = self.kids_of(v, &state);
            let mut out = Vec::with_capacity(k.len() + 1);
            out.extend(v.parent());
            out.extend((0..k.len() as i32).map(|i| v.child(i)));
            Ok(out)
        })
    }

    fn root_distance(&self, v: &VertexId) -> Option<usize> {
        Some(v.len())
    }

    fn is_tree(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UgwState {
    Root,
    Plain,
    Surviving,
    Doomed,
}

/// Growth rule of the unimodular Galton-Watson tree, optionally conditioned
/// to be infinite.
#[derive(Clone, Debug)]
pub struct UgwRule {
    law_cdf: Vec<f64>,
    root_cdf: Vec<f64>,
    cond: Option<Conditioned>,
}

#[derive(Clone, Debug)]
struct Conditioned {
    q: f64,
    root_cdf: Vec<f64>,
    surv_cdf: Vec<f64>,
    doomed_cdf: Vec<f64>,
}

fn cdf_of(w: &[f64]) -> Vec<f64> {
    let z: f64 = w.iter().sum();
    let mut acc = 0.0;
    w.iter()
        .map(|x| {
            acc += x / z;
            acc
        })
        .collect()
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl Conditioned {
    /// Number of surviving children among `k`, given at least one survives.
    fn surviving(&self, k: usize, rng: &mut CounterRng) -> usize {
        let q = self.q;
        let w: Vec<f64> = (1..=k)
            .map(|j| binom(k, j) * (1.0 - q).powi(j as i32) * q.powi((k - j) as i32))
            .collect();
        1 + sample_cdf(&cdf_of(&w), rng.uniform())
    }

    fn split(&self, k: usize, rng: &mut CounterRng) -> Vec<UgwState> {
        let j = self.surviving(k, rng);
        let mut out = vec![UgwState::Surviving; j];
        out.resize(k, UgwState::Doomed);
        out
    }
}

impl UgwRule {
    pub fn new(law: &OffspringLaw, conditioned: bool) -> Result<(Self, Option<SurvivalDecomposition>)> {
        let root = law.root_degree_law();
        let (cond, dec) = if conditioned {
            if law.mean() <= 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "conditioning on survival needs mean > 1, got {}",
                    law.mean()
                )));
            }
            let dec = extinction_probability(law);
            let q = dec.q;
            let rw: Vec<f64> = root.iter().enumerate().map(|(k, p)| p * (1.0 - q.powi(k as i32))).collect();
            let sw: Vec<f64> = law.pmf().iter().enumerate().map(|(k, p)| p * (1.0 - q.powi(k as i32))).collect();
            let doomed_cdf = match &dec.bar_law {
                Some(b) => b.cdf(),
                None => vec![1.0],
            };
            let c = Conditioned { q, root_cdf: cdf_of(&rw), surv_cdf: cdf_of(&sw), doomed_cdf };
            (Some(c), Some(dec))
        } else {
            (None, None)
        };
        Ok((Self { law_cdf: law.cdf(), root_cdf: cdf_of(&root), cond }, dec))
    }
}

impl TreeRule for UgwRule {
    type State = UgwState;

    fn root_state(&self, _rng: &mut CounterRng) -> UgwState {
        UgwState::Root
    }

    fn children(&self, state: &UgwState, rng: &mut CounterRng) -> Vec<UgwState> {
        let u = rng.uniform();
        match (state, &self.cond) {
            (UgwState::Root, None) => vec![UgwState::Plain; sample_cdf(&self.root_cdf, u)],
            (UgwState::Plain, _) => vec![UgwState::Plain; sample_cdf(&self.law_cdf, u)],
            (UgwState::Root, Some(c)) => c.split(sample_cdf(&c.root_cdf, u), rng),
            (UgwState::Surviving, Some(c)) => c.split(sample_cdf(&c.surv_cdf, u), rng),
            (UgwState::Doomed, Some(c)) => vec![UgwState::Doomed; sample_cdf(&c.doomed_cdf, u)],
            (_, None) => unreachable!("conditioned states without conditioning"),
        }
    }
}

/// Unimodular Galton-Watson tree with offspring law `law`: the root has `k`
/// children with probability proportional to `P(X = k - 1) / k`, every other
/// vertex has an independent copy of `X` children.
#[derive(Clone, Debug)]
pub struct UgwSource {
    pub law: OffspringLaw,
    pub conditioned: bool,
    pub decomposition: Option<SurvivalDecomposition>,
    rule: UgwRule,
}

impl UgwSource {
    pub fn new(law: OffspringLaw, conditioned: bool) -> Result<Self> {
        let (rule, decomposition) = UgwRule::new(&law, conditioned)?;
        Ok(Self { law, conditioned, decomposition, rule })
    }

    /// The 3-regular tree.
    pub fn regular3() -> Self {
        Self::new(OffspringLaw::constant(2), false).expect("valid law")
    }
}

impl GraphSource for UgwSource {
    fn descriptor(&self) -> SourceDescriptor {
        let mut params = json!({
            "law": { "pmf": self.law.pmf() },
            "conditioned": self.conditioned,
            "tail_mass": self.law.tail_mass(),
        });
        if let Some(d) = &self.decomposition {
            params["q"] = json!(d.q);
        }
        SourceDescriptor::new("ugw", params)
    }

    fn sample(&self, seed: u64) -> Result<Instance> {
        Ok(Box::new(LazyTree::new(self.rule.clone(), seed)))
    }

    fn max_degree(&self) -> Option<usize> {
        Some(self.law.max_support() + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GklState {
    ARoot,
    AFromA,
    AFromB,
    BRoot,
    B,
}

/// Quasi-transitive tree with branch vertices of degree `k + l + 1`: each has
/// `l + 1` branch neighbors joined directly and `k` joined through a
/// degree-2 vertex.
#[derive(Clone, Copy, Debug)]
pub struct GklRule {
    pub k: usize,
    pub l: usize,
}

impl TreeRule for GklRule {
    type State = GklState;

    fn root_state(&self, rng: &mut CounterRng) -> GklState {
        if rng.uniform() < 2.0 / (self.k as f64 + 2.0) {
            GklState::ARoot
        } else {
            GklState::BRoot
        }
    }

    fn children(&self, state: &GklState, _rng: &mut CounterRng) -> Vec<GklState> {
        let (k, l) = (self.k, self.l);
        let (a, b) = match state {
            GklState::ARoot => (l + 1, k),
            GklState::AFromA => (l, k),
            GklState::AFromB => (l + 1, k - 1),
            GklState::BRoot => return vec![GklState::AFromB; 2],
            GklState::B => return vec![GklState::AFromB],
        };
        let mut out = vec![GklState::AFromA; a];
        out.resize(a + b, GklState::B);
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GklSource {
    pub k: usize,
    pub l: usize,
}

impl GklSource {
    pub fn new(k: usize, l: usize) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::InvalidParameter("gkl needs k, l >= 1".into()));
        }
        Ok(Self { k, l })
    }

    /// Critical probability of the tree: the `p` at which the two-type
    /// branching process of open paths has spectral radius one.
    pub fn critical_probability(&self) -> f64 {
        let (k, l) = (self.k as f64, self.l as f64);
        let rho = |p: f64| {
            let (a, b, c, d) = (l * p, k * p * p, (l + 1.0) * p, (k - 1.0) * p * p);
            let tr = a + d;
            let det = a * d - b * c;
            tr / 2.0 + (tr * tr / 4.0 - det).max(0.0).sqrt()
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if rho(mid) < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

impl GraphSource for GklSource {
    fn descriptor(&self) -> SourceDescriptor {
        SourceDescriptor::new("gkl", json!({ "k": self.k, "l": self.l }))
    }

    fn sample(&self, seed: u64) -> Result<Instance> {
        Ok(Box::new(LazyTree::new(GklRule { k: self.k, l: self.l }, seed)))
    }

    fn max_degree(&self) -> Option<usize> {
        Some(self.k + self.l + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ball;

    #[test]
    fn regular_tree_ball_sizes() {
        let g = UgwSource::regular3().sample(1).unwrap();
        assert_eq!(ball(&g, &g.root(), 3).unwrap().vertex_count(), 22);
    }

    #[test]
    fn zero_offspring_is_single_edge() {
        // the root degree is at least one: P(deg o = 1) = P(X = 0) / E[1/(X+1)] = 1
        let s = UgwSource::new(OffspringLaw::constant(0), false).unwrap();
        let g = s.sample(3).unwrap();
        assert_eq!(ball(&g, &g.root(), 5).unwrap().vertex_count(), 2);
    }

    #[test]
    fn conditioning_needs_supercritical_law() {
        assert!(UgwSource::new(OffspringLaw::constant(1), true).is_err());
    }

    #[test]
    fn gkl_degrees() {
        let s = GklSource::new(3, 5).unwrap();
        for seed in 0..20 {
            let g = s.sample(seed).unwrap();
            let b = ball(&g, &g.root(), 4).unwrap();
            for (i, v) in b.vertices.iter().enumerate() {
                if b.dist[i] < 4 {
                    let d = g.neighbors(v).unwrap().len();
                    assert!(d == 2 || d == 9, "degree {d}");
                }
            }
        }
    }

    #[test]
    fn gkl_critical_value_solves_cubic() {
        let p = GklSource::new(3, 5).unwrap().critical_probability();
        assert!((8.0 * p * p * p + 2.0 * p * p + 5.0 * p - 1.0).abs() < 1e-10);
    }

    #[test]
    fn addresses_are_stable_under_exploration_order() {
        let s = UgwSource::new(OffspringLaw::uniform(1, 3).unwrap(), false).unwrap();
        let a = s.sample(9).unwrap();
        let b = s.sample(9).unwrap();
        let deep = ball(&a, &a.root(), 5).unwrap();
        let v = deep.vertices.last().unwrap().clone();
        // query a deep vertex first on the fresh instance
        assert_eq!(b.neighbors(&v).unwrap(), a.neighbors(&v).unwrap());
        assert_eq!(ball(&b, &b.root(), 5).unwrap().vertices, deep.vertices);
    }

    #[test]
    fn invalid_address_is_rejected() {
        let g = UgwSource::regular3().sample(0).unwrap();
        assert!(g.neighbors(&VertexId::from_slice(&[7])).is_err());
    }
}
