use std::rc::Rc;
use std::sync::OnceLock;

use crate::error::Result;
use crate::graph::VertexId;

/// Default hard cap on vertices touched by one ball extraction.
pub const DEFAULT_BALL_CAP: usize = 5_000_000;
/// Default per-replica cap on vertices explored by cluster probes.
pub const DEFAULT_CLUSTER_CAP: usize = 1_000_000;

fn env_budget() -> Option<usize> {
    static BUDGET: OnceLock<Option<usize>> = OnceLock::new();
    *BUDGET.get_or_init(|| {
        std::env::var("PERCOLAB_BUDGET")
            .ok()
            .and_then(|s| s.trim().parse().ok())
    })
}

/// Vertex cap for ball extraction (`PERCOLAB_BUDGET` overrides).
pub fn ball_cap() -> usize {
    env_budget().unwrap_or(DEFAULT_BALL_CAP)
}

/// Vertex cap for lazy cluster exploration (`PERCOLAB_BUDGET` overrides).
pub fn cluster_cap() -> usize {
    env_budget().unwrap_or(DEFAULT_CLUSTER_CAP)
}

/// A rooted, locally finite graph instance exposed through a neighbor oracle.
///
/// Implementations are deterministic given their seed: repeated calls with the
/// same vertex return identical lists. Neighbor lists must be symmetric.
pub trait LocalGraph {
    fn root(&self) -> VertexId;

    fn neighbors(&self, v: &VertexId) -> Result<Rc<[VertexId]>>;

    /// Graph distance from the root, when the generator knows it cheaply.
    fn root_distance(&self, _v: &VertexId) -> Option<usize> {
        None
    }

    /// Small integer label of the edge `{u, v}` (generator specific).
    fn edge_label(&self, _u: &VertexId, _v: &VertexId) -> i64 {
        0
    }

    /// Level with respect to a distinguished end, when the graph has one.
    /// The parent of `v` is the unique neighbor one level up.
    fn level(&self, _v: &VertexId) -> Option<i64> {
        None
    }

    /// Whether every instance of this generator is a tree.
    fn is_tree(&self) -> bool {
        false
    }

    /// Exact sphere sizes `|S(o, d)|` for `d = 0..=max_d`, if known in closed form.
    fn sphere_sizes(&self, _max_d: usize) -> Option<Vec<f64>> {
        None
    }

    /// Half side lengths of the box containing the root (box replacements only).
    fn root_box(&self) -> Option<(i64, i64)> {
        None
    }
}

impl<G: LocalGraph + ?Sized> LocalGraph for Box<G> {
    fn root(&self) -> VertexId {
        (**self).root()
    }
    fn neighbors(&self, v: &VertexId) -> Result<Rc<[VertexId]>> {
        (**self).neighbors(v)
    }
    fn root_distance(&self, v: &VertexId) -> Option<usize> {
        (**self).root_distance(v)
    }
    fn edge_label(&self, u: &VertexId, v: &VertexId) -> i64 {
        (**self).edge_label(u, v)
    }
    fn level(&self, v: &VertexId) -> Option<i64> {
        (**self).level(v)
    }
    fn is_tree(&self) -> bool {
        (**self).is_tree()
    }
    fn sphere_sizes(&self, max_d: usize) -> Option<Vec<f64>> {
        (**self).sphere_sizes(max_d)
    }
    fn root_box(&self) -> Option<(i64, i64)> {
        (**self).root_box()
    }
}

/// Graph distance between two vertices by BFS, `None` if it exceeds `cap`.
pub fn distance<G: LocalGraph + ?Sized>(
    g: &G,
    x: &VertexId,
    y: &VertexId,
    cap: usize,
) -> Result<Option<usize>> {
    use std::collections::HashSet;
    if x == y {
        return Ok(Some(0));
    }
    let limit = ball_cap();
    let mut seen: HashSet<VertexId> = HashSet::new();
    seen.insert(x.clone());
    let mut layer = vec![x.clone()];
    for d in 1..=cap {
        let mut next = Vec::new();
        for v in &layer {
            for w in g.neighbors(v)?.iter() {
                if w == y {
                    return Ok(Some(d));
                }
                if seen.insert(w.clone()) {
                    if seen.len() > limit {
                        return Err(crate::Error::BudgetExceeded { cap: limit });
                    }
                    next.push(w.clone());
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    Ok(None)
}
