use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{LocalGraph, VertexId};

/// A nonnegative isomorphism-invariant function `f(omega, x, y)`, vanishing when
/// `d(x, y)` exceeds [`TransportFunction::radius`].
pub trait TransportFunction: Send + Sync {
    fn name(&self) -> String;

    fn radius(&self) -> usize;

    fn eval(&self, g: &dyn LocalGraph, x: &VertexId, y: &VertexId) -> Result<f64>;

    /// Whether `f` is defined on this instance.
    fn applies(&self, _g: &dyn LocalGraph) -> bool {
        true
    }

    /// `(sum_x f(o, x), sum_x f(x, o))`, by default over `x` in `B(o, radius)`.
    fn sent_received(&self, g: &dyn LocalGraph) -> Result<(f64, f64)> {
        let o = g.root();
        let mut sent = 0.0;
        let mut received = 0.0;
        for layer in layers(g, &o, self.radius())? {
            for x in layer {
                sent += self.eval(g, &o, &x)?;
                received += self.eval(g, &x, &o)?;
            }
        }
        Ok((sent, received))
    }
}

/// BFS spheres `S(x, 0), ..., S(x, k)`.
pub fn layers(g: &dyn LocalGraph, x: &VertexId, k: usize) -> Result<Vec<Vec<VertexId>>> {
    let mut seen: HashSet<VertexId> = HashSet::from([x.clone()]);
    let mut out = vec![vec![x.clone()]];
    for _ in 0..k {
        let mut next = Vec::new();
        for v in out.last().expect("nonempty") {
            for w in g.neighbors(v)?.iter() {
                if seen.insert(w.clone()) {
                    next.push(w.clone());
                }
            }
        }
        out.push(next);
    }
    Ok(out)
}

fn degree(g: &dyn LocalGraph, x: &VertexId) -> Result<usize> {
    Ok(g.neighbors(x)?.len())
}

fn adjacent(g: &dyn LocalGraph, x: &VertexId, y: &VertexId) -> Result<bool> {
    Ok(g.neighbors(x)?.contains(y))
}

/// `1{x ~ y}`.
pub struct EdgeIndicator;

impl TransportFunction for EdgeIndicator {
    fn name(&self) -> String {
        "edge".into()
    }
    fn radius(&self) -> usize {
        1
    }
    fn eval(&self, g: &dyn LocalGraph, x: &VertexId, y: &VertexId) -> Result<f64> {
        Ok(f64::from(u8::from(adjacent(g, x, y)?)))
    }
    fn sent_received(&self, g: &dyn LocalGraph) -> Result<(f64, f64)> {
        let d = degree(g, &g.root())? as f64;
        Ok((d, d))
    }
}

/// `1{y is the parent of x}`, the parent being the unique neighbor one level up.
pub struct ParentIndicator;

fn parent(g: &dyn LocalGraph, x: &VertexId) -> Result<Option<VertexId>> {
    let Some(lx) = g.level(x) else { return Ok(None) };
    Ok(g.neighbors(x)?.iter().find(|w| g.level(w) == Some(lx + 1)).cloned())
}

impl TransportFunction for ParentIndicator {
    fn name(&self) -> String {
        "parent".into()
    }
    fn radius(&self) -> usize {
        1
    }
    fn applies(&self, g: &dyn LocalGraph) -> bool {
        g.level(&g.root()).is_some()
    }
    fn eval(&self, g: &dyn LocalGraph, x: &VertexId, y: &VertexId) -> Result<f64> {
        Ok(f64::from(u8::from(parent(g, x)?.as_ref() == Some(y))))
    }
    fn sent_received(&self, g: &dyn LocalGraph) -> Result<(f64, f64)> {
        let o = g.root();
        let sent = f64::from(u8::from(parent(g, &o)?.is_some()));
        let mut received = 0.0;
        for x in g.neighbors(&o)?.iter() {
            received += self.eval(g, x, &o)?;
        }
        Ok((sent, received))
    }
}

/// `1{x ~ y} |B(x, 1)|`.
pub struct BallWeighted;

impl TransportFunction for BallWeighted {
    fn name(&self) -> String {
        "ball_weighted".into()
    }
    fn radius(&self) -> usize {
        1
    }
    fn eval(&self, g: &dyn LocalGraph, x: &VertexId, y: &VertexId) -> Result<f64> {
        if adjacent(g, x, y)? {
            Ok(degree(g, x)? as f64 + 1.0)
        } else {
            Ok(0.0)
        }
    }
    fn sent_received(&self, g: &dyn LocalGraph) -> Result<(f64, f64)> {
        let o = g.root();
        let ns = g.neighbors(&o)?;
        let d = ns.len() as f64;
        let mut received = 0.0;
        for x in ns.iter() {
            received += degree(g, x)? as f64 + 1.0;
        }
        Ok((d * (d + 1.0), received))
    }
}

/// Number of edges leaving `B(x, 1)`.
fn ball_boundary(g: &dyn LocalGraph, x: &VertexId) -> Result<usize> {
    let ns = g.neighbors(x)?;
    let mut count = 0;
    for w in ns.iter() {
        for z in g.neighbors(w)?.iter() {
            if z != x && !ns.contains(z) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `1{x ~ y} |boundary edges of B(x, 1)|`.
pub struct BoundaryCounter;

impl TransportFunction for BoundaryCounter {
    fn name(&self) -> String {
        "boundary".into()
    }
    fn radius(&self) -> usize {
        1
    }
    fn eval(&self, g: &dyn LocalGraph, x: &VertexId, y: &VertexId) -> Result<f64> {
        if adjacent(g, x, y)? {
            Ok(ball_boundary(g, x)? as f64)
        } else {
            Ok(0.0)
        }
    }
    fn sent_received(&self, g: &dyn LocalGraph) -> Result<(f64, f64)> {
        let o = g.root();
        let ns = g.neighbors(&o)?;
        let sent = ns.len() as f64 * ball_boundary(g, &o)? as f64;
        let mut received = 0.0;
        for x in ns.iter() {
            received += ball_boundary(g, x)? as f64;
        }
        Ok((sent, received))
    }
}

/// `1{d(x, y) = k} / |S(x, k)|`: each vertex spreads unit mass over its k-sphere.
pub struct DistanceK(pub usize);

impl TransportFunction for DistanceK {
    fn name(&self) -> String {
        format!("distance_{}", self.0)
    }
    fn radius(&self) -> usize {
        self.0
    }
    fn eval(&self, g: &dyn LocalGraph, x: &VertexId, y: &VertexId) -> Result<f64> {
        let s = layers(g, x, self.0)?.pop().expect("k+1 layers");
        Ok(if s.contains(y) { 1.0 / s.len() as f64 } else { 0.0 })
    }
    fn sent_received(&self, g: &dyn LocalGraph) -> Result<(f64, f64)> {
        let o = g.root();
        let s = layers(g, &o, self.0)?.pop().expect("k+1 layers");
        let sent = f64::from(u8::from(!s.is_empty()));
        let mut received = 0.0;
        for x in &s {
            let sx = layers(g, x, self.0)?.pop().expect("k+1 layers");
            received += 1.0 / sx.len() as f64;
        }
        Ok((sent, received))
    }
}

/// Largest piece treated as finite by [`PiecePairs`].
pub const PIECE_CAP: usize = 256;

/// The component of `x` after deleting label-1 edges, if it has at most
/// [`PIECE_CAP`] vertices.
fn piece(g: &dyn LocalGraph, x: &VertexId) -> Result<Option<HashSet<VertexId>>> {
    let mut seen = HashSet::from([x.clone()]);
    let mut q = VecDeque::from([x.clone()]);
    while let Some(v) = q.pop_front() {
        for w in g.neighbors(&v)?.iter() {
            if g.edge_label(&v, w) != 1 && seen.insert(w.clone()) {
                if seen.len() > PIECE_CAP {
                    return Ok(None);
                }
                q.push_back(w.clone());
            }
        }
    }
    Ok(Some(seen))
}

/// Finite pieces joined to `p` by a label-1 edge.
fn adjacent_pieces(g: &dyn LocalGraph, p: &HashSet<VertexId>) -> Result<Vec<HashSet<VertexId>>> {
    let mut out: Vec<HashSet<VertexId>> = Vec::new();
    let mut skip: HashSet<VertexId> = HashSet::new();
    for u in p {
        for w in g.neighbors(u)?.iter() {
            if g.edge_label(u, w) != 1 || p.contains(w) || skip.contains(w) || out.iter().any(|q| q.contains(w)) {
                continue;
            }
            match piece(g, w)? {
                Some(q) => out.push(q),
                None => {
                    skip.insert(w.clone());
                }
            }
        }
    }
    Ok(out)
}

/// Mass between pieces (components without label-1 edges, e.g. the boxes of a
/// vertex replacement): `f(x, y) = 1 / (|P(x)|^2 |P(y)|)` when the finite pieces
/// `P(x) != P(y)` are joined by a label-1 edge. Detects a root piece that is not
/// size biased.
pub struct PiecePairs;

impl TransportFunction for PiecePairs {
    fn name(&self) -> String {
        "piece_pairs".into()
    }
    fn radius(&self) -> usize {
        2 * PIECE_CAP + 1
    }
    fn eval(&self, g: &dyn LocalGraph, x: &VertexId, y: &VertexId) -> Result<f64> {
        let (Some(px), Some(py)) = (piece(g, x)?, piece(g, y)?) else { return Ok(0.0) };
        if px.contains(y) {
            return Ok(0.0);
        }
        for u in &px {
            for w in g.neighbors(u)?.iter() {
                if g.edge_label(u, w) == 1 && py.contains(w) {
                    return Ok(1.0 / ((px.len() * px.len() * py.len()) as f64));
                }
            }
        }
        Ok(0.0)
    }
    fn sent_received(&self, g: &dyn LocalGraph) -> Result<(f64, f64)> {
        let Some(p) = piece(g, &g.root())? else { return Ok((0.0, 0.0)) };
        let n = p.len() as f64;
        let adj = adjacent_pieces(g, &p)?;
        let sent = adj.len() as f64 / (n * n);
        let received = adj.iter().map(|q| 1.0 / (q.len() as f64 * n)).sum();
        Ok((sent, received))
    }
}

/// Built-in functions by name; `distance_<k>` takes any `k`.
pub fn transport_by_name(name: &str) -> Result<Box<dyn TransportFunction>> {
    Ok(match name {
        "edge" => Box::new(EdgeIndicator),
        "parent" => Box::new(ParentIndicator),
        "ball_weighted" => Box::new(BallWeighted),
        "boundary" => Box::new(BoundaryCounter),
        "piece_pairs" => Box::new(PiecePairs),
        _ => match name.strip_prefix("distance_").and_then(|k| k.parse().ok()) {
            Some(k) => Box::new(DistanceK(k)),
            None => return Err(Error::InvalidParameter(format!("unknown transport function {name:?}"))),
        },
    })
}

/// The standard battery.
pub fn standard_battery() -> Vec<Box<dyn TransportFunction>> {
    vec![
        Box::new(EdgeIndicator),
        Box::new(ParentIndicator),
        Box::new(BallWeighted),
        Box::new(BoundaryCounter),
        Box::new(DistanceK(2)),
        Box::new(PiecePairs),
    ]
}
