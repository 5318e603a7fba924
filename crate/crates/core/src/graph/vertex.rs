use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::rng;

/// Address of a vertex relative to the root of a lazily generated graph.
///
/// Each generator defines its own scheme (tree paths, lattice coordinates,
/// tagged composites); the root of tree-like instances is the empty address.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub SmallVec<[i32; 6]>);

impl VertexId {
    pub fn root() -> Self {
        Self(SmallVec::new())
    }

    pub fn from_slice(parts: &[i32]) -> Self {
        Self(SmallVec::from_slice(parts))
    }

    pub fn parts(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, idx: i32) -> Self {
        let mut v = self.clone();
        v.0.push(idx);
        v
    }

    pub fn parent(&self) -> Option<Self> {
        if self.0.is_empty() {
            None
        } else {
            Some(Self(SmallVec::from_slice(&self.0[..self.0.len() - 1])))
        }
    }

    /// Stable 64-bit hash, independent of the std hasher.
    pub fn stable_hash(&self) -> u64 {
        let mut k = rng::combine(0x51_7C_C1_B7_27_22_0A_95, self.0.len() as u64);
        for &x in &self.0 {
            k = rng::combine(k, x as u32 as u64);
        }
        k
    }
}

/// Direction-free key of the edge `{a, b}`.
pub fn edge_key(a: &VertexId, b: &VertexId) -> u64 {
    let (ha, hb) = (a.stable_hash(), b.stable_hash());
    let (lo, hi) = if (ha, a) <= (hb, b) { (ha, hb) } else { (hb, ha) };
    rng::combine(rng::mix64(lo), hi)
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

#[macro_export]
macro_rules! vid {
    ($($x:expr),* $(,)?) => {
        $crate::graph::VertexId::from_slice(&[$($x as i32),*])
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_key_is_symmetric() {
        let a = vid![1, 2];
        let b = vid![3];
        assert_eq!(edge_key(&a, &b), edge_key(&b, &a));
        assert_ne!(edge_key(&a, &b), edge_key(&a, &vid![4]));
    }

    #[test]
    fn parent_child() {
        let r = VertexId::root();
        let c = r.child(2).child(0);
        assert_eq!(c.parent().unwrap(), vid![2]);
        assert_eq!(r.parent(), None);
        assert_eq!(c.to_string(), "[2,0]");
    }
}
