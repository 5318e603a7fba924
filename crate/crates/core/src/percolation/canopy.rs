use serde::Serialize;

use crate::generators::canopy_sphere_count;
use crate::scalar::Real;

/// Partial sums `sum_{d <= D} count(n, d) p^d` of the expected cluster size
/// in the canopy tree rooted at level `n`.
#[derive(Clone, Debug, Serialize)]
pub struct CanopySeries<T> {
    pub p: T,
    pub level: usize,
    /// `partial[D]` for `D = 0..=depth`.
    pub partial: Vec<T>,
    /// The last increment is still at least `1e-9`.
    pub tail_flag: bool,
}

impl<T: Real> CanopySeries<T> {
    pub fn increment(&self, d: usize) -> T {
        if d == 0 {
            self.partial[0]
        } else {
            self.partial[d] - self.partial[d - 1]
        }
    }

    /// First depth at which the increment drops below `eps`.
    pub fn converged_by(&self, eps: T) -> Option<usize> {
        (1..self.partial.len()).find(|&d| self.increment(d) < eps)
    }

    /// First depth at which the partial sum exceeds `bound`.
    pub fn exceeds_by(&self, bound: T) -> Option<usize> {
        self.partial.iter().position(|&s| s > bound)
    }

    pub fn value(&self) -> T {
        *self.partial.last().expect("depth >= 0")
    }
}

pub fn canopy_expected_cluster_size_exact<T: Real>(p: T, level: usize, depth: usize) -> CanopySeries<T> {
    let mut partial = Vec::with_capacity(depth + 1);
    let mut acc = T::zero();
    let mut pd = T::one();
    for d in 0..=depth {
        acc = acc + T::lit(canopy_sphere_count(level, d)) * pd;
        partial.push(acc);
        pd = pd * p;
    }
    let mut s = CanopySeries { p, level, partial, tail_flag: false };
    s.tail_flag = depth > 0 && s.increment(depth) >= T::lit(1e-9);
    s
}
