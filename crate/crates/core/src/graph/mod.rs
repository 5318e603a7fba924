//! Rooted locally finite graphs: addresses, lazy neighbor oracles, finite
//! balls and canonical codes.

mod ball;
mod canon;
mod finite;
mod local;
mod vertex;

pub use ball::{ball, ball_with_cap, Ball, RootedSet};
pub use canon::{canonical_code, canonical_code_of, CanonicalCode, CANON_CAP};
pub use finite::FiniteGraph;
pub use local::{ball_cap, cluster_cap, distance, LocalGraph, DEFAULT_BALL_CAP, DEFAULT_CLUSTER_CAP};
pub use vertex::{edge_key, VertexId};

/// Length of the shortest cycle fully inside the ball, if any.
pub fn girth_in_ball(b: &Ball) -> Option<usize> {
    b.graph().girth()
}

/// `|B(center, k)|` for `k = 0..=radius` of an extracted ball.
pub fn volumes_by_radius(b: &Ball) -> Vec<usize> {
    let mut out = vec![0usize; b.radius + 1];
    for &d in &b.dist {
        for slot in out.iter_mut().skip(d as usize) {
            *slot += 1;
        }
    }
    out
}
