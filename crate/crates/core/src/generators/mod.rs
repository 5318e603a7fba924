//! Graph sources: samplers of random rooted graphs exposed as lazy instances.

mod canopy;
mod contraction;
mod descriptor;
mod edge_repl;
mod lattice;
mod law;
mod memo;
mod perc_cluster;
mod tree;
mod vertex_repl;

pub use canopy::{canopy_sphere_count, CanopyGraph, CanopySource, CANOPY_LEVEL_CAP};
pub use contraction::{Contracted, ContractionSource, LabelRule, COMPONENT_CAP};
pub use descriptor::{parse_law, source_from_json, SourceDescriptor};
pub use edge_repl::{EdgeKit, EdgeReplaced, EdgeReplacementSource, TwoPointed};
pub use lattice::{BoxGraph, BoxSource, CycleGraph, CycleSource, PathGraph, PathSource, Z2Graph, Z2Source};
pub use law::{extinction_probability, OffspringLaw, SurvivalDecomposition};
pub use perc_cluster::{OpenCluster, PercClusterSource};
pub use tree::{GklRule, GklSource, GklState, LazyTree, TreeRule, UgwRule, UgwSource, UgwState};
pub use vertex_repl::{BoxLaw, BoxedLattice, HeavyTail, VertexKit, VertexReplacementSource, HEAVY_TAIL_CAP};

use serde::Serialize;

use crate::error::Result;
use crate::graph::{ball, volumes_by_radius, LocalGraph};
use crate::rng;

/// A sampled rooted instance.
pub type Instance = Box<dyn LocalGraph>;

/// A sampler of random rooted graphs from a fixed law.
///
/// `sample` must be deterministic in `seed` and callable from several threads.
pub trait GraphSource: Send + Sync {
    fn descriptor(&self) -> SourceDescriptor;

    fn sample(&self, seed: u64) -> Result<Instance>;

    /// Optional stratification of the root law: stratum probabilities, the
    /// truncated tail mass, and a conditional sampler per stratum.
    fn strata(&self) -> Option<(Vec<f64>, f64)> {
        None
    }

    fn sample_stratum(&self, _stratum: usize, seed: u64) -> Result<Instance> {
        self.sample(seed)
    }

    /// True when each stratum holds a single rooted graph.
    fn strata_are_deterministic(&self) -> bool {
        false
    }

    /// True when every instance is the same rooted graph.
    fn is_deterministic(&self) -> bool {
        false
    }

    /// Almost-sure bound on vertex degrees, when one exists.
    fn max_degree(&self) -> Option<usize> {
        None
    }
}

impl<S: GraphSource + ?Sized> GraphSource for Box<S> {
    fn descriptor(&self) -> SourceDescriptor {
        (**self).descriptor()
    }
    fn sample(&self, seed: u64) -> Result<Instance> {
        (**self).sample(seed)
    }
    fn strata(&self) -> Option<(Vec<f64>, f64)> {
        (**self).strata()
    }
    fn sample_stratum(&self, stratum: usize, seed: u64) -> Result<Instance> {
        (**self).sample_stratum(stratum, seed)
    }
    fn strata_are_deterministic(&self) -> bool {
        (**self).strata_are_deterministic()
    }
    fn is_deterministic(&self) -> bool {
        (**self).is_deterministic()
    }
    fn max_degree(&self) -> Option<usize> {
        (**self).max_degree()
    }
}

/// Seed of replica `i` of a run seeded with `seed`.
pub fn replica_seed(seed: u64, i: u64) -> u64 {
    rng::key(&[seed, i])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeRow {
    pub radius: usize,
    pub mean: f64,
    pub max: usize,
}

/// Mean and maximum `|B(o, r)|` over sampled roots.
pub fn ball_volume_profile<S: GraphSource + ?Sized>(
    src: &S,
    radii: &[usize],
    replicas: usize,
    seed: u64,
) -> Result<Vec<VolumeRow>> {
    use rayon::prelude::*;
    let rmax = radii.iter().copied().max().unwrap_or(0);
    let per: Vec<Vec<usize>> = (0..replicas as u64)
        .into_par_iter()
        .map(|i| {
            let g = src.sample(replica_seed(seed, i))?;
            Ok(volumes_by_radius(&ball(&g, &g.root(), rmax)?))
        })
        .collect::<Result<_>>()?;
    Ok(radii
        .iter()
        .map(|&r| {
            let vals = per.iter().map(|v| v[r]);
            VolumeRow {
                radius: r,
                mean: vals.clone().sum::<usize>() as f64 / replicas.max(1) as f64,
                max: vals.max().unwrap_or(0),
            }
        })
        .collect())
}
