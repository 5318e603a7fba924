//! Bernoulli bond percolation: configurations, clusters, exact oracles and
//! Monte Carlo probes.

mod canopy;
mod clusters;
mod config;
mod crossing;
mod oracle;
mod probe;

pub use canopy::{canopy_expected_cluster_size_exact, CanopySeries};
pub use clusters::{clusters, ClusterPartition, UnionFind};
pub use config::{percolate, percolate_keyed, stream_key, PercConfig};
pub use crossing::{four_point_crossing, four_point_crossing_curve};
pub use oracle::{connection_counts, connectivity_oracle, eval_counts, ORACLE_EDGE_CAP};
pub use probe::{
    cluster_reach, cluster_sizes_in_balls, edge_open, expected_cluster_size_probe, perc_key, survival_probe,
    survival_profile, ClusterSizeTable, Sampling,
};
pub(crate) use probe::mean_report;
