//! Bond percolation on unimodular random rooted graphs.
//!
//! Exact routines (cluster-size series, phi on finite sets, connection
//! oracles) are generic over the scalar type; the sampling layers work in `f64`.

pub mod convergence;
pub mod error;
pub mod estimators;
pub mod generators;
pub mod graph;
pub mod percolation;
pub mod phi;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod suite;
pub mod unimodularity;

pub use error::{Error, Result};
pub use scalar::Real;

/// Probability type used by the sampling layers.
pub type Prob = f64;

/// Canopy cluster-size series in double precision.
pub type CanopySeries64 = percolation::CanopySeries<f64>;

/// Canopy cluster-size series in single precision.
pub type CanopySeries32 = percolation::CanopySeries<f32>;
