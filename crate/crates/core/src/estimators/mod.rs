//! Critical-probability estimators built from the percolation and phi probes.

mod diag;
mod estimate;
mod pc;

pub use diag::{classify_increments, p0_root, pt_diagnostic, pta_diagnostic, DiagPoint, Diagnostic, Growth};
pub use estimate::{CriticalEstimate, EstimateKind};
pub use pc::{classify_survival, pc_bisect, survival_phase, PcConfig, Phase};
