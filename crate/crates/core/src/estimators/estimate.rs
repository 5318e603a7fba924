use serde::{Deserialize, Serialize};

use crate::report::EstimateReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    Pc,
    PtDiag,
    PtaDiag,
    PtildeA,
}

/// An interval for a critical probability together with the probe rows it
/// rests on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalEstimate {
    pub kind: EstimateKind,
    pub interval: (f64, f64),
    /// False when the procedure stopped on an undecided probe.
    pub conclusive: bool,
    pub evidence: Vec<EstimateReport>,
    pub notes: Vec<String>,
}

impl CriticalEstimate {
    pub fn width(&self) -> f64 {
        self.interval.1 - self.interval.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.interval.0 <= x && x <= self.interval.1
    }
}
