//! The canonical experiment set with a pass/fail verdict per criterion.
//!
//! Each criterion is a list of named checks. A check may be marked as a
//! known gap: the quantity is computed and reported faithfully, but the
//! stated threshold is not reachable for documented reasons, so callers
//! should not treat its failure as a regression.

mod criteria;
mod criteria_b;

use std::time::Instant;

use serde::Serialize;

use crate::error::Result;

pub use criteria::{canopy_phi, canopy_ptilde, gkl_bounds, oracle_equivalence, ugw_pc};
pub use criteria_b::{box_sequence, canopy_series, crossing, mtp_battery_check, ptk_checks};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub known_gap: bool,
    pub detail: String,
}

impl Check {
    pub fn new(label: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { label: label.into(), pass, known_gap: false, detail: detail.into() }
    }

    pub fn gap(mut self) -> Self {
        self.known_gap = true;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl CriterionOutcome {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Every check passes except possibly known gaps.
    pub fn pass_modulo_gaps(&self) -> bool {
        self.checks.iter().all(|c| c.pass || c.known_gap)
    }

    pub fn summary_line(&self) -> String {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        let failed: Vec<&str> = self.checks.iter().filter(|c| !c.pass).map(|c| c.label.as_str()).collect();
        let mut line = format!("criterion {:>2} {verdict} {} ({:.1}s)", self.id, self.name, self.seconds);
        if !failed.is_empty() {
            line.push_str(&format!(" failing: {}", failed.join(", ")));
        }
        line
    }
}

/// Replica scale and base seed for a suite run. `scale = 1.0` uses the
/// counts the criteria state.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuiteOptions {
    pub scale: f64,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { scale: 1.0, seed: 20 }
    }
}

impl SuiteOptions {
    pub(crate) fn n(&self, replicas: usize) -> usize {
        ((replicas as f64 * self.scale).round() as usize).max(200.min(replicas))
    }
}

pub type CriterionFn = fn(&SuiteOptions) -> Result<Vec<Check>>;

pub const CRITERIA: [(u32, &str, CriterionFn); 10] = [
    (1, "canopy annealed phi closed form", canopy_phi),
    (2, "canopy annealed ptilde_c", canopy_ptilde),
    (3, "G(3,5) pc and phi at 5/24", gkl_bounds),
    (4, "UGW pc = 1/E X and locality", ugw_pc),
    (5, "phi oracle equivalence", oracle_equivalence),
    (6, "mass transport battery", mtp_battery_check),
    (7, "canopy exact cluster-size series", canopy_series),
    (8, "box sequence bounds", box_sequence),
    (9, "four-point crossing", crossing),
    (10, "heavy-tailed boxes", ptk_checks),
];

/// Runs one criterion, turning an error into a failed check.
pub fn run_criterion(id: u32, opts: &SuiteOptions) -> Option<CriterionOutcome> {
    let &(id, name, f) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let checks = f(opts).unwrap_or_else(|e| vec![Check::new("run", false, e.to_string())]);
    Some(CriterionOutcome { id, name: name.to_string(), checks, seconds: start.elapsed().as_secs_f64() })
}

pub fn run_all(opts: &SuiteOptions) -> Vec<CriterionOutcome> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0, opts)).collect()
}
