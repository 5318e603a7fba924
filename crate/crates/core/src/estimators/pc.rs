use serde::{Deserialize, Serialize};

use super::{CriticalEstimate, EstimateKind};
use crate::error::{Error, Result};
use crate::generators::GraphSource;
use crate::percolation::survival_profile;
use crate::report::EstimateReport;

/// Largest relative drop between consecutive radii still read as stable.
const MAX_DROP: f64 = 0.2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PcConfig {
    pub radii: Vec<usize>,
    pub theta_min: f64,
    pub bracket: (f64, f64),
    pub tol: f64,
    pub replicas: usize,
    pub seed: u64,
    /// How many times an undecided probe may add a radius and double replicas.
    pub max_extensions: u32,
}

impl Default for PcConfig {
    fn default() -> Self {
        Self {
            radii: vec![25, 50, 100],
            theta_min: 0.02,
            bracket: (0.0, 1.0),
            tol: 0.05,
            replicas: 2000,
            seed: 0,
            max_extensions: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Supercritical,
    Subcritical,
    Undecided,
}

/// Reads a survival profile (increasing radii): stable above `theta_min` is
/// supercritical, ending below `theta_min / 4` is subcritical.
pub fn classify_survival(rows: &[EstimateReport], theta_min: f64) -> Phase {
    let Some(last) = rows.last() else { return Phase::Undecided };
    let stable = rows.windows(2).all(|w| w[1].estimate >= (1.0 - MAX_DROP) * w[0].estimate);
    if stable && rows.iter().all(|r| r.estimate >= theta_min) {
        Phase::Supercritical
    } else if last.estimate < theta_min / 4.0 {
        Phase::Subcritical
    } else {
        Phase::Undecided
    }
}

/// Survival profile at `p`; while undecided the radius schedule slides outwards
/// and the replica count doubles.
pub fn survival_phase(src: &dyn GraphSource, p: f64, cfg: &PcConfig) -> Result<(Phase, Vec<EstimateReport>)> {
    let mut radii = cfg.radii.clone();
    let mut n = cfg.replicas;
    let mut k = 0;
    loop {
        let rows = survival_profile(src, p, &radii, n, cfg.seed)?;
        let phase = classify_survival(&rows, cfg.theta_min);
        if phase != Phase::Undecided || k == cfg.max_extensions {
            return Ok((phase, rows));
        }
        // slide the schedule outwards: drop the smallest radius, double the largest
        radii.push(2 * radii.last().copied().unwrap_or(1));
        if radii.len() > 2 {
            radii.remove(0);
        }
        n *= 2;
        k += 1;
    }
}

/// Bisection for pc on the survival proxy. Verdicts are empirical.
pub fn pc_bisect(src: &dyn GraphSource, cfg: &PcConfig) -> Result<CriticalEstimate> {
    if cfg.radii.is_empty() || cfg.radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("radius schedule must be nonempty and increasing".into()));
    }
    let (mut lo, mut hi) = cfg.bracket;
    if !(0.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(Error::InvalidParameter(format!("bad bracket [{lo}, {hi}]")));
    }
    let mut evidence = Vec::new();
    let mut notes = vec!["empirical: survival to finite radii stands in for an infinite cluster".to_string()];
    let (phase, rows) = survival_phase(src, lo, cfg)?;
    evidence.extend(rows);
    if phase != Phase::Subcritical {
        return Err(Error::Bracket { lo, hi, detail: format!("lower end reads {phase:?}") });
    }
    let (phase, rows) = survival_phase(src, hi, cfg)?;
    evidence.extend(rows);
    if phase != Phase::Supercritical {
        return Err(Error::Bracket { lo, hi, detail: format!("upper end reads {phase:?}") });
    }
    let mut conclusive = true;
    while hi - lo > cfg.tol {
        let mid = 0.5 * (lo + hi);
        let (phase, rows) = survival_phase(src, mid, cfg)?;
        evidence.extend(rows);
        match phase {
            Phase::Subcritical => lo = mid,
            Phase::Supercritical => hi = mid,
            Phase::Undecided => {
                notes.push(format!("undecided at p = {mid} after {} extensions", cfg.max_extensions));
                conclusive = false;
                break;
            }
        }
    }
    Ok(CriticalEstimate { kind: EstimateKind::Pc, interval: (lo, hi), conclusive, evidence, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{PathSource, UgwSource};

    fn row(estimate: f64) -> EstimateReport {
        EstimateReport {
            experiment: "survival".into(),
            source_hash: String::new(),
            p: 0.5,
            radius: 0,
            replicas: 1,
            estimate,
            ci_lo: estimate,
            ci_hi: estimate,
            seed: 0,
        }
    }

    #[test]
    fn classifier() {
        let rows: Vec<_> = [0.3, 0.28, 0.27].into_iter().map(row).collect();
        assert_eq!(classify_survival(&rows, 0.02), Phase::Supercritical);
        let rows: Vec<_> = [0.2, 0.05, 0.001].into_iter().map(row).collect();
        assert_eq!(classify_survival(&rows, 0.02), Phase::Subcritical);
        let rows: Vec<_> = [0.2, 0.1, 0.05].into_iter().map(row).collect();
        assert_eq!(classify_survival(&rows, 0.02), Phase::Undecided);
    }

    #[test]
    fn regular_tree_contains_half() {
        let cfg = PcConfig { bracket: (0.3, 0.8), seed: 11, ..Default::default() };
        let e = pc_bisect(&UgwSource::regular3(), &cfg).unwrap();
        assert!(e.contains(0.5) && e.width() <= 0.05, "{:?} {:?}", e.interval, e.notes);
    }

    #[test]
    fn path_never_supercritical_below_one() {
        let cfg = PcConfig { bracket: (0.2, 0.9), replicas: 200, ..Default::default() };
        assert!(matches!(pc_bisect(&PathSource, &cfg), Err(Error::Bracket { .. })));
    }
}
