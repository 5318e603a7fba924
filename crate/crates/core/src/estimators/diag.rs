use serde::{Deserialize, Serialize};

use super::{CriticalEstimate, EstimateKind};
use crate::error::Result;
use crate::generators::GraphSource;
use crate::percolation::{expected_cluster_size_probe, Sampling};
use crate::report::EstimateReport;
use crate::stats::Z95;

/// Ratio thresholds on consecutive increments of the truncated means.
const DIVERGING_RATIO: f64 = 0.95;
const CONVERGING_RATIO: f64 = 0.5;
/// Increment ratios inspected, counted from the largest truncation down.
const TOP_RATIOS: usize = 3;
/// One replica holding this share of the total sum triggers a warning.
const HEAVY_SHARE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    Converging,
    Diverging,
    Inconclusive,
}

/// Classifies increasing truncations of a mean by the ratios of consecutive
/// increments; increments within two standard errors count as zero.
pub fn classify_increments(rows: &[EstimateReport]) -> Growth {
    let se = |r: &EstimateReport| (r.ci_hi - r.estimate) / Z95;
    let incr: Vec<f64> = rows
        .windows(2)
        .map(|w| {
            let d = w[1].estimate - w[0].estimate;
            let s = (se(&w[0]).powi(2) + se(&w[1]).powi(2)).sqrt();
            if d.abs() <= 2.0 * s {
                0.0
            } else {
                d
            }
        })
        .collect();
    if incr.len() < 2 {
        return Growth::Inconclusive;
    }
    let ratios: Vec<f64> = incr
        .windows(2)
        .map(|w| match (w[0], w[1]) {
            (_, b) if b == 0.0 => 0.0,
            (a, _) if a <= 0.0 => f64::INFINITY,
            (a, b) => b / a,
        })
        .collect();
    let top = &ratios[ratios.len().saturating_sub(TOP_RATIOS)..];
    if top.iter().all(|&r| r > DIVERGING_RATIO) {
        Growth::Diverging
    } else if top.iter().all(|&r| r < CONVERGING_RATIO) {
        Growth::Converging
    } else {
        Growth::Inconclusive
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagPoint {
    pub p: f64,
    pub growth: Growth,
    /// Largest single-replica value over the mean, per radius.
    pub max_over_mean: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostic {
    pub estimate: CriticalEstimate,
    pub points: Vec<DiagPoint>,
}

fn diagnostic(
    kind: EstimateKind,
    src: &dyn GraphSource,
    ps: &[f64],
    radii: &[usize],
    replicas: usize,
    seed: u64,
    sampling: Sampling,
) -> Result<Diagnostic> {
    let mut evidence = Vec::new();
    let mut points = Vec::new();
    let mut notes = Vec::new();
    for &p in ps {
        let t = expected_cluster_size_probe(src, p, radii, replicas, seed, sampling)?;
        let growth = classify_increments(&t.rows);
        let mom = t.max_over_mean();
        if kind == EstimateKind::PtaDiag {
            for (r, m) in radii.iter().zip(&mom) {
                if m / replicas as f64 >= HEAVY_SHARE {
                    notes.push(format!(
                        "heavy tail at p = {p}, radius {r}: one replica holds {:.1}% of the sum",
                        100.0 * m / replicas as f64
                    ));
                }
            }
        }
        evidence.extend(t.rows);
        points.push(DiagPoint { p, growth, max_over_mean: mom });
    }
    let first_div = points.iter().filter(|d| d.growth == Growth::Diverging).map(|d| d.p).fold(f64::INFINITY, f64::min);
    let last_conv = points
        .iter()
        .filter(|d| d.growth == Growth::Converging && d.p < first_div)
        .map(|d| d.p)
        .fold(f64::NEG_INFINITY, f64::max);
    let lo = if last_conv.is_finite() { last_conv } else { 0.0 };
    let hi = if first_div.is_finite() { first_div } else { 1.0 };
    let monotone = !points.iter().any(|d| d.growth == Growth::Converging && d.p > first_div);
    if !monotone {
        notes.push("converging verdict above a diverging one".into());
    }
    let estimate = CriticalEstimate { kind, interval: (lo, hi), conclusive: monotone, evidence, notes };
    Ok(Diagnostic { estimate, points })
}

/// Quenched truncated mean cluster size on one instance, per `p`.
pub fn pt_diagnostic(src: &dyn GraphSource, ps: &[f64], radii: &[usize], replicas: usize, seed: u64) -> Result<Diagnostic> {
    diagnostic(EstimateKind::PtDiag, src, ps, radii, replicas, seed, Sampling::Quenched(seed))
}

/// Root-averaged truncated mean cluster size, per `p`, with heavy-tail warnings.
pub fn pta_diagnostic(src: &dyn GraphSource, ps: &[f64], radii: &[usize], replicas: usize, seed: u64) -> Result<Diagnostic> {
    diagnostic(EstimateKind::PtaDiag, src, ps, radii, replicas, seed, Sampling::Annealed)
}

fn p0_map(p: f64) -> f64 {
    p * (1.0 - (1.0 - p).powi(3)).powi(2)
}

/// Root of `p (1 - (1-p)^3)^2 = 1/2` on `[1/2, 1]`, where the map is increasing.
pub fn p0_root() -> f64 {
    let (mut lo, mut hi) = (0.5, 1.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if p0_map(mid) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{CanopySource, PathSource};

    #[test]
    fn p0_brackets() {
        let p0 = p0_root();
        assert!((p0 - 0.583).abs() < 2e-3, "{p0}");
        assert!(p0_map(0.58) < 0.5 && p0_map(0.59) > 0.5);
        assert!((p0_map(p0) - 0.5).abs() < 1e-10);
        assert!(p0_map(1.0) > 0.5);
        let grid: Vec<f64> = (0..=100).map(|i| 0.5 + 0.005 * i as f64).collect();
        assert!(grid.windows(2).all(|w| p0_map(w[0]) < p0_map(w[1])));
    }

    #[test]
    fn path_converges_to_three() {
        let d = pt_diagnostic(&PathSource, &[0.5], &[2, 4, 8, 16, 32], 20_000, 1).unwrap();
        assert_eq!(d.points[0].growth, Growth::Converging);
        let last = d.estimate.evidence.last().unwrap();
        assert!((last.estimate - 3.0).abs() < 0.05, "{last:?}");
    }

    #[test]
    fn p_zero_is_one_everywhere() {
        let d = pta_diagnostic(&CanopySource::new(), &[0.0], &[1, 2, 4], 100, 1).unwrap();
        assert!(d.estimate.evidence.iter().all(|r| r.estimate == 1.0));
        assert_eq!(d.points[0].growth, Growth::Converging);
    }

    #[test]
    fn canopy_band_contains_threshold() {
        let radii = [8, 16, 24, 32, 40];
        let d = pt_diagnostic(&CanopySource::new(), &[0.5, 0.6, 0.8], &radii, 1000, 4).unwrap();
        assert!(d.estimate.contains(std::f64::consts::FRAC_1_SQRT_2), "{:?}", d.points);
    }
}
