//! Small statistical helpers: confidence intervals, summaries, goodness of fit.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub se: f64,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self { n, mean: f64::NAN, se: f64::NAN };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let se = if n > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self { n, mean, se }
    }

    pub fn ci(&self) -> (f64, f64) {
        normal_interval(self.mean, self.se, Z95)
    }
}

pub fn normal_interval(mean: f64, se: f64, z: f64) -> (f64, f64) {
    (mean - z * se, mean + z * se)
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let ph = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (ph + z2 / (2.0 * n)) / denom;
    let half = z * (ph * (1.0 - ph) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes as f64 == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Two-sided p-value of a standard normal statistic.
pub fn two_sided_p(z: f64) -> f64 {
    if !z.is_finite() {
        return if z.is_nan() { 1.0 } else { 0.0 };
    }
    let nd = Normal::new(0.0, 1.0).expect("standard normal");
    2.0 * (1.0 - nd.cdf(z.abs()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Number of bins after merging sparse ones.
    pub bins: usize,
}

/// Pearson goodness-of-fit test of `observed` counts against probabilities
/// `expected`. Adjacent bins are merged until every expected count is at least 5.
/// Probability mass missing from `expected` goes into the last bin.
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> ChiSquareResult {
    assert_eq!(observed.len(), expected.len());
    let total: u64 = observed.iter().sum();
    let t = total as f64;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        acc.0 += o as f64;
        acc.1 += e * t;
        if acc.1 >= 5.0 {
            bins.push(acc);
            acc = (0.0, 0.0);
        }
    }
    let missing = (1.0 - expected.iter().sum::<f64>()).max(0.0) * t;
    acc.1 += missing;
    if acc.0 > 0.0 || acc.1 > 0.0 {
        match bins.last_mut() {
            Some(last) if acc.1 < 5.0 => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            _ => bins.push(acc),
        }
    }
    let statistic: f64 = bins
        .iter()
        .map(|&(o, e)| if e > 0.0 { (o - e).powi(2) / e } else if o > 0.0 { f64::INFINITY } else { 0.0 })
        .sum();
    let dof = bins.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else if !statistic.is_finite() {
        0.0
    } else {
        let d = ChiSquared::new(dof as f64).expect("positive dof");
        1.0 - d.cdf(statistic)
    };
    ChiSquareResult { statistic, dof, p_value, bins: bins.len() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(30, 100, Z95);
        assert!(lo < 0.3 && 0.3 < hi);
        assert!((lo - 0.2189).abs() < 1e-3, "{lo}");
        assert!((hi - 0.3958).abs() < 1e-3, "{hi}");
    }

    #[test]
    fn wilson_edge_cases() {
        let (lo, hi) = wilson_interval(0, 50, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.1);
        assert_eq!(wilson_interval(0, 0, Z95), (0.0, 1.0));
    }

    #[test]
    fn summary_matches_hand_values() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn two_sided_p_values() {
        assert!((two_sided_p(Z95) - 0.05).abs() < 1e-9);
        assert_eq!(two_sided_p(0.0), 1.0);
    }

    #[test]
    fn chi_square_perfect_fit() {
        let r = chi_square_gof(&[25, 25, 25, 25], &[0.25; 4]);
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.dof, 3);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chi_square_detects_misfit() {
        let r = chi_square_gof(&[90, 10], &[0.5, 0.5]);
        assert!(r.p_value < 1e-10);
    }

    #[test]
    fn chi_square_merges_sparse_bins() {
        let r = chi_square_gof(&[50, 45, 3, 1, 1], &[0.5, 0.45, 0.03, 0.01, 0.01]);
        assert_eq!(r.bins, 3);
    }
}
