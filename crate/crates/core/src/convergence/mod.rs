//! Local weak convergence diagnostics: empirical laws of rooted balls and
//! their total variation distances.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{pc_bisect, PcConfig};
use crate::generators::{replica_seed, GraphSource};
use crate::graph::{ball, canonical_code, CanonicalCode};

/// Minimum count per observed code before a distribution counts as well sampled.
pub const MIN_CODE_COUNT: f64 = 20.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeFreq {
    pub code: CanonicalCode,
    pub freq: f64,
}

/// Empirical law of `B(o, r)` up to rooted isomorphism.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallDistribution {
    pub radius: usize,
    pub replicas: usize,
    pub seed: u64,
    /// Sorted by code.
    pub entries: Vec<CodeFreq>,
}

impl BallDistribution {
    fn from_codes(radius: usize, seed: u64, codes: Vec<CanonicalCode>) -> Self {
        let replicas = codes.len();
        let mut counts: BTreeMap<CanonicalCode, usize> = BTreeMap::new();
        for c in codes {
            *counts.entry(c).or_default() += 1;
        }
        let entries = counts
            .into_iter()
            .map(|(code, k)| CodeFreq { code, freq: k as f64 / replicas as f64 })
            .collect();
        Self { radius, replicas, seed, entries }
    }

    pub fn freq(&self, code: &CanonicalCode) -> f64 {
        self.entries
            .binary_search_by(|e| e.code.cmp(code))
            .map_or(0.0, |i| self.entries[i].freq)
    }

    /// True when some observed code was seen fewer than [`MIN_CODE_COUNT`] times.
    pub fn undersampled(&self) -> bool {
        self.entries.iter().any(|e| e.freq * (self.replicas as f64) < MIN_CODE_COUNT)
    }
}

/// Ball laws at every radius in `radii`, all read off the same instances.
pub fn ball_distributions(src: &dyn GraphSource, radii: &[usize], replicas: usize, seed: u64) -> Result<Vec<BallDistribution>> {
    let rmax = radii.iter().copied().max().unwrap_or(0);
    let codes: Vec<Vec<CanonicalCode>> = (0..replicas as u64)
        .into_par_iter()
        .map(|i| {
            let g = src.sample(replica_seed(seed, i))?;
            let b = ball(&*g, &g.root(), rmax)?;
            radii.iter().map(|&r| canonical_code(&b.restrict(r))).collect()
        })
        .collect::<Result<_>>()?;
    Ok(radii
        .iter()
        .enumerate()
        .map(|(j, &r)| BallDistribution::from_codes(r, seed, codes.iter().map(|c| c[j].clone()).collect()))
        .collect())
}

pub fn ball_distribution(src: &dyn GraphSource, r: usize, replicas: usize, seed: u64) -> Result<BallDistribution> {
    Ok(ball_distributions(src, &[r], replicas, seed)?.remove(0))
}

/// `(1/2) sum_c |a(c) - b(c)|`.
pub fn tv_distance(a: &BallDistribution, b: &BallDistribution) -> Result<f64> {
    if a.radius != b.radius {
        return Err(Error::RadiusMismatch(a.radius, b.radius));
    }
    let (mut i, mut j, mut total) = (0, 0, 0.0);
    while i < a.entries.len() || j < b.entries.len() {
        match (a.entries.get(i), b.entries.get(j)) {
            (Some(x), Some(y)) if x.code == y.code => {
                total += (x.freq - y.freq).abs();
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x.code < y.code => {
                total += x.freq;
                i += 1;
            }
            (Some(x), None) => {
                total += x.freq;
                i += 1;
            }
            (_, Some(y)) => {
                total += y.freq;
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Ok((0.5 * total).min(1.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalityRow {
    pub label: String,
    pub radius: usize,
    pub tv: f64,
    pub undersampled: bool,
    pub pc_interval: Option<(f64, f64)>,
    pub pc_conclusive: Option<bool>,
}

/// TV distance of each source's ball laws to the target's, per radius, with a
/// pc interval per source when `pc` is given.
pub fn locality_experiment(
    sources: &[(String, Box<dyn GraphSource>)],
    target: &dyn GraphSource,
    radii: &[usize],
    pc: Option<&PcConfig>,
    replicas: usize,
    seed: u64,
) -> Result<Vec<LocalityRow>> {
    let reference = ball_distributions(target, radii, replicas, seed ^ 0x7a79)?;
    let mut rows = Vec::new();
    for (label, src) in sources {
        let dists = ball_distributions(&**src, radii, replicas, seed)?;
        let est = pc.map(|cfg| pc_bisect(&**src, cfg)).transpose()?;
        for (d, t) in dists.iter().zip(&reference) {
            rows.push(LocalityRow {
                label: label.clone(),
                radius: d.radius,
                tv: tv_distance(d, t)?,
                undersampled: d.undersampled() || t.undersampled(),
                pc_interval: est.as_ref().map(|e| e.interval),
                pc_conclusive: est.as_ref().map(|e| e.conclusive),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{CanopySource, PathSource, UgwSource};

    fn dist(pairs: &[(u8, f64)]) -> BallDistribution {
        let mut entries: Vec<CodeFreq> =
            pairs.iter().map(|&(c, freq)| CodeFreq { code: CanonicalCode(vec![c]), freq }).collect();
        entries.sort_by(|a, b| a.code.cmp(&b.code));
        BallDistribution { radius: 1, replicas: 100, seed: 0, entries }
    }

    #[test]
    fn tv_examples() {
        let a = dist(&[(1, 0.5), (2, 0.5)]);
        assert_eq!(tv_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(tv_distance(&a, &dist(&[(1, 1.0)])).unwrap(), 0.5);
        assert_eq!(tv_distance(&a, &dist(&[(3, 1.0)])).unwrap(), 1.0);
        let mut b = dist(&[(1, 1.0)]);
        b.radius = 2;
        assert!(matches!(tv_distance(&a, &b), Err(Error::RadiusMismatch(1, 2))));
    }

    #[test]
    fn path_has_one_code() {
        let d = ball_distribution(&PathSource, 3, 50, 1).unwrap();
        assert_eq!(d.entries.len(), 1);
        assert_eq!(d.entries[0].freq, 1.0);
    }

    #[test]
    fn canopy_radius_one_split() {
        let d = ball_distribution(&CanopySource::new(), 1, 20_000, 2).unwrap();
        assert_eq!(d.entries.len(), 2);
        for e in &d.entries {
            assert!((e.freq - 0.5).abs() < 0.02, "{e:?}");
        }
        let total: f64 = d.entries.iter().map(|e| e.freq).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn regular_tree_single_code() {
        let d = ball_distribution(&UgwSource::regular3(), 1, 100, 3).unwrap();
        assert_eq!(d.entries.len(), 1);
    }

    #[test]
    fn json_shape() {
        let d = ball_distribution(&PathSource, 1, 5, 1).unwrap();
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["radius"], 1);
        assert!(v["entries"][0]["code"].is_string());
        let back: BallDistribution = serde_json::from_value(v).unwrap();
        assert_eq!(back, d);
    }
}
