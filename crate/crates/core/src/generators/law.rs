//! Offspring laws and the survival decomposition of Galton-Watson trees.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probability mass function on `{0, 1, ..., K}` with an explicitly recorded
/// tail mass beyond `K` (zero for finitely supported laws).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OffspringLaw {
    pmf: Vec<f64>,
    tail: f64,
}

impl OffspringLaw {
    pub fn new(pmf: Vec<f64>) -> Result<Self> {
        Self::with_tail(pmf, 0.0)
    }

    pub fn with_tail(mut pmf: Vec<f64>, tail: f64) -> Result<Self> {
        if pmf.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) || !(tail >= 0.0) {
            return Err(Error::InvalidParameter("offspring pmf must be nonnegative".into()));
        }
        let total: f64 = pmf.iter().sum::<f64>() + tail;
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("offspring pmf sums to {total}, not 1")));
        }
        while pmf.len() > 1 && pmf.last() == Some(&0.0) {
            pmf.pop();
        }
        Ok(Self { pmf, tail })
    }

    pub fn constant(k: usize) -> Self {
        let mut pmf = vec![0.0; k + 1];
        pmf[k] = 1.0;
        Self { pmf, tail: 0.0 }
    }

    /// Uniform on `{lo, ..., hi}`.
    pub fn uniform(lo: usize, hi: usize) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidParameter("uniform law needs lo <= hi".into()));
        }
        let w = 1.0 / (hi - lo + 1) as f64;
        let mut pmf = vec![0.0; hi + 1];
        pmf[lo..=hi].iter_mut().for_each(|x| *x = w);
        Self::new(pmf)
    }

    /// Poisson(`lambda`) truncated where the remaining mass is below 1e-9.
    pub fn poisson(lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter("poisson mean must be finite and >= 0".into()));
        }
        let mut pmf = vec![(-lambda).exp()];
        let mut acc = pmf[0];
        let mut k = 0;
        while 1.0 - acc >= 1e-9 && k < 10_000 {
            k += 1;
            let next = pmf[k - 1] * lambda / k as f64;
            pmf.push(next);
            acc += next;
        }
        let tail = (1.0 - acc).max(0.0);
        let s: f64 = pmf.iter().sum();
        pmf.iter_mut().for_each(|x| *x *= (1.0 - tail) / s);
        Self::with_tail(pmf, tail)
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail
    }

    pub fn max_support(&self) -> usize {
        self.pmf.len() - 1
    }

    pub fn prob(&self, k: usize) -> f64 {
        self.pmf.get(k).copied().unwrap_or(0.0)
    }

    pub fn mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
    }

    /// Generating function `f(t) = E t^X` on the retained support.
    pub fn pgf(&self, t: f64) -> f64 {
        self.pmf.iter().rev().fold(0.0, |acc, &p| acc * t + p)
    }

    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.pmf
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect()
    }

    /// Law of the root degree of the unimodular tree: `P(deg = k)` proportional
    /// to `P(X = k - 1) / k`, indexed by `k`.
    pub fn root_degree_law(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.pmf.len() + 1];
        for (x, &p) in self.pmf.iter().enumerate() {
            out[x + 1] = p / (x + 1) as f64;
        }
        let z: f64 = out.iter().sum();
        out.iter_mut().for_each(|w| *w /= z);
        out
    }
}

/// Extinction probability `q` and the laws of the surviving and doomed parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalDecomposition {
    pub q: f64,
    /// Offspring law of the surviving backbone (generating function
    /// `(f(q + (1-q)t) - q) / (1-q)`); present when `q < 1`.
    pub star_law: Option<OffspringLaw>,
    /// Offspring law of doomed vertices (generating function `f(qt)/q`);
    /// present when `q > 0`.
    pub bar_law: Option<OffspringLaw>,
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Smallest nonnegative fixed point of `f_X`, with the derived laws.
pub fn extinction_probability(law: &OffspringLaw) -> SurvivalDecomposition {
    let q = if law.mean() <= 1.0 && law.prob(1) < 1.0 {
        1.0
    } else {
        // monotone iteration from 0 converges geometrically when mean > 1
        let mut q = 0.0f64;
        for _ in 0..10_000_000 {
            let next = law.pgf(q);
            if (next - q).abs() < 1e-15 {
                q = next;
                break;
            }
            q = next;
        }
        q
    };
    let k_max = law.max_support();
    let star_law = (q < 1.0).then(|| {
        let mut pmf = vec![0.0; k_max + 1];
        for (k, &pk) in law.pmf().iter().enumerate() {
            for (j, slot) in pmf.iter_mut().enumerate().take(k + 1).skip(1) {
                *slot += pk * binom(k, j) * (1.0 - q).powi(j as i32) * q.powi((k - j) as i32) / (1.0 - q);
            }
        }
        renormalize(pmf)
    });
    let bar_law = (q > 0.0).then(|| {
        let pmf = law.pmf().iter().enumerate().map(|(k, &pk)| pk * q.powi(k as i32 - 1)).collect();
        renormalize(pmf)
    });
    SurvivalDecomposition { q, star_law, bar_law }
}

fn renormalize(mut pmf: Vec<f64>) -> OffspringLaw {
    let s: f64 = pmf.iter().sum();
    pmf.iter_mut().for_each(|x| *x /= s);
    OffspringLaw::new(pmf).expect("renormalized pmf")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_pmf() {
        assert!(OffspringLaw::new(vec![0.5, 0.4]).is_err());
        assert!(OffspringLaw::new(vec![-0.5, 1.5]).is_err());
    }

    #[test]
    fn extinction_examples() {
        assert_eq!(extinction_probability(&OffspringLaw::constant(2)).q, 0.0);
        let crit = OffspringLaw::new(vec![0.5, 0.0, 0.5]).unwrap();
        assert_eq!(extinction_probability(&crit).q, 1.0);
        let sup = OffspringLaw::new(vec![0.25, 0.0, 0.75]).unwrap();
        let d = extinction_probability(&sup);
        assert!((d.q - 1.0 / 3.0).abs() < 1e-10);
        // q solves 3q^2 - 4q + 1 = 0
        assert!((3.0 * d.q * d.q - 4.0 * d.q + 1.0).abs() < 1e-10);
    }

    #[test]
    fn star_law_matches_generating_function() {
        let law = OffspringLaw::new(vec![0.25, 0.0, 0.75]).unwrap();
        let d = extinction_probability(&law);
        let star = d.star_law.unwrap();
        let q = d.q;
        for &t in &[0.0, 0.3, 0.7, 1.0] {
            let expect = (law.pgf(q + (1.0 - q) * t) - q) / (1.0 - q);
            assert!((star.pgf(t) - expect).abs() < 1e-12);
        }
        assert_eq!(star.prob(0), 0.0);
        let bar = d.bar_law.unwrap();
        for &t in &[0.0, 0.5, 1.0] {
            assert!((bar.pgf(t) - law.pgf(q * t) / q).abs() < 1e-12);
        }
    }

    #[test]
    fn root_degree_law_uniform_123() {
        let law = OffspringLaw::uniform(1, 3).unwrap();
        let r = law.root_degree_law();
        assert!((r[2] - 6.0 / 13.0).abs() < 1e-12);
        assert!((r[3] - 4.0 / 13.0).abs() < 1e-12);
        assert!((r[4] - 3.0 / 13.0).abs() < 1e-12);
        assert_eq!(OffspringLaw::constant(2).root_degree_law()[3], 1.0);
    }

    #[test]
    fn poisson_truncation() {
        let l = OffspringLaw::poisson(1.5).unwrap();
        assert!(l.tail_mass() < 1e-9);
        assert!((l.mean() - 1.5).abs() < 1e-6);
    }
}
