use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{replica_seed, GraphSource};
use crate::graph::LocalGraph;
use crate::stats::{chi_square_gof, ChiSquareResult};

/// A root statistic with a declared law.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootStatistic {
    Degree,
    Level,
    /// Half width of the box column holding the root.
    BoxHalfWidth,
}

impl RootStatistic {
    pub fn extract(self, g: &dyn LocalGraph) -> Result<usize> {
        let o = g.root();
        let missing = || Error::InvalidParameter(format!("statistic {self:?} undefined on this source"));
        match self {
            Self::Degree => Ok(g.neighbors(&o)?.len()),
            Self::Level => g.level(&o).map(|l| l as usize).ok_or_else(missing),
            Self::BoxHalfWidth => g.root_box().map(|b| b.0 as usize).ok_or_else(missing),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootLawReport {
    pub statistic: RootStatistic,
    /// Counts per value, with one overflow bin for values past the declared table.
    pub observed: Vec<u64>,
    pub expected: Vec<f64>,
    pub gof: ChiSquareResult,
    pub alpha: f64,
    pub pass: bool,
}

/// Chi-square test of the empirical root statistic against `law[k] = P(stat = k)`.
pub fn root_law_check(
    src: &dyn GraphSource,
    stat: RootStatistic,
    law: &[f64],
    replicas: usize,
    seed: u64,
    alpha: f64,
) -> Result<RootLawReport> {
    let values: Vec<usize> = (0..replicas as u64)
        .into_par_iter()
        .map(|i| stat.extract(&*src.sample(replica_seed(seed, i))?))
        .collect::<Result<_>>()?;
    let mut observed = vec![0u64; law.len() + 1];
    for v in values {
        observed[v.min(law.len())] += 1;
    }
    let mut expected = law.to_vec();
    expected.push((1.0 - law.iter().sum::<f64>()).max(0.0));
    let gof = chi_square_gof(&observed, &expected);
    let pass = gof.p_value >= alpha;
    Ok(RootLawReport { statistic: stat, observed, expected, gof, alpha, pass })
}
