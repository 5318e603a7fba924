use rayon::prelude::*;
use serde::Serialize;

use super::TransportFunction;
use crate::error::Result;
use crate::generators::{replica_seed, GraphSource};
use crate::stats::{two_sided_p, Summary};

/// Paired comparison of mass sent and received by the root.
#[derive(Clone, Debug, Serialize)]
pub struct MtpReport {
    pub function: String,
    /// False when the function is undefined on this source; such reports pass vacuously.
    pub applicable: bool,
    pub sent: Summary,
    pub received: Summary,
    /// Per-replica `sent - received`.
    pub difference: Summary,
    pub z: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub pass: bool,
}

fn report(function: String, pairs: Option<Vec<(f64, f64)>>, alpha: f64) -> MtpReport {
    let empty = Summary { n: 0, mean: f64::NAN, se: f64::NAN };
    let Some(pairs) = pairs else {
        return MtpReport {
            function,
            applicable: false,
            sent: empty,
            received: empty,
            difference: empty,
            z: 0.0,
            p_value: 1.0,
            alpha,
            pass: true,
        };
    };
    let sent = Summary::of(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
    let received = Summary::of(&pairs.iter().map(|p| p.1).collect::<Vec<_>>());
    let difference = Summary::of(&pairs.iter().map(|p| p.0 - p.1).collect::<Vec<_>>());
    // sums of reciprocals rarely cancel exactly; treat rounding-level gaps as zero
    let noise = 1e-9 * sent.mean.abs().max(received.mean.abs()).max(1.0);
    let z = if difference.mean.abs() <= noise && difference.se <= noise {
        0.0
    } else if difference.se > 0.0 {
        difference.mean / difference.se
    } else {
        difference.mean.signum() * f64::INFINITY
    };
    let p_value = two_sided_p(z);
    MtpReport { function, applicable: true, sent, received, difference, z, p_value, alpha, pass: p_value >= alpha }
}

/// Runs every function on the same sampled instances.
pub fn mtp_battery(
    src: &dyn GraphSource,
    fns: &[Box<dyn TransportFunction>],
    replicas: usize,
    seed: u64,
    alpha: f64,
) -> Result<Vec<MtpReport>> {
    let rows: Vec<Vec<Option<(f64, f64)>>> = (0..replicas as u64)
        .into_par_iter()
        .map(|i| {
            let g = src.sample(replica_seed(seed, i))?;
            fns.iter()
                .map(|f| if f.applies(&*g) { f.sent_received(&*g).map(Some) } else { Ok(None) })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(fns
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let pairs: Option<Vec<(f64, f64)>> = rows.iter().map(|r| r[j]).collect();
            report(f.name(), pairs, alpha)
        })
        .collect())
}

pub fn mtp_test(
    src: &dyn GraphSource,
    f: Box<dyn TransportFunction>,
    replicas: usize,
    seed: u64,
    alpha: f64,
) -> Result<MtpReport> {
    Ok(mtp_battery(src, &[f], replicas, seed, alpha)?.remove(0))
}
