use percolab::unimodularity::{mtp_battery, root_law_check, standard_battery, transport_by_name, RootStatistic};
use serde::Deserialize;
use serde_json::{json, Value};

use super::{build_source, Output};
use crate::config::{invalid, RunConfig};
use crate::table::Table;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RootLawParams {
    statistic: RootStatistic,
    /// `law[k] = P(statistic = k)`; the remainder goes to an overflow bin.
    law: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MtpParams {
    source: Value,
    /// Transport function names; the standard battery when absent.
    functions: Option<Vec<String>>,
    #[serde(default = "ten_thousand")]
    replicas: usize,
    #[serde(default = "alpha")]
    alpha: f64,
    root_law: Option<RootLawParams>,
}

fn ten_thousand() -> usize {
    10_000
}

fn alpha() -> f64 {
    0.01
}

pub fn mtp(cfg: &RunConfig) -> anyhow::Result<Output> {
    let a: MtpParams = cfg.params()?;
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(invalid("`alpha` must lie in (0, 1)"));
    }
    let fns = match &a.functions {
        None => standard_battery(),
        Some(names) => names.iter().map(|n| transport_by_name(n)).collect::<Result<_, _>>()?,
    };
    let src = build_source(&a.source)?;
    let reports = mtp_battery(&*src, &fns, a.replicas, cfg.seed, a.alpha)?;
    let mut t = Table::new(&[
        "test", "applicable", "sent", "received", "difference", "difference_se", "z", "p_value", "alpha", "pass",
    ]);
    for r in &reports {
        t.push(vec![
            r.function.as_str().into(),
            r.applicable.into(),
            r.sent.mean.into(),
            r.received.mean.into(),
            r.difference.mean.into(),
            r.difference.se.into(),
            r.z.into(),
            r.p_value.into(),
            r.alpha.into(),
            r.pass.into(),
        ]);
    }
    let law = match &a.root_law {
        Some(rl) => {
            let rep = root_law_check(&*src, rl.statistic, &rl.law, a.replicas, cfg.seed, a.alpha)?;
            let name = format!("root_law_{}", serde_json::to_value(rl.statistic)?.as_str().unwrap_or_default());
            t.push(vec![
                name.into(),
                true.into(),
                rep.gof.statistic.into(),
                (rep.gof.dof as f64).into(),
                f64::NAN.into(),
                f64::NAN.into(),
                f64::NAN.into(),
                rep.gof.p_value.into(),
                rep.alpha.into(),
                rep.pass.into(),
            ]);
            Some(rep)
        }
        None => None,
    };
    let failed = reports.iter().filter(|r| !r.pass).count() + law.as_ref().map_or(0, |l| usize::from(!l.pass));
    eprintln!("{failed} of {} tests rejected at alpha = {}", t.rows.len(), a.alpha);
    let json = json!({"source": src.descriptor().to_json(), "transport": reports, "root_law": law});
    Ok(Output::new(t, json, cfg.seed))
}
