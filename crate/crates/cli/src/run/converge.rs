use percolab::convergence::{ball_distributions, locality_experiment};
use percolab::estimators::PcConfig;
use percolab::generators::GraphSource;
use serde::Deserialize;
use serde_json::{json, Value};

use super::{build_source, default_radii, Output};
use crate::config::{invalid, RunConfig};
use crate::table::{Cell, Table};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Labeled {
    label: String,
    source: Value,
}

#[derive(Deserialize, Default, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum Mode {
    #[default]
    Distribution,
    Locality,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConvergeParams {
    #[serde(default)]
    mode: Mode,
    /// The source whose ball laws are tabulated (distribution mode).
    source: Option<Value>,
    /// The sequence and its limit (locality mode).
    sources: Option<Vec<Labeled>>,
    target: Option<Value>,
    #[serde(default = "default_radii")]
    radii: Vec<usize>,
    #[serde(default = "ten_thousand")]
    replicas: usize,
    /// pc bisection settings applied to every sequence member.
    pc: Option<PcConfig>,
}

fn ten_thousand() -> usize {
    10_000
}

pub fn converge(cfg: &RunConfig) -> anyhow::Result<Output> {
    let a: ConvergeParams = cfg.params()?;
    if a.radii.is_empty() {
        return Err(invalid("`radii` is empty"));
    }
    match a.mode {
        Mode::Distribution => {
            let v = a.source.as_ref().ok_or_else(|| invalid("distribution mode needs `source`"))?;
            if a.sources.is_some() || a.target.is_some() || a.pc.is_some() {
                return Err(invalid("`sources`, `target` and `pc` belong to locality mode"));
            }
            let src = build_source(v)?;
            let dists = ball_distributions(&*src, &a.radii, a.replicas, cfg.seed)?;
            let mut t = Table::new(&["radius", "code", "freq", "undersampled"]);
            for d in &dists {
                for e in &d.entries {
                    t.push(vec![d.radius.into(), e.code.to_hex().into(), e.freq.into(), d.undersampled().into()]);
                }
            }
            Ok(Output::new(t, json!({"source": src.descriptor().to_json(), "distributions": dists}), cfg.seed))
        }
        Mode::Locality => {
            let list = a.sources.ok_or_else(|| invalid("locality mode needs `sources`"))?;
            let target = build_source(a.target.as_ref().ok_or_else(|| invalid("locality mode needs `target`"))?)?;
            let sources: Vec<(String, Box<dyn GraphSource>)> =
                list.into_iter().map(|l| Ok((l.label, build_source(&l.source)?))).collect::<anyhow::Result<_>>()?;
            let pc = a.pc.map(|c| PcConfig { seed: cfg.seed, ..c });
            let rows = locality_experiment(&sources, &*target, &a.radii, pc.as_ref(), a.replicas, cfg.seed)?;
            let mut t = Table::new(&["label", "radius", "tv", "undersampled", "pc_lo", "pc_hi", "pc_conclusive"]);
            for r in &rows {
                t.push(vec![
                    r.label.as_str().into(),
                    r.radius.into(),
                    r.tv.into(),
                    r.undersampled.into(),
                    Cell::from(r.pc_interval.map(|i| i.0)),
                    Cell::from(r.pc_interval.map(|i| i.1)),
                    Cell::from(r.pc_conclusive),
                ]);
            }
            let mut seeds = vec![("sequence".to_string(), cfg.seed), ("target".to_string(), cfg.seed ^ 0x7a79)];
            if let Some(pc) = &pc {
                seeds.push(("pc".to_string(), pc.seed));
            }
            let json = json!({"target": target.descriptor().to_json(), "rows": rows});
            Ok(Output { table: t, json, seeds })
        }
    }
}
