use percolab::generators::replica_seed;
use percolab::graph::{ball, canonical_code, LocalGraph};
use percolab::percolation::four_point_crossing_curve;
use percolab::suite::{run_all, run_criterion, SuiteOptions};
use serde::Deserialize;
use serde_json::{json, Value};

use super::{build_source, Output};
use crate::config::{invalid, RunConfig};
use crate::table::Table;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GenerateParams {
    source: Value,
    #[serde(default = "two")]
    radius: usize,
    #[serde(default = "one")]
    replicas: usize,
}

fn one() -> usize {
    1
}

fn two() -> usize {
    2
}

pub fn generate(cfg: &RunConfig) -> anyhow::Result<Output> {
    let p: GenerateParams = cfg.params()?;
    let src = build_source(&p.source)?;
    let mut t = Table::new(&["replica", "instance_seed", "radius", "vertices", "edges", "boundary_edges", "code"]);
    let mut balls = Vec::new();
    for i in 0..p.replicas as u64 {
        let s = replica_seed(cfg.seed, i);
        let g = src.sample(s)?;
        let b = ball(&*g, &g.root(), p.radius)?;
        let code = canonical_code(&b).map(|c| c.to_hex()).ok();
        t.push(vec![
            i.into(),
            s.into(),
            p.radius.into(),
            b.vertex_count().into(),
            b.edges.len().into(),
            b.boundary.len().into(),
            code.clone().into(),
        ]);
        balls.push(json!({"replica": i, "instance_seed": s, "code": code, "ball": b}));
    }
    let json = json!({"source": src.descriptor().to_json(), "balls": balls});
    Ok(Output::new(t, json, cfg.seed))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CrossingParams {
    n: usize,
    ps: Vec<f64>,
    #[serde(default = "thousand")]
    replicas: usize,
}

fn thousand() -> usize {
    1000
}

pub fn crossing(cfg: &RunConfig) -> anyhow::Result<Output> {
    let p: CrossingParams = cfg.params()?;
    if p.n == 0 || p.ps.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(invalid("crossing needs n >= 1 and every p in [0, 1]"));
    }
    let rows = four_point_crossing_curve(p.n, &p.ps, p.replicas, cfg.seed);
    let json = json!({"n": p.n, "rows": rows});
    Ok(Output::new(Table::estimates(&rows), json, cfg.seed))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteParams {
    #[serde(default = "unit")]
    scale: f64,
    #[serde(default)]
    criteria: Option<Vec<u32>>,
}

fn unit() -> f64 {
    1.0
}

pub fn suite(cfg: &RunConfig) -> anyhow::Result<Output> {
    let p: SuiteParams = cfg.params()?;
    if !(p.scale > 0.0) {
        return Err(invalid("suite: `scale` must be positive"));
    }
    let opts = SuiteOptions { scale: p.scale, seed: cfg.seed };
    let outcomes = match &p.criteria {
        None => run_all(&opts),
        Some(ids) => ids
            .iter()
            .map(|&id| run_criterion(id, &opts).ok_or_else(|| invalid(format!("suite: no criterion {id}"))))
            .collect::<anyhow::Result<_>>()?,
    };
    for o in &outcomes {
        eprintln!("{}", o.summary_line());
    }
    let mut t = Table::new(&["criterion", "name", "check", "pass", "known_gap", "detail"]);
    for o in &outcomes {
        for c in &o.checks {
            t.push(vec![
                o.id.into(),
                o.name.as_str().into(),
                c.label.as_str().into(),
                c.pass.into(),
                c.known_gap.into(),
                c.detail.as_str().into(),
            ]);
        }
    }
    let seeds = outcomes.iter().map(|o| (format!("criterion {}", o.id), cfg.seed)).collect();
    Ok(Output { table: t, json: json!({"options": opts, "criteria": outcomes}), seeds })
}
