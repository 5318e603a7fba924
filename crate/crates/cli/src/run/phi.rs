use percolab::generators::replica_seed;
use percolab::phi::{expected_phi_radii, phi_decay_diagnostic, witness_search, MethodChoice, PhiOptions};
use serde::Deserialize;
use serde_json::{json, Value};

use super::{build_source, Output};
use crate::config::{invalid, one_or_many, RunConfig};
use crate::table::{estimate_cells, Cell, Table};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiParams {
    source: Value,
    radius: Option<usize>,
    radii: Option<Vec<usize>>,
    p: Option<f64>,
    ps: Option<Vec<f64>>,
    #[serde(default = "ten_thousand")]
    replicas: usize,
    #[serde(default)]
    method: MethodChoice,
    #[serde(default)]
    stratified: bool,
    #[serde(default = "two_thousand")]
    inner_replicas: usize,
    /// Also fit the decay rate of `E phi` over the radii.
    #[serde(default)]
    decay: bool,
}

fn ten_thousand() -> usize {
    10_000
}

fn two_thousand() -> usize {
    2000
}

fn check_p(ps: &[f64]) -> anyhow::Result<()> {
    match ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        Some(p) => Err(invalid(format!("p = {p} is outside [0, 1]"))),
        None => Ok(()),
    }
}

pub fn phi(cfg: &RunConfig) -> anyhow::Result<Output> {
    let a: PhiParams = cfg.params()?;
    let radii = one_or_many(&a.radius, &a.radii, "radius")?;
    let ps = one_or_many(&a.p, &a.ps, "p")?;
    check_p(&ps)?;
    let src = build_source(&a.source)?;
    let opts = PhiOptions { method: a.method, stratified: a.stratified, inner_replicas: a.inner_replicas };
    let mut t = Table::new(&[
        "experiment", "source_hash", "p", "radius", "replicas", "estimate", "ci_lo", "ci_hi", "seed", "tail_mass",
    ]);
    let mut tables = Vec::new();
    let mut decays = Vec::new();
    for &p in &ps {
        let table = expected_phi_radii(&*src, &radii, p, &opts, a.replicas, cfg.seed)?;
        for r in &table.rows {
            let mut cells = estimate_cells(r);
            cells.push(table.tail_mass.into());
            t.push(cells);
        }
        if a.decay {
            decays.push(phi_decay_diagnostic(&*src, p, &radii, a.replicas, cfg.seed, &opts)?);
        }
        tables.push(table);
    }
    let json = json!({"source": src.descriptor().to_json(), "tables": tables, "decay": decays});
    Ok(Output::new(t, json, cfg.seed))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessParams {
    source: Value,
    p: f64,
    r_max: usize,
    #[serde(default)]
    greedy: bool,
    #[serde(default = "one")]
    replicas: usize,
}

fn one() -> usize {
    1
}

pub fn witness(cfg: &RunConfig) -> anyhow::Result<Output> {
    let a: WitnessParams = cfg.params()?;
    check_p(&[a.p])?;
    let src = build_source(&a.source)?;
    let mut t = Table::new(&["replica", "instance_seed", "p", "found", "radius", "set_size", "phi", "phi_upper", "method"]);
    let mut found = Vec::new();
    for i in 0..a.replicas as u64 {
        let s = replica_seed(cfg.seed, i);
        let g = src.sample(s)?;
        let w = witness_search(&*g, a.p, a.r_max, a.greedy)?;
        let cells: Vec<Cell> = match &w {
            Some(w) => vec![
                true.into(),
                w.radius.into(),
                w.vertices.len().into(),
                w.phi.value.into(),
                w.phi.upper().into(),
                serde_json::to_value(w.phi.method)?.as_str().unwrap_or_default().into(),
            ],
            None => vec![false.into(), Cell::from(None::<usize>), 0usize.into(), Cell::from(None::<f64>), Cell::from(None::<f64>), "".into()],
        };
        let mut row = vec![i.into(), s.into(), a.p.into()];
        row.extend(cells);
        t.push(row);
        found.push(json!({"replica": i, "instance_seed": s, "witness": w}));
    }
    Ok(Output::new(t, json!({"source": src.descriptor().to_json(), "p": a.p, "witnesses": found}), cfg.seed))
}
