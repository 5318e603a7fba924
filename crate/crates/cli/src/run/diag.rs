use percolab::estimators::{pc_bisect, pt_diagnostic, pta_diagnostic, CriticalEstimate, PcConfig};
use percolab::percolation::canopy_expected_cluster_size_exact;
use percolab::phi::{ptilde_a_bisect, MethodChoice, PhiOptions};
use serde::Deserialize;
use serde_json::{json, Value};

use super::{build_source, Output};
use crate::config::{invalid, RunConfig};
use crate::table::{estimate_cells, Table};

#[derive(Deserialize, Default, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum PcMethod {
    #[default]
    Survival,
    PtildeA,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EstimateParams {
    source: Value,
    #[serde(default)]
    method: PcMethod,
    radii: Option<Vec<usize>>,
    theta_min: Option<f64>,
    bracket: Option<(f64, f64)>,
    tol: Option<f64>,
    replicas: Option<usize>,
    max_extensions: Option<u32>,
    /// Largest ball radius for the phi scan (`ptilde_a`).
    #[serde(default = "twelve")]
    r_max: usize,
    #[serde(default)]
    stratified: bool,
    #[serde(default)]
    phi_method: MethodChoice,
}

fn twelve() -> usize {
    12
}

fn interval_table(est: &CriticalEstimate) -> Table {
    let mut t = Table::new(&[
        "experiment", "source_hash", "p", "radius", "replicas", "estimate", "ci_lo", "ci_hi", "seed", "kind",
        "interval_lo", "interval_hi", "conclusive",
    ]);
    let kind = serde_json::to_value(est.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    for r in &est.evidence {
        let mut cells = estimate_cells(r);
        cells.extend([kind.as_str().into(), est.interval.0.into(), est.interval.1.into(), est.conclusive.into()]);
        t.push(cells);
    }
    t
}

pub fn estimate_pc(cfg: &RunConfig) -> anyhow::Result<Output> {
    let a: EstimateParams = cfg.params()?;
    let src = build_source(&a.source)?;
    let d = PcConfig::default();
    let bracket = a.bracket.unwrap_or(d.bracket);
    let tol = a.tol.unwrap_or(d.tol);
    if !(tol > 0.0) {
        return Err(invalid("`tol` must be positive"));
    }
    let est = match a.method {
        PcMethod::Survival => {
            let pc = PcConfig {
                radii: a.radii.unwrap_or(d.radii),
                theta_min: a.theta_min.unwrap_or(d.theta_min),
                bracket,
                tol,
                replicas: a.replicas.unwrap_or(d.replicas),
                seed: cfg.seed,
                max_extensions: a.max_extensions.unwrap_or(d.max_extensions),
            };
            pc_bisect(&*src, &pc)?
        }
        PcMethod::PtildeA => {
            let opts = PhiOptions { method: a.phi_method, stratified: a.stratified, ..PhiOptions::default() };
            ptilde_a_bisect(&*src, a.r_max, bracket, tol, a.replicas.unwrap_or(10_000), cfg.seed, &opts)?
        }
    };
    for n in &est.notes {
        eprintln!("note: {n}");
    }
    let json = json!({"source": src.descriptor().to_json(), "estimate": est});
    Ok(Output::new(interval_table(&est), json, cfg.seed))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagParams {
    source: Value,
    ps: Vec<f64>,
    #[serde(default)]
    radii: Vec<usize>,
    #[serde(default = "two_thousand")]
    replicas: usize,
    /// Canopy only: evaluate the exact series instead of sampling.
    #[serde(default)]
    exact: bool,
    #[serde(default)]
    levels: Vec<usize>,
    #[serde(default = "two_hundred")]
    depth: usize,
}

fn two_thousand() -> usize {
    2000
}

fn two_hundred() -> usize {
    200
}

fn exact_canopy(a: &DiagParams) -> anyhow::Result<(Table, Value)> {
    if a.source.get("kind").and_then(Value::as_str) != Some("canopy") {
        return Err(invalid("`exact` is only available for the canopy source"));
    }
    let levels = if a.levels.is_empty() { vec![0] } else { a.levels.clone() };
    let mut t = Table::new(&["p", "level", "depth", "value", "last_increment", "converged_by_1e-9", "exceeds_1e3_by"]);
    let mut rows = Vec::new();
    for &p in &a.ps {
        for &level in &levels {
            let s = canopy_expected_cluster_size_exact(p, level, a.depth);
            let conv = s.converged_by(1e-9);
            let big = s.exceeds_by(1e3);
            t.push(vec![
                p.into(),
                level.into(),
                a.depth.into(),
                s.value().into(),
                s.increment(a.depth).into(),
                conv.into(),
                big.into(),
            ]);
            rows.push(json!({"p": p, "level": level, "series": s}));
        }
    }
    Ok((t, json!({"exact": rows})))
}

pub fn pt_diag(cfg: &RunConfig, annealed: bool) -> anyhow::Result<Output> {
    let a: DiagParams = cfg.params()?;
    if a.ps.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(invalid("every p must lie in [0, 1]"));
    }
    if a.exact {
        if annealed {
            return Err(invalid("`exact` belongs to pt-diag"));
        }
        let (t, json) = exact_canopy(&a)?;
        return Ok(Output::new(t, json, cfg.seed));
    }
    if a.radii.len() < 2 {
        return Err(invalid("`radii` needs at least two radii"));
    }
    let src = build_source(&a.source)?;
    let diag = if annealed {
        pta_diagnostic(&*src, &a.ps, &a.radii, a.replicas, cfg.seed)?
    } else {
        pt_diagnostic(&*src, &a.ps, &a.radii, a.replicas, cfg.seed)?
    };
    for n in &diag.estimate.notes {
        eprintln!("note: {n}");
    }
    let mut t = interval_table(&diag.estimate);
    t.header.extend(["growth".to_string(), "max_over_mean".to_string()]);
    let k = a.radii.len();
    for (i, row) in t.rows.iter_mut().enumerate() {
        let point = &diag.points[i / k];
        let growth = serde_json::to_value(point.growth)?.as_str().unwrap_or_default().to_string();
        row.extend([growth.into(), point.max_over_mean[i % k].into()]);
    }
    let json = json!({"source": src.descriptor().to_json(), "diagnostic": diag});
    Ok(Output::new(t, json, cfg.seed))
}
