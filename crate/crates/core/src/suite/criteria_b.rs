use serde_json::json;

use super::{Check, SuiteOptions};
use crate::convergence::{ball_distribution, tv_distance};
use crate::error::Result;
use crate::estimators::{p0_root, pt_diagnostic, pta_diagnostic, Growth};
use crate::generators::{canopy_sphere_count, source_from_json, CanopyGraph, HeavyTail};
use crate::graph::{ball, LocalGraph};
use crate::percolation::{canopy_expected_cluster_size_exact, four_point_crossing_curve, survival_profile};
use crate::unimodularity::{mtp_battery, root_law_check, standard_battery, RootStatistic};

const ALPHA: f64 = 0.01;

fn battery_fails(desc: &serde_json::Value, o: &SuiteOptions, alpha: f64) -> Result<Vec<String>> {
    let src = source_from_json(desc)?;
    let reports = mtp_battery(&*src, &standard_battery(), o.n(100_000), o.seed, alpha)?;
    Ok(reports.into_iter().filter(|r| !r.pass).map(|r| format!("{} (z = {:.1})", r.function, r.z)).collect())
}

pub fn mtp_battery_check(o: &SuiteOptions) -> Result<Vec<Check>> {
    let unimodular = [
        ("canopy", json!({"kind": "canopy"})),
        ("UGW X = 2", json!({"kind": "ugw", "params": {"law": {"constant": 2}}})),
        ("UGW X uniform {1,2,3}", json!({"kind": "ugw", "params": {"law": {"uniform": [1, 3]}}})),
        ("UGW Poisson(1.5) conditioned", json!({"kind": "ugw", "params": {"law": {"poisson": 1.5}, "conditioned": true}})),
        ("G(3,5)", json!({"kind": "gkl", "params": {"k": 3, "l": 5}})),
        ("heavy-tailed boxes", json!({"kind": "ptk"})),
        ("G_4 boxes", json!({"kind": "gn", "params": {"n": 4}})),
        (
            "contracted UGW",
            json!({"kind": "contraction", "params": {
                "base": {"kind": "ugw", "params": {"law": {"constant": 2}}},
                "labels": {"kind": "bernoulli", "rho": 0.3}}}),
        ),
    ];
    let controls = [
        ("heavy-tailed boxes, uncorrected root", json!({"kind": "ptk", "params": {"uncorrected": true}})),
        ("canopy, level decay 3", json!({"kind": "canopy", "params": {"level_decay": 3.0}})),
    ];
    // Bonferroni over the whole family, so ALPHA bounds the chance of any false rejection
    let alpha = ALPHA / (unimodular.len() * standard_battery().len()) as f64;
    let mut checks = Vec::new();
    for (label, desc) in unimodular {
        let fails = battery_fails(&desc, o, alpha)?;
        checks.push(Check::new(format!("{label} passes"), fails.is_empty(), fails.join(", ")));
    }
    for (label, desc) in controls {
        let fails = battery_fails(&desc, o, alpha)?;
        checks.push(Check::new(format!("{label} fails"), !fails.is_empty(), fails.join(", ")));
    }
    Ok(checks)
}

pub fn canopy_series(_: &SuiteOptions) -> Result<Vec<Check>> {
    let sub = canopy_expected_cluster_size_exact(0.65f64, 0, 300);
    let conv = sub.converged_by(1e-9);
    let sup = canopy_expected_cluster_size_exact(0.8f64, 0, 120);
    let big = sup.exceeds_by(1e3);
    let leaf = CanopyGraph::new(0, None);
    let spheres = ball(&leaf, &leaf.root(), 2)?.sphere_sizes();
    let closed = [canopy_sphere_count(0, 1), canopy_sphere_count(0, 2)];
    Ok(vec![
        Check::new(
            "p = 0.65 increments < 1e-9 by depth 200",
            conv.is_some_and(|d| d <= 200),
            format!("increment at 200 = {:e}, below 1e-9 from depth {conv:?}, sum {:.6}", sub.increment(200), sub.value()),
        )
        .gap(),
        Check::new("p = 0.8 exceeds 1e3 by depth 120", big.is_some_and(|d| d <= 120), format!("from depth {big:?}")),
        Check::new(
            "count(0,1) = 1, count(0,2) = 2 match BFS",
            closed == [1.0, 2.0] && spheres[1] == 1 && spheres[2] == 2,
            format!("closed {closed:?}, bfs {:?}", &spheres[..3]),
        ),
    ])
}

pub fn box_sequence(o: &SuiteOptions) -> Result<Vec<Check>> {
    let z2 = source_from_json(&json!({"kind": "z2"}))?;
    let ball_reps = o.n(20_000);
    let target = ball_distribution(&*z2, 2, ball_reps, o.seed ^ 0x7a79)?;
    let mut checks = Vec::new();
    let mut tvs = Vec::new();
    for n in [4usize, 8, 16] {
        let g = source_from_json(&json!({"kind": "gn", "params": {"n": n}}))?;
        let s = survival_profile(&*g, 0.65, &[3 * n], o.n(1000), o.seed)?.remove(0);
        checks.push(
            Check::new(
                format!("n = {n}: survival at radius {} < 0.01", 3 * n),
                s.ci_hi < 0.01,
                format!("{:.4} [{:.4}, {:.4}]", s.estimate, s.ci_lo, s.ci_hi),
            )
            .gap(),
        );
        tvs.push(tv_distance(&ball_distribution(&*g, 2, ball_reps, o.seed)?, &target)?);
    }
    let shown: Vec<String> = tvs.iter().map(|t| format!("{t:.4}")).collect();
    checks.push(Check::new("TV(G_n, Z2; r = 2) decreasing", tvs.windows(2).all(|w| w[1] < w[0]), shown.join(" > ")));
    let g4 = source_from_json(&json!({"kind": "gn", "params": {"n": 4}}))?;
    let radii = [8usize, 16, 32, 48];
    let rows = survival_profile(&*g4, 0.97, &radii, o.n(1000), o.seed)?;
    let est: Vec<f64> = rows.iter().map(|r| r.estimate).collect();
    let stable = est.iter().all(|&x| x > 0.5) && (est[2] - est[3]).abs() <= 0.05;
    checks.push(Check::new("n = 4, p = 0.97 survival stabilizes positive", stable, format!("{est:?}")));
    Ok(checks)
}

pub fn crossing(o: &SuiteOptions) -> Result<Vec<Check>> {
    let ps: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let rows = four_point_crossing_curve(32, &ps, o.n(2000), o.seed);
    let est: Vec<f64> = rows.iter().map(|r| r.estimate).collect();
    let at95 = est[19];
    Ok(vec![
        Check::new("nondecreasing in p", est.windows(2).all(|w| w[0] <= w[1]), String::new()),
        Check::new("0 at p = 0, 1 at p = 1", est[0] == 0.0 && est[20] == 1.0, format!("{} / {}", est[0], est[20])),
        Check::new("> 0.99 at p = 0.95, n = 32", at95 > 0.99, format!("{at95:.4}")),
    ])
}

fn p0_map(p: f64) -> f64 {
    p * (1.0 - (1.0 - p).powi(3)).powi(2)
}

pub fn ptk_checks(o: &SuiteOptions) -> Result<Vec<Check>> {
    let ptk = source_from_json(&json!({"kind": "ptk"}))?;
    let mut law = vec![0.0];
    law.extend(HeavyTail::get().biased_pmf(40));
    let gof = root_law_check(&*ptk, RootStatistic::BoxHalfWidth, &law, o.n(100_000), o.seed, ALPHA)?;
    let p0 = p0_root();
    let radii = [4usize, 8, 16, 32, 64, 128];
    let annealed = pta_diagnostic(&*ptk, &[0.55], &radii, o.n(2000), o.seed ^ 3)?;
    let quenched = pt_diagnostic(&*ptk, &[0.45], &radii, o.n(2000), o.seed ^ 3)?;
    Ok(vec![
        Check::new(
            "root box half-width P(Y = k) ~ k^(-3/2)",
            gof.pass,
            format!("chi2 p-value {:.4}", gof.gof.p_value),
        ),
        Check::new(
            "p0 ~ 0.583 bracketed by sign checks",
            (p0 - 0.583).abs() < 2e-3 && p0_map(0.58) < 0.5 && p0_map(0.59) > 0.5,
            format!("{p0:.6}"),
        ),
        Check::new(
            "annealed diagnostic diverges at 0.55",
            annealed.points[0].growth == Growth::Diverging,
            format!("{:?}; {}", annealed.points[0].growth, annealed.estimate.notes.join("; ")),
        ),
        Check::new(
            "quenched diagnostic converges at 0.45",
            quenched.points[0].growth == Growth::Converging,
            format!("{:?}", quenched.points[0].growth),
        ),
    ])
}
