use percolab::convergence::{ball_distributions, tv_distance};
use percolab::estimators::{classify_survival, pc_bisect, PcConfig, Phase};
use percolab::generators::{source_from_json, UgwSource};
use percolab::graph::FiniteGraph;
use percolab::percolation::{clusters, connectivity_oracle, percolate};
use percolab::report::EstimateReport;
use percolab::rng::CounterRng;
use serde_json::json;

/// Splits evidence into survival profiles (a new one starts when the radius
/// stops increasing) and keeps the last profile per `p`.
fn final_profiles(rows: &[EstimateReport]) -> Vec<(f64, Vec<EstimateReport>)> {
    let mut runs: Vec<Vec<EstimateReport>> = Vec::new();
    for r in rows {
        match runs.last_mut() {
            Some(run) if run[0].p == r.p && run.last().unwrap().radius < r.radius => run.push(r.clone()),
            _ => runs.push(vec![r.clone()]),
        }
    }
    let mut out: Vec<(f64, Vec<EstimateReport>)> = Vec::new();
    for run in runs {
        let p = run[0].p;
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some(slot) => slot.1 = run,
            None => out.push((p, run)),
        }
    }
    out
}

#[test]
fn pc_evidence_rederives_the_interval() {
    let cfg = PcConfig { bracket: (0.3, 0.8), seed: 5, ..PcConfig::default() };
    let est = pc_bisect(&UgwSource::regular3(), &cfg).unwrap();
    let (lo, hi) = est.interval;
    for (p, rows) in final_profiles(&est.evidence) {
        match classify_survival(&rows, cfg.theta_min) {
            Phase::Subcritical => assert!(p <= lo, "{p} subcritical above {lo}"),
            Phase::Supercritical => assert!(p >= hi, "{p} supercritical below {hi}"),
            Phase::Undecided => assert!(!est.conclusive),
        }
    }
    assert!(est.evidence.iter().any(|r| r.p == lo) && est.evidence.iter().any(|r| r.p == hi));
}

#[test]
fn more_replicas_stay_within_tolerance() {
    for replicas in [1000, 2000, 4000] {
        let cfg = PcConfig { bracket: (0.3, 0.8), replicas, seed: 8, ..PcConfig::default() };
        let est = pc_bisect(&UgwSource::regular3(), &cfg).unwrap();
        assert!(est.width() <= cfg.tol + 1e-12, "{replicas}: {:?}", est.interval);
        assert!(est.contains(0.5), "{replicas}: {:?}", est.interval);
    }
}

#[test]
fn monte_carlo_connectivity_matches_oracle() {
    let mut rng = CounterRng::new(21);
    for i in 0..100u64 {
        let n = 2 + rng.below(8) as usize;
        let mut edges: Vec<(u32, u32)> = (1..n as u32).map(|v| (rng.below(v as u64) as u32, v)).collect();
        while edges.len() < 12 && rng.bernoulli(0.6) {
            let (a, b) = (rng.below(n as u64) as u32, rng.below(n as u64) as u32);
            if a != b && !edges.contains(&(a.min(b), a.max(b))) {
                edges.push((a.min(b), a.max(b)));
            }
        }
        let g = FiniteGraph::new(n, edges);
        let (x, y) = (0, rng.below(n as u64) as u32);
        let p = rng.uniform();
        let exact: f64 = connectivity_oracle(&g, p, x, y).unwrap();
        let reps = 100_000u64;
        let hits = (0..reps).filter(|&s| clusters(&g, &percolate(&g, p, i, s)).same_cluster(x, y)).count();
        let f = hits as f64 / reps as f64;
        let se = (exact * (1.0 - exact) / reps as f64).sqrt();
        assert!((f - exact).abs() <= 4.0 * se + 1e-12, "graph {i}: {f} vs {exact}");
    }
}

#[test]
fn tv_grows_with_radius_on_coupled_samples() {
    let a = source_from_json(&json!({"kind": "ugw", "params": {"law": {"uniform": [1, 3]}}})).unwrap();
    let b = source_from_json(&json!({"kind": "ugw", "params": {"law": {"pmf": [0.0, 0.0, 0.9, 0.1]}}})).unwrap();
    let radii = [1, 2, 3];
    let da = ball_distributions(&*a, &radii, 20_000, 1).unwrap();
    let db = ball_distributions(&*b, &radii, 20_000, 2).unwrap();
    let tv: Vec<f64> = da.iter().zip(&db).map(|(x, y)| tv_distance(x, y).unwrap()).collect();
    assert!(tv.windows(2).all(|w| w[0] <= w[1] + 1e-12), "{tv:?}");
}
