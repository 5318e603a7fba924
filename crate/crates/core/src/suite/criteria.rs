use std::f64::consts::FRAC_1_SQRT_2;

use super::{Check, SuiteOptions};
use crate::error::Result;
use crate::estimators::{pc_bisect, PcConfig};
use crate::generators::{CanopySource, GklSource, GraphSource, OffspringLaw, UgwSource};
use crate::graph::{FiniteGraph, RootedSet};
use crate::phi::{
    canopy_expected_phi_closed, expected_phi, expected_phi_radii, phi_bruteforce, phi_monte_carlo, phi_tree,
    ptilde_a_bisect, PhiOptions,
};
use crate::report::EstimateReport;
use crate::rng::CounterRng;
use crate::stats::Z95;

fn se_of(row: &EstimateReport) -> f64 {
    (row.ci_hi - row.ci_lo) / (2.0 * Z95)
}

pub fn canopy_phi(o: &SuiteOptions) -> Result<Vec<Check>> {
    let src = CanopySource::new();
    let radii: Vec<usize> = (0..=8).collect();
    let mut checks = Vec::new();
    for p in [0.3, 0.5, FRAC_1_SQRT_2, 0.8] {
        let t = expected_phi_radii(&src, &radii, p, &PhiOptions::default(), o.n(100_000), o.seed)?;
        let worst = t
            .rows
            .iter()
            .map(|row| {
                let exact = canopy_expected_phi_closed(p, row.radius);
                (row.estimate - exact).abs() / se_of(row).max(1e-12)
            })
            .fold(0.0, f64::max);
        checks.push(Check::new(format!("p = {p:.4}"), worst <= 4.0, format!("max |est - exact| / SE = {worst:.2}")));
    }
    Ok(checks)
}

pub fn canopy_ptilde(o: &SuiteOptions) -> Result<Vec<Check>> {
    let opts = PhiOptions { stratified: true, ..PhiOptions::default() };
    let est = ptilde_a_bisect(&CanopySource::new(), 400, (0.5, 0.9), 0.01, 1, o.seed, &opts)?;
    let (lo, hi) = est.interval;
    Ok(vec![
        Check::new("width <= 0.01", est.width() <= 0.01 + 1e-12, format!("[{lo}, {hi}]")),
        Check::new("contains 0.70711", est.contains(0.70711), format!("[{lo}, {hi}]")),
        Check::new("conclusive", est.conclusive, est.notes.join("; ")),
    ])
}

pub fn gkl_bounds(o: &SuiteOptions) -> Result<Vec<Check>> {
    let src = GklSource::new(3, 5)?;
    let cfg = PcConfig { bracket: (0.1, 0.3), tol: 0.02, seed: 3, replicas: o.n(2000), ..PcConfig::default() };
    let est = pc_bisect(&src, &cfg)?;
    let target = 2.0 / (5.0 + 37f64.sqrt());
    let (lo, hi) = est.interval;
    let row = expected_phi(&src, 0, 5.0 / 24.0, &PhiOptions::default(), o.n(100_000), o.seed)?;
    Ok(vec![
        Check::new("pc width <= 0.02", est.width() <= 0.02 + 1e-12, format!("[{lo}, {hi}]")),
        Check::new("pc contains 0.1805", est.contains(target), format!("[{lo}, {hi}] vs {target:.5}")),
        Check::new("phi(r=0, 5/24) = 1.00", (row.estimate - 1.0).abs() <= 0.01, format!("{:.5}", row.estimate)),
    ])
}

fn ugw_pc_check(label: &str, src: &dyn GraphSource, o: &SuiteOptions, target: f64) -> Result<Check> {
    let cfg = PcConfig { bracket: (0.3, 0.8), tol: 0.05, seed: o.seed ^ 11, replicas: o.n(2000), ..PcConfig::default() };
    let est = pc_bisect(src, &cfg)?;
    let (lo, hi) = est.interval;
    let ok = target - 0.05 <= lo && hi <= target + 0.05;
    Ok(Check::new(label, ok, format!("[{lo}, {hi}] vs {target:.4}")))
}

pub fn ugw_pc(o: &SuiteOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let two = UgwSource::new(OffspringLaw::constant(2), false)?;
    let est = pc_bisect(&two, &PcConfig { bracket: (0.3, 0.8), seed: o.seed ^ 11, replicas: o.n(2000), ..PcConfig::default() })?;
    checks.push(Check::new(
        "X = 2 contains 0.5",
        est.width() <= 0.05 + 1e-12 && est.contains(0.5),
        format!("{:?}", est.interval),
    ));
    let uni = UgwSource::new(OffspringLaw::uniform(1, 3)?, false)?;
    let est = pc_bisect(&uni, &PcConfig { bracket: (0.3, 0.8), seed: o.seed ^ 11, replicas: o.n(2000), ..PcConfig::default() })?;
    checks.push(Check::new(
        "X uniform {1,2,3} contains 0.5",
        est.width() <= 0.05 + 1e-12 && est.contains(0.5),
        format!("{:?}", est.interval),
    ));

    let ns = [2usize, 5, 10, 50];
    let sources: Vec<(String, Box<dyn GraphSource>)> = ns
        .iter()
        .map(|&n| {
            let q = 1.0 / n as f64;
            let law = OffspringLaw::new(vec![0.0, 0.0, 1.0 - q, q])?;
            Ok((format!("n = {n}"), Box::new(UgwSource::new(law, false)?) as Box<dyn GraphSource>))
        })
        .collect::<Result<_>>()?;
    let replicas = o.n(20_000);
    let radii = [1usize, 2, 3];
    let rows = crate::convergence::locality_experiment(&sources, &two, &radii, None, replicas, o.seed)?;
    let slack = 2.0 / (replicas as f64).sqrt();
    for &r in &radii {
        let tv: Vec<f64> = rows.iter().filter(|row| row.radius == r).map(|row| row.tv).collect();
        let ok = tv.windows(2).all(|w| w[1] <= w[0] + slack) && tv.last() < tv.first();
        let shown: Vec<String> = tv.iter().map(|t| format!("{t:.4}")).collect();
        checks.push(Check::new(format!("TV(r = {r}) decreasing"), ok, shown.join(" > ")));
    }
    for ((label, src), &n) in sources.iter().zip(&ns) {
        let target = 1.0 / (2.0 + 1.0 / n as f64);
        checks.push(ugw_pc_check(&format!("pc tracks 1/E X at {label}"), &**src, o, target)?);
    }
    Ok(checks)
}

/// A random tree on at most `max_edges + 1` vertices with a random root and
/// one to three boundary edges on random vertices.
pub fn random_tree_set(rng: &mut CounterRng, max_edges: usize) -> RootedSet {
    let n = 1 + rng.below(max_edges as u64 + 1) as usize;
    let edges = (1..n as u32).map(|v| (rng.below(v as u64) as u32, v)).collect();
    with_random_boundary(rng, FiniteGraph::new(n, edges))
}

/// A random connected graph on at most `max_vertices` vertices: a random tree
/// plus a few random chords.
pub fn random_small_set(rng: &mut CounterRng, max_vertices: usize) -> RootedSet {
    let n = 1 + rng.below(max_vertices as u64) as usize;
    let mut edges: Vec<(u32, u32)> = (1..n as u32).map(|v| (rng.below(v as u64) as u32, v)).collect();
    if n >= 3 {
        for _ in 0..rng.below(n as u64) {
            let a = rng.below(n as u64) as u32;
            let b = rng.below(n as u64) as u32;
            let e = (a.min(b), a.max(b));
            if a != b && !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == e) {
                edges.push(e);
            }
        }
    }
    with_random_boundary(rng, FiniteGraph::new(n, edges))
}

fn with_random_boundary(rng: &mut CounterRng, g: FiniteGraph) -> RootedSet {
    let n = g.vertex_count() as u64;
    let root = rng.below(n) as u32;
    let boundary = (0..1 + rng.below(3)).map(|_| rng.below(n) as u32).collect();
    RootedSet::new(g, root, boundary)
}

pub fn oracle_equivalence(o: &SuiteOptions) -> Result<Vec<Check>> {
    let mut rng = CounterRng::from_words(&[o.seed, 0x05]);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let s = random_tree_set(&mut rng, 12);
        let p = rng.uniform();
        let a = phi_bruteforce(&s, p)?.value;
        let b = phi_tree(&s, p)?.value;
        worst = worst.max((a - b).abs());
    }
    let mut covered = 0;
    for i in 0..100u64 {
        let s = random_small_set(&mut rng, 8);
        let p = 0.05 + 0.9 * rng.uniform();
        let exact = phi_bruteforce(&s, p)?.value;
        let mc = phi_monte_carlo(&s, p, o.n(4000), o.seed.wrapping_add(i))?;
        let (lo, hi) = mc.ci.unwrap_or((mc.value, mc.value));
        if lo - 1e-12 <= exact && exact <= hi + 1e-12 {
            covered += 1;
        }
    }
    Ok(vec![
        Check::new("tree = brute on 100 trees", worst <= 1e-12, format!("max |diff| = {worst:e}")),
        Check::new("MC 95% CI coverage >= 93/100", covered >= 93, format!("{covered}/100")),
    ])
}
