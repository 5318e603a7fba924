use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{phi_bruteforce, phi_monte_carlo, phi_tree, PhiResult};
use crate::error::{Error, Result};
use crate::estimators::{CriticalEstimate, EstimateKind};
use crate::generators::{replica_seed, GraphSource};
use crate::graph::{ball, LocalGraph, RootedSet};
use crate::percolation::{mean_report, ORACLE_EDGE_CAP};
use crate::report::{source_hash, EstimateReport};
use crate::rng;
use crate::stats::Z95;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    /// Tree formula on acyclic sets, enumeration up to the edge cap, else Monte Carlo.
    #[default]
    Auto,
    Brute,
    Tree,
    #[serde(alias = "mc")]
    MonteCarlo,
}

impl FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "brute" => Ok(Self::Brute),
            "tree" => Ok(Self::Tree),
            "mc" | "monte_carlo" => Ok(Self::MonteCarlo),
            _ => Err(Error::InvalidParameter(format!("unknown phi method {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiOptions {
    pub method: MethodChoice,
    /// Sample roots stratum by stratum when the source exposes strata.
    pub stratified: bool,
    /// Percolation replicas for the inner Monte Carlo fallback.
    pub inner_replicas: usize,
}

impl Default for PhiOptions {
    fn default() -> Self {
        Self { method: MethodChoice::Auto, stratified: false, inner_replicas: 2000 }
    }
}

/// Annealed phi estimates per radius, with the root-law mass left out by
/// the source's truncation (not included in the estimates).
#[derive(Clone, Debug, Serialize)]
pub struct PhiTable {
    pub rows: Vec<EstimateReport>,
    pub tail_mass: f64,
}

pub fn phi_of_set(s: &RootedSet, p: f64, method: MethodChoice, inner_replicas: usize, seed: u64) -> Result<PhiResult> {
    match method {
        MethodChoice::Tree => phi_tree(s, p),
        MethodChoice::Brute => phi_bruteforce(s, p),
        MethodChoice::MonteCarlo => phi_monte_carlo(s, p, inner_replicas, seed),
        MethodChoice::Auto if s.graph.is_tree() => phi_tree(s, p),
        MethodChoice::Auto if s.graph.edge_count() <= ORACLE_EDGE_CAP => phi_bruteforce(s, p),
        MethodChoice::Auto => phi_monte_carlo(s, p, inner_replicas, seed),
    }
}

/// `phi_p(B(o, r))` for each requested radius on one instance.
fn instance_profile(g: &dyn LocalGraph, p: f64, radii: &[usize], opts: &PhiOptions, key: u64) -> Result<Vec<f64>> {
    let rmax = radii.iter().copied().max().unwrap_or(0);
    if g.is_tree() && matches!(opts.method, MethodChoice::Auto | MethodChoice::Tree) {
        // boundary edges of a tree ball match the next sphere one to one
        let spheres = match g.sphere_sizes(rmax + 1) {
            Some(s) => s,
            None => ball(g, &g.root(), rmax)?.sphere_sizes().into_iter().map(|c| c as f64).collect(),
        };
        return Ok(radii.iter().map(|&r| p.powi(r as i32 + 1) * spheres[r + 1]).collect());
    }
    let big = ball(g, &g.root(), rmax)?;
    radii
        .iter()
        .map(|&r| {
            let s = big.restrict(r).rooted_set();
            phi_of_set(&s, p, opts.method, opts.inner_replicas, rng::combine(key, r as u64)).map(|x| x.value)
        })
        .collect()
}

/// `E phi_p(B(o, r))` for every radius in `radii`, from one set of sampled roots.
pub fn expected_phi_radii(
    src: &dyn GraphSource,
    radii: &[usize],
    p: f64,
    opts: &PhiOptions,
    replicas: usize,
    seed: u64,
) -> Result<PhiTable> {
    let strata = src.strata();
    let tail_mass = strata.as_ref().map_or(0.0, |s| s.1);
    if let (true, Some((weights, _))) = (opts.stratified, strata) {
        let rows = stratified(src, &weights, radii, p, opts, replicas, seed)?;
        return Ok(PhiTable { rows, tail_mass });
    }
    let values: Vec<Vec<f64>> = (0..replicas as u64)
        .into_par_iter()
        .map(|i| {
            let g = src.sample(replica_seed(seed, i))?;
            instance_profile(&*g, p, radii, opts, rng::key(&[seed, i, 0x7a]))
        })
        .collect::<Result<_>>()?;
    let rows = radii
        .iter()
        .enumerate()
        .map(|(j, &r)| {
            let col: Vec<f64> = values.iter().map(|v| v[j]).collect();
            mean_report("phi", src, p, r, &col, seed)
        })
        .collect();
    Ok(PhiTable { rows, tail_mass })
}

fn stratified(
    src: &dyn GraphSource,
    weights: &[f64],
    radii: &[usize],
    p: f64,
    opts: &PhiOptions,
    replicas: usize,
    seed: u64,
) -> Result<Vec<EstimateReport>> {
    let det = src.strata_are_deterministic();
    let counts: Vec<usize> = weights
        .iter()
        .map(|&w| match (w > 0.0, det) {
            (false, _) => 0,
            (true, true) => 1,
            (true, false) => ((replicas as f64 * w).ceil() as usize).max(2),
        })
        .collect();
    let jobs: Vec<(usize, usize)> = counts.iter().enumerate().flat_map(|(s, &n)| (0..n).map(move |i| (s, i))).collect();
    let values: Vec<Vec<f64>> = jobs
        .par_iter()
        .map(|&(s, i)| {
            let g = src.sample_stratum(s, rng::key(&[seed, s as u64, i as u64]))?;
            instance_profile(&*g, p, radii, opts, rng::key(&[seed, s as u64, i as u64, 0x7a]))
        })
        .collect::<Result<_>>()?;
    let hash = source_hash(&src.descriptor().to_json());
    let mut rows = Vec::with_capacity(radii.len());
    for (j, &r) in radii.iter().enumerate() {
        let (mut est, mut var) = (0.0, 0.0);
        let mut start = 0;
        for (s, &n) in counts.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let col: Vec<f64> = values[start..start + n].iter().map(|v| v[j]).collect();
            start += n;
            let sum = crate::stats::Summary::of(&col);
            est += weights[s] * sum.mean;
            var += (weights[s] * sum.se).powi(2);
        }
        let se = var.sqrt();
        rows.push(EstimateReport {
            experiment: "phi_stratified".into(),
            source_hash: hash.clone(),
            p,
            radius: r,
            replicas: jobs.len(),
            estimate: est,
            ci_lo: est - Z95 * se,
            ci_hi: est + Z95 * se,
            seed,
        });
    }
    Ok(rows)
}

pub fn expected_phi(
    src: &dyn GraphSource,
    r: usize,
    p: f64,
    opts: &PhiOptions,
    replicas: usize,
    seed: u64,
) -> Result<EstimateReport> {
    Ok(expected_phi_radii(src, &[r], p, opts, replicas, seed)?.rows.remove(0))
}

/// One row per `p`, all with the same seed so the roots are shared.
pub fn expected_phi_grid(
    src: &dyn GraphSource,
    r: usize,
    ps: &[f64],
    opts: &PhiOptions,
    replicas: usize,
    seed: u64,
) -> Result<Vec<EstimateReport>> {
    ps.iter().map(|&p| expected_phi(src, r, p, opts, replicas, seed)).collect()
}

enum Scan {
    Witness(EstimateReport),
    NoWitness(EstimateReport),
    Undecided(EstimateReport),
}

/// Extra replica doublings allowed on an undecided scan.
const MAX_DOUBLINGS: u32 = 2;

fn scan_once(src: &dyn GraphSource, r_max: usize, p: f64, opts: &PhiOptions, replicas: usize, seed: u64) -> Result<Scan> {
    let radii: Vec<usize> = (0..=r_max).collect();
    let rows = expected_phi_radii(src, &radii, p, opts, replicas, seed)?.rows;
    let se = |r: &EstimateReport| (r.ci_hi - r.estimate) / Z95;
    if let Some(w) = rows.iter().find(|r| r.estimate < 1.0 - 3.0 * se(r)) {
        return Ok(Scan::Witness(w.clone()));
    }
    let best = rows
        .iter()
        .min_by(|a, b| (a.estimate - 3.0 * se(a)).total_cmp(&(b.estimate - 3.0 * se(b))))
        .expect("at least radius 0")
        .clone();
    if rows.iter().all(|r| r.estimate > 1.0 + 3.0 * se(r)) {
        Ok(Scan::NoWitness(best))
    } else {
        Ok(Scan::Undecided(best))
    }
}

fn scan(src: &dyn GraphSource, r_max: usize, p: f64, opts: &PhiOptions, replicas: usize, seed: u64) -> Result<Scan> {
    let mut n = replicas;
    let mut out = scan_once(src, r_max, p, opts, n, seed)?;
    for _ in 0..MAX_DOUBLINGS {
        if !matches!(out, Scan::Undecided(_)) {
            break;
        }
        n *= 2;
        out = scan_once(src, r_max, p, opts, n, seed)?;
    }
    Ok(out)
}

/// Bisection for the annealed threshold below which some ball `B(o, r)`,
/// `r <= r_max`, has `E phi_p < 1`.
pub fn ptilde_a_bisect(
    src: &dyn GraphSource,
    r_max: usize,
    bracket: (f64, f64),
    tol: f64,
    replicas: usize,
    seed: u64,
    opts: &PhiOptions,
) -> Result<CriticalEstimate> {
    let (mut lo, mut hi) = bracket;
    if !(0.0..=1.0).contains(&lo) || !(lo..=1.0).contains(&hi) {
        return Err(Error::InvalidParameter(format!("bad bracket [{lo}, {hi}]")));
    }
    let mut evidence = Vec::new();
    let mut notes = Vec::new();
    match scan(src, r_max, lo, opts, replicas, seed)? {
        Scan::Witness(row) => evidence.push(row),
        _ => return Err(Error::Bracket { lo, hi, detail: format!("no witness with r <= {r_max} at the lower end") }),
    }
    match scan(src, r_max, hi, opts, replicas, seed)? {
        Scan::Witness(row) => {
            return Err(Error::Bracket { lo, hi, detail: format!("witness at the upper end (radius {})", row.radius) })
        }
        Scan::NoWitness(row) => evidence.push(row),
        Scan::Undecided(row) => {
            notes.push(format!("upper end {hi} undecided, treated as no witness"));
            evidence.push(row);
        }
    }
    let mut conclusive = true;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match scan(src, r_max, mid, opts, replicas, seed)? {
            Scan::Witness(row) => {
                lo = mid;
                evidence.push(row);
            }
            Scan::NoWitness(row) => {
                hi = mid;
                evidence.push(row);
            }
            Scan::Undecided(row) => {
                notes.push(format!("undecided at p = {mid} after {MAX_DOUBLINGS} replica doublings"));
                evidence.push(row);
                conclusive = false;
                break;
            }
        }
    }
    Ok(CriticalEstimate { kind: EstimateKind::PtildeA, interval: (lo, hi), conclusive, evidence, notes })
}
