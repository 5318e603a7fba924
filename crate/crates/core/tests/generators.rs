use percolab::convergence::{ball_distributions, tv_distance};
use percolab::generators::{
    replica_seed, source_from_json, CanopySource, GklSource, GraphSource, LazyTree, OffspringLaw, UgwRule, UgwSource,
    UgwState,
};
use percolab::graph::{LocalGraph, VertexId};
use percolab::unimodularity::RootStatistic;
use rayon::prelude::*;
use serde_json::json;

/// Every bin `k < law.len()` is within 3 standard errors of `law[k]`.
fn assert_within_3se(src: &dyn GraphSource, stat: RootStatistic, law: &[f64], n: usize, seed: u64) {
    let values: Vec<usize> = (0..n as u64)
        .into_par_iter()
        .map(|i| stat.extract(&*src.sample(replica_seed(seed, i)).unwrap()).unwrap())
        .collect();
    for (k, &p) in law.iter().enumerate() {
        let f = values.iter().filter(|&&v| v == k).count() as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt().max(1e-12);
        assert!((f - p).abs() <= 3.0 * se, "{stat:?} = {k}: {f} vs {p}");
    }
}

#[test]
fn canopy_levels_conform() {
    let law: Vec<f64> = (0..8).map(|n| 0.5f64.powi(n + 1)).collect();
    assert_within_3se(&CanopySource::new(), RootStatistic::Level, &law, 100_000, 1);
}

#[test]
fn ugw_degrees_conform() {
    let law = OffspringLaw::uniform(1, 3).unwrap();
    let src = UgwSource::new(law.clone(), false).unwrap();
    assert_within_3se(&src, RootStatistic::Degree, &law.root_degree_law(), 100_000, 2);
    let law = OffspringLaw::poisson(1.5).unwrap();
    let src = UgwSource::new(law.clone(), false).unwrap();
    assert_within_3se(&src, RootStatistic::Degree, &law.root_degree_law()[..8], 100_000, 3);
}

#[test]
fn gkl_degrees_conform() {
    let mut law = vec![0.0; 10];
    law[2] = 0.6;
    law[9] = 0.4;
    assert_within_3se(&GklSource::new(3, 5).unwrap(), RootStatistic::Degree, &law, 100_000, 4);
}

#[test]
fn conditioned_trees_survive() {
    let (rule, dec) = UgwRule::new(&OffspringLaw::poisson(1.5).unwrap(), true).unwrap();
    assert!(dec.unwrap().q > 0.0);
    for seed in 0..20 {
        let t = LazyTree::new(rule.clone(), seed);
        let mut v = VertexId::root();
        for depth in 0..10_000 {
            let next = t
                .neighbors(&v)
                .unwrap()
                .iter()
                .filter(|w| w.len() > v.len())
                .find(|w| t.state(w) == Some(UgwState::Surviving))
                .cloned();
            v = next.unwrap_or_else(|| panic!("seed {seed}: backbone ends at depth {depth}"));
        }
    }
}

#[test]
fn independent_runs_agree() {
    let sources = [
        (json!({"kind": "canopy"}), 3),
        (json!({"kind": "ugw", "params": {"law": {"constant": 2}}}), 3),
        (json!({"kind": "gkl", "params": {"k": 3, "l": 5}}), 2),
        (json!({"kind": "gn", "params": {"n": 4}}), 3),
        (json!({"kind": "ugw", "params": {"law": {"uniform": [1, 3]}}}), 2),
    ];
    for (desc, rmax) in sources {
        let src = source_from_json(&desc).unwrap();
        let radii: Vec<usize> = (1..=rmax).collect();
        let a = ball_distributions(&*src, &radii, 100_000, 10).unwrap();
        let b = ball_distributions(&*src, &radii, 100_000, 11).unwrap();
        for (x, y) in a.iter().zip(&b) {
            let tv = tv_distance(x, y).unwrap();
            assert!(tv < 0.02, "{desc} r = {}: {tv}", x.radius);
        }
    }
}
