use percolab::convergence::{tv_distance, BallDistribution, CodeFreq};
use percolab::generators::{source_from_json, CanopyGraph};
use percolab::graph::{ball, canonical_code_of, CanonicalCode, FiniteGraph, LocalGraph, RootedSet, VertexId};
use percolab::percolation::{clusters, edge_open, percolate};
use percolab::phi::{phi_bruteforce, phi_bruteforce_exact, phi_tree};
use percolab::rng::CounterRng;
use proptest::prelude::*;
use serde_json::json;

/// A connected graph on `n <= max_n` vertices: random tree plus chords.
fn connected_graph(max_n: usize) -> impl Strategy<Value = FiniteGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<u32>> = (1..n).map(|v| (0..v as u32).boxed()).collect();
        let chords = proptest::collection::vec((0..n as u32, 0..n as u32), 0..n);
        (Just(n), parents, chords).prop_map(|(n, parents, chords)| {
            let mut edges: Vec<(u32, u32)> = parents.iter().enumerate().map(|(i, &p)| (p, i as u32 + 1)).collect();
            for (a, b) in chords {
                let e = (a.min(b), a.max(b));
                if a != b && !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == e) {
                    edges.push(e);
                }
            }
            FiniteGraph::new(n, edges)
        })
    })
}

fn tree(max_n: usize) -> impl Strategy<Value = FiniteGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<u32>> = (1..n).map(|v| (0..v as u32).boxed()).collect();
        parents.prop_map(move |ps| FiniteGraph::new(n, ps.iter().enumerate().map(|(i, &p)| (p, i as u32 + 1)).collect()))
    })
}

fn rooted(g: FiniteGraph) -> impl Strategy<Value = RootedSet> {
    let n = g.vertex_count() as u32;
    (0..n, proptest::collection::vec(0..n, 1..4)).prop_map(move |(root, boundary)| RootedSet::new(g.clone(), root, boundary))
}

fn permuted(g: &FiniteGraph, perm: &[u32]) -> FiniteGraph {
    let mut edges: Vec<(u32, u32)> = g.edges().iter().map(|&(a, b)| (perm[b as usize], perm[a as usize])).collect();
    edges.reverse();
    FiniteGraph::new(g.vertex_count(), edges)
}

fn shuffle(rng: &mut CounterRng, n: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        v.swap(i, rng.below(i as u64 + 1) as usize);
    }
    v
}

fn distribution(weights: &[u32]) -> BallDistribution {
    let total: u32 = weights.iter().sum::<u32>().max(1);
    let entries = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0)
        .map(|(i, &w)| CodeFreq { code: CanonicalCode(vec![i as u8]), freq: w as f64 / total as f64 })
        .collect();
    BallDistribution { radius: 1, replicas: total as usize, seed: 0, entries }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn canonical_code_ignores_labelling(g in connected_graph(12), root_pick in 0usize..12, seed in any::<u64>()) {
        let root = (root_pick % g.vertex_count()) as u32;
        let code = canonical_code_of(&g, root).unwrap();
        let mut rng = CounterRng::new(seed);
        for _ in 0..100 {
            let perm = shuffle(&mut rng, g.vertex_count());
            prop_assert_eq!(&canonical_code_of(&permuted(&g, &perm), perm[root as usize]).unwrap(), &code);
        }
    }

    #[test]
    fn balls_are_nested(seed in any::<u64>(), r in 0usize..5, kind in 0usize..4) {
        let desc = [
            json!({"kind": "canopy"}),
            json!({"kind": "ugw", "params": {"law": {"uniform": [1, 3]}}}),
            json!({"kind": "gkl", "params": {"k": 3, "l": 5}}),
            json!({"kind": "ptk"}),
        ];
        let src = source_from_json(&desc[kind]).unwrap();
        let g = src.sample(seed).unwrap();
        let small = ball(&*g, &g.root(), r).unwrap();
        let big = ball(&*g, &g.root(), r + 1).unwrap();
        let inner: std::collections::HashSet<&VertexId> = big.vertices.iter().collect();
        prop_assert!(small.vertices.iter().all(|v| inner.contains(v)));
        prop_assert!(small.boundary.iter().all(|(_, w)| inner.contains(w)));
        let again = ball(&*src.sample(seed).unwrap(), &g.root(), r).unwrap();
        prop_assert_eq!(&again.vertices, &small.vertices);
        prop_assert_eq!(&again.edges, &small.edges);
        let cut = big.restrict(r);
        prop_assert_eq!(&cut.vertices, &small.vertices);
    }

    #[test]
    fn coupling_is_monotone(key in any::<u64>(), a in 0i64..1000, b in 0i64..1000, p in 0.0f64..1.0, q in 0.0f64..1.0) {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        let (x, y) = (VertexId::from_slice(&[a as i32]), VertexId::from_slice(&[b as i32]));
        prop_assert!(!edge_open(key, &x, &y, lo) || edge_open(key, &x, &y, hi));
        prop_assert_eq!(edge_open(key, &x, &y, lo), edge_open(key, &y, &x, lo));
    }

    #[test]
    fn finite_configs_are_nested(g in connected_graph(12), seed in any::<u64>(), p in 0.0f64..1.0, dp in 0.0f64..0.5) {
        let lo = percolate(&g, p, seed, 1);
        let hi = percolate(&g, (p + dp).min(1.0), seed, 1);
        prop_assert!(lo.is_subset_of(&hi));
        let mut part = clusters(&g, &lo);
        prop_assert_eq!(part.sizes().iter().sum::<usize>(), g.vertex_count());
    }

    #[test]
    fn tv_is_a_metric(a in proptest::collection::vec(0u32..20, 6), b in proptest::collection::vec(0u32..20, 6), c in proptest::collection::vec(0u32..20, 6)) {
        let (a, b, c) = (distribution(&a), distribution(&b), distribution(&c));
        let ab = tv_distance(&a, &b).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!((ab - tv_distance(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!(tv_distance(&a, &a).unwrap() < 1e-12);
        prop_assert!(ab <= tv_distance(&a, &c).unwrap() + tv_distance(&c, &b).unwrap() + 1e-12);
    }

    #[test]
    fn phi_is_monotone_and_bounded(s in connected_graph(7).prop_flat_map(rooted), p in 0.0f64..1.0, dp in 0.0f64..0.3) {
        prop_assume!(s.graph.edge_count() <= 12);
        let a = phi_bruteforce(&s, p).unwrap().value;
        let b = phi_bruteforce(&s, (p + dp).min(1.0)).unwrap().value;
        prop_assert!(a <= b + 1e-12);
        prop_assert!(a >= 0.0 && a <= p * s.boundary.len() as f64 + 1e-12);
    }

    #[test]
    fn tree_formula_matches_enumeration(s in tree(13).prop_flat_map(rooted), p in 0.0f64..1.0) {
        let a = phi_tree(&s, p).unwrap().value;
        let b = phi_bruteforce(&s, p).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
    }
}

#[test]
fn tree_formula_is_exact_in_rationals() {
    use num_rational::Ratio;
    let mut rng = CounterRng::new(99);
    for _ in 0..100 {
        let n = 1 + rng.below(13) as usize;
        let edges = (1..n as u32).map(|v| (rng.below(v as u64) as u32, v)).collect();
        let s = RootedSet::new(FiniteGraph::new(n, edges), rng.below(n as u64) as u32, vec![rng.below(n as u64) as u32]);
        let p = Ratio::new(1 + rng.below(9) as i64, 10);
        let brute: Ratio<i64> = phi_bruteforce_exact(&s, p).unwrap();
        let leaf_depth = s.graph.bfs(s.root)[s.boundary[0] as usize].unwrap();
        assert_eq!(brute, p.pow(leaf_depth as i32 + 1));
    }
}

#[test]
fn canopy_leaf_is_a_leaf() {
    let g = CanopyGraph::new(0, None);
    assert_eq!(g.neighbors(&g.root()).unwrap().len(), 1);
}
