use std::collections::{BTreeMap, BTreeSet, VecDeque};

use cmg_core::build::build_activity_graph;
use cmg_core::components::extract_components;
use cmg_core::{ActivationMask, CausalActivityGraph, LayerNode, SpatialGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bfs_components(h: &CausalActivityGraph) -> (BTreeSet<Vec<LayerNode>>, usize) {
    let mut adj: BTreeMap<LayerNode, Vec<LayerNode>> = h.nodes().iter().map(|&v| (v, Vec::new())).collect();
    for e in h.edges() {
        adj.get_mut(&e.source()).unwrap().push(e.target());
        adj.get_mut(&e.target()).unwrap().push(e.source());
    }
    let mut seen = BTreeSet::new();
    let mut comps = BTreeSet::new();
    let mut singletons = 0;
    for &start in h.nodes() {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[&v] {
                if seen.insert(w) {
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        if comp.len() == 1 {
            singletons += 1;
        } else {
            comp.sort();
            comps.insert(comp);
        }
    }
    (comps, singletons)
}

#[test]
fn union_find_matches_bfs() {
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=40);
        let t = rng.random_range(2..=80);
        let p = rng.random_range(0.02..0.2);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p) {
                    edges.push((i, j, 1.0));
                }
            }
        }
        let g = SpatialGraph::from_index_edges(n, rng.random_bool(0.3), edges).unwrap();
        let density = rng.random_range(0.05..0.4);
        let m = ActivationMask::from_fn(n, t, |_, _| rng.random_bool(density));
        let h = build_activity_graph(&g, &m).unwrap();
        let set = extract_components(&h);
        set.check_invariants(&h).unwrap();

        let (want, singletons) = bfs_components(&h);
        let got: BTreeSet<_> = set.components.iter().map(|c| c.members.clone()).collect();
        assert_eq!(got, want, "seed {seed}");
        assert_eq!(set.singletons, singletons);
        assert_eq!(set.total_nodes, m.count_active());

        let mut covered = BTreeSet::new();
        for c in &set.components {
            c.check_invariants().unwrap();
            let layers: BTreeSet<u32> = c.members.iter().map(|v| v.layer).collect();
            assert_eq!(layers.len(), c.width);
            assert_eq!(c.width as u32, c.end_layer - c.start_layer + 1);
            assert_eq!(c.spatial_spread, c.spatial_nodes().len());
            for v in &c.members {
                assert!(covered.insert(*v), "member in two components");
            }
            let members: BTreeSet<_> = c.members.iter().collect();
            for e in &c.edges {
                assert!(members.contains(&e.source()) && members.contains(&e.target()));
            }
        }
        let internal: usize = set.components.iter().map(|c| c.edges.len()).sum();
        assert_eq!(internal, h.edges().len());
        assert_eq!(covered.len() + set.singletons, h.nodes().len());
        for w in set.components.windows(2) {
            assert!((w[0].members.len(), std::cmp::Reverse(w[0].id)) >= (w[1].members.len(), std::cmp::Reverse(w[1].id)));
        }
    }
}
