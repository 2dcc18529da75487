use std::collections::BTreeSet;

use cmg_core::build::{build_activity_graph, build_activity_graph_dynamic, Builder};
use cmg_core::verify::verify_against_definition;
use cmg_core::{ActivationMask, CausalEdge, EdgeMask, LayerNode, SpatialGraph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn naive_edges(g: &SpatialGraph, m: &ActivationMask, em: Option<&EdgeMask>) -> BTreeSet<CausalEdge> {
    let mut out = BTreeSet::new();
    for t in 0..m.num_steps().saturating_sub(1) {
        for (src, e, dst) in g.triplets() {
            let live = em.is_none_or(|em| em.get(e, t));
            if live && m.get(src as usize, t) && m.get(dst as usize, t + 1) {
                out.insert(CausalEdge::new(src, dst, t as u32));
            }
        }
        for i in 0..m.num_nodes() {
            if m.get(i, t) && m.get(i, t + 1) {
                out.insert(CausalEdge::new(i as u32, i as u32, t as u32));
            }
        }
    }
    out
}

fn naive_nodes(m: &ActivationMask) -> Vec<LayerNode> {
    let mut v = Vec::new();
    for t in 0..m.num_steps() {
        for i in 0..m.num_nodes() {
            if m.get(i, t) {
                v.push(LayerNode::new(i as u32, t as u32));
            }
        }
    }
    v
}

/// Flags of `naive_nodes` order: no edge in `edges` touches the pair.
fn naive_isolated(m: &ActivationMask, edges: &BTreeSet<CausalEdge>) -> Vec<bool> {
    let touched: BTreeSet<LayerNode> = edges.iter().flat_map(|e| [e.source(), e.target()]).collect();
    naive_nodes(m).iter().map(|n| !touched.contains(n)).collect()
}

fn isolated_flags(h: &cmg_core::CausalActivityGraph) -> Vec<bool> {
    (0..h.nodes().len()).map(|i| h.is_isolated(i)).collect()
}

fn random_instance(seed: u64, max_n: usize, steps: &[usize]) -> (SpatialGraph, ActivationMask) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = steps[rng.random_range(0..steps.len())];
    let directed = rng.random_bool(0.3);
    let g = if rng.random_bool(0.5) {
        let n = rng.random_range(2..=max_n);
        let p = rng.random_range(0.05..0.3);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && (directed || i < j) && rng.random_bool(p) {
                    edges.push((i, j, 1.0));
                }
            }
        }
        SpatialGraph::from_index_edges(n, directed, edges).unwrap()
    } else {
        let rows = rng.random_range(1..=7usize);
        let cols = rng.random_range(2..=7usize);
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1, 1.0));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols, 1.0));
                }
            }
        }
        SpatialGraph::from_index_edges(rows * cols, directed, edges).unwrap()
    };
    let density = rng.random_range(0.1..0.5);
    let m = ActivationMask::from_fn(g.num_nodes(), t, |_, _| rng.random_bool(density));
    (g, m)
}

#[test]
fn builder_matches_naive_oracle() {
    for seed in 0..200 {
        let (g, m) = random_instance(seed, 50, &[7, 63, 64, 65, 129]);
        let h = build_activity_graph(&g, &m).unwrap();
        let naive = naive_edges(&g, &m, None);
        let want: Vec<_> = naive.iter().copied().collect();
        assert_eq!(h.edges(), &want[..], "seed {seed}");
        assert_eq!(h.nodes(), &naive_nodes(&m)[..], "seed {seed}");
        assert_eq!(isolated_flags(&h), naive_isolated(&m, &naive), "seed {seed}");
        h.check_invariants(Some(&g), Some(&m)).unwrap();
    }
}

#[test]
fn dynamic_builder_matches_naive_oracle() {
    for seed in 0..100 {
        let (g, m) = random_instance(1000 + seed, 30, &[5, 64, 130]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits = cmg_core::bits::BitMatrix::from_fn(g.num_edges(), m.num_steps(), |_, _| rng.random_bool(0.6));
        let em = EdgeMask::from_bits(bits);
        let h = build_activity_graph_dynamic(&g, &m, &em).unwrap();
        let naive = naive_edges(&g, &m, Some(&em));
        let want: Vec<_> = naive.iter().copied().collect();
        assert_eq!(h.edges(), &want[..], "seed {seed}");
        assert_eq!(isolated_flags(&h), naive_isolated(&m, &naive), "seed {seed}");
    }
}

#[test]
fn all_ones_edge_mask_is_static_build() {
    for seed in 0..50 {
        let (g, m) = random_instance(5000 + seed, 40, &[3, 64, 100]);
        let em = EdgeMask::all_ones(&g, m.num_steps());
        assert_eq!(
            build_activity_graph_dynamic(&g, &m, &em).unwrap(),
            build_activity_graph(&g, &m).unwrap()
        );
    }
}

#[test]
fn tiny_instances_match_definition() {
    for seed in 0..50 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=6);
        let t = rng.random_range(1..=4);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(0.4) {
                    edges.push((i, j, 1.0));
                }
            }
        }
        let g = SpatialGraph::from_index_edges(n, false, edges).unwrap();
        let m = ActivationMask::from_fn(n, t, |_, _| rng.random_bool(0.5));
        for intra in [false, true] {
            let r = verify_against_definition(&g, &m, intra).unwrap();
            assert!(r.pass, "seed {seed} intra {intra}: {:?}", r.first_mismatch);
        }
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let (g, m) = random_instance(77, 50, &[129]);
    let one = Builder::new(&g, &m).workers(1).build().unwrap();
    for w in [2, 3, 4, 8, 64] {
        assert_eq!(Builder::new(&g, &m).workers(w).build().unwrap(), one);
    }
}

proptest! {
    #[test]
    fn higher_threshold_gives_subgraph(seed in 0u64..1000, lo in -1.0f64..0.5, delta in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 12;
        let t = 70;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(0.25) {
                    edges.push((i, j, 1.0));
                }
            }
        }
        let g = SpatialGraph::from_index_edges(n, false, edges).unwrap();
        let values: Vec<f64> = (0..n * t).map(|_| rng.random_range(-2.0..2.0)).collect();
        let s = cmg_core::SignalMatrix::new(n, t, values).unwrap();
        let low = build_activity_graph(&g, &s.threshold(lo)).unwrap();
        let high = build_activity_graph(&g, &s.threshold(lo + delta)).unwrap();
        let low_edges: BTreeSet<_> = low.edges().iter().copied().collect();
        prop_assert!(high.edges().iter().all(|e| low_edges.contains(e)));
        let low_nodes: BTreeSet<_> = low.nodes().iter().copied().collect();
        prop_assert!(high.nodes().iter().all(|v| low_nodes.contains(v)));
    }
}
