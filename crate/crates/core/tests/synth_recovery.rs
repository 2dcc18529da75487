use cmg_core::build::build_activity_graph;
use cmg_core::cluster::{adjusted_rand_index, kmeans};
use cmg_core::components::extract_components;
use cmg_core::features::static_features;
use cmg_core::synth::{generate_scenario, label_components, GraphFamily, SyntheticScenario, Template};
use cmg_core::{ActivationMask, KMeansConfig, Normalization};

fn three_templates(seed: u64) -> SyntheticScenario {
    let t = Template { seed_node: None, max_radius: 2, duration: 8 };
    SyntheticScenario::new(GraphFamily::Grid { rows: 10, cols: 20 }, vec![t.clone(), t.clone(), t], 300, seed)
        .repetitions(20)
        .noise_rate(0.01)
}

#[test]
fn planted_templates_are_recovered() {
    for seed in 0..5 {
        let s = generate_scenario(&three_templates(seed)).unwrap();
        assert_eq!(s.graph.num_nodes(), 200);
        assert_eq!(s.instances.len(), 60);
        let mask = ActivationMask::from_signal(&s.signal, Normalization::ZscorePerNode, 0.0);
        let h = build_activity_graph(&s.graph, &mask).unwrap();
        let comps = extract_components(&h);
        let vectors: Vec<_> = comps.components.iter().map(|c| static_features(c, 200, true)).collect();
        let model = kmeans(&vectors, &KMeansConfig::new(3, seed)).unwrap();
        let labels = label_components(&comps, &s.instances);
        let (truth, found): (Vec<usize>, Vec<usize>) = labels
            .iter()
            .zip(&model.assignments)
            .filter_map(|(l, &a)| l.map(|l| (l, a)))
            .unzip();
        assert!(truth.len() >= 60, "seed {seed}: {} labelled components", truth.len());
        let ari = adjusted_rand_index(&truth, &found);
        assert!(ari >= 0.9, "seed {seed}: ARI {ari}");
    }
}

#[test]
fn noise_alone_is_mostly_singletons() {
    let sc = SyntheticScenario::new(GraphFamily::ErdosRenyi { n: 300, p: 0.003 }, vec![], 400, 42).noise_rate(0.01);
    let s = generate_scenario(&sc).unwrap();
    let mask = ActivationMask::from_signal(&s.signal, Normalization::None, 0.5);
    let comps = extract_components(&build_activity_graph(&s.graph, &mask).unwrap());
    assert!(comps.total_nodes > 1000);
    assert!(comps.singletons as f64 >= 0.95 * comps.total_nodes as f64, "{} of {}", comps.singletons, comps.total_nodes);
    assert!(comps.components.iter().all(|c| c.members.len() <= 4));
}
