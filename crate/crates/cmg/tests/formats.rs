use std::fs;

use cmg::formats::*;
use cmg_core::aac::build_all;
use cmg_core::build::build_activity_graph;
use cmg_core::components::extract_components;
use cmg_core::features::static_features;
use cmg_core::{ActivationMask, EdgeNormalization, IdMap, SpatialGraph};

fn fixture() -> (SpatialGraph, ActivationMask) {
    let g = SpatialGraph::from_index_edges(5, false, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 2.5), (3, 4, 1.0)]).unwrap();
    let m = ActivationMask::from_fn(5, 70, |i, t| (i * 7 + t * 3) % 5 < 2 || t == 65);
    (g, m)
}

#[test]
fn mask_round_trip_across_word_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let (_, m) = fixture();
    let p = dir.path().join("m.bin");
    write_mask(&p, &m).unwrap();
    let bytes = fs::read(&p).unwrap();
    assert_eq!(&bytes[..4], b"CMGM");
    assert_eq!(bytes.len(), 4 + 4 + 8 + 8 + 5 * 2 * 8);
    let back = read_mask(&p).unwrap();
    assert_eq!(back.bits(), m.bits());

    let mut bad = bytes.clone();
    bad[0] = b'X';
    fs::write(&p, &bad).unwrap();
    assert!(read_mask(&p).is_err());
    // a set padding bit in the last word of row 0
    let mut bad = bytes.clone();
    bad[24 + 15] |= 0x80;
    fs::write(&p, &bad).unwrap();
    assert!(read_mask(&p).is_err());
    fs::write(&p, &bytes[..bytes.len() - 3]).unwrap();
    assert!(read_mask(&p).is_err());
}

#[test]
fn graph_and_signal_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.csv");
    fs::write(&p, "# comment\nsrc,dst,weight\na,b,1.5\nb,c,1\na,c,2\n").unwrap();
    let g = load_edge_list(&p, true, None).unwrap();
    assert_eq!((g.num_nodes(), g.num_edges()), (3, 3));
    let q = dir.path().join("g2.csv");
    write_edge_list(&q, &g).unwrap();
    let g2 = load_edge_list(&q, true, None).unwrap();
    assert_eq!(g.edges(), g2.edges());

    let s = dir.path().join("s.csv");
    fs::write(&s, "node,t0,t1,t2\nc,1,2,3\na,0,0.5,1\nb,2,2,2\n").unwrap();
    let sig = load_signal(&s, g.ids()).unwrap();
    assert_eq!(sig.row(0), &[0.0, 0.5, 1.0]);
    assert_eq!(sig.row(2), &[1.0, 2.0, 3.0]);
    let s2 = dir.path().join("s2.csv");
    write_signal(&s2, &sig, g.ids()).unwrap();
    assert_eq!(load_signal(&s2, g.ids()).unwrap().values(), sig.values());
}

#[test]
fn malformed_inputs_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.csv");
    fs::write(&p, "src,dst\na,b\nb,c,oops\n").unwrap();
    let msg = load_edge_list(&p, false, None).unwrap_err().to_string();
    assert!(msg.contains("g.csv"), "{msg}");
    fs::write(&p, "src,dst,weight\na,b,1\nb,c,x\n").unwrap();
    let msg = load_edge_list(&p, false, None).unwrap_err().to_string();
    assert!(msg.contains(":3"), "{msg}");
    fs::write(&p, "from,to\na,b\n").unwrap();
    assert!(load_edge_list(&p, false, None).is_err());

    let ids = IdMap::from_ids(["a", "b"]);
    let s = dir.path().join("s.csv");
    fs::write(&s, "node,t0,t1\na,1,NaN\nb,0,0\n").unwrap();
    assert!(load_signal(&s, &ids).is_err());
    fs::write(&s, "node,t0,t1\na,1,1\na,0,0\n").unwrap();
    assert!(load_signal(&s, &ids).is_err());
    fs::write(&s, "node,t0,t1\na,1,1\n").unwrap();
    assert!(load_signal(&s, &ids).is_err(), "node b has no row");
}

#[test]
fn activity_graph_and_components_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (g, m) = fixture();
    let h = build_activity_graph(&g, &m).unwrap();
    let hp = dir.path().join("h.csv");
    write_activity_graph(&hp, &h, g.ids()).unwrap();
    let mut edges = read_activity_edges(&hp, g.ids()).unwrap();
    edges.sort_unstable();
    assert_eq!(edges, h.edges());

    let set = extract_components(&h);
    assert!(!set.components.is_empty());
    let cp = dir.path().join("c.json");
    write_components(&cp, &set.components, g.ids()).unwrap();
    let back = read_components(&cp, g.ids()).unwrap();
    assert_eq!(back, set.components);

    let sp = dir.path().join("summary.csv");
    write_summary(&sp, &set.components, Some(TimeAxis { origin: 3600, step_secs: 600 })).unwrap();
    let text = fs::read_to_string(&sp).unwrap();
    let first = &set.components[0];
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with(&format!("{},{},{},", first.num_members(), first.width, first.spatial_spread)), "{row}");
}

#[test]
fn features_and_aac_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (g, m) = fixture();
    let set = extract_components(&build_activity_graph(&g, &m).unwrap());
    let vectors: Vec<_> = set.components.iter().map(|c| static_features(c, 5, true)).collect();
    let fp = dir.path().join("f.json");
    write_features(&fp, &vectors, true, g.ids()).unwrap();
    assert_eq!(read_features(&fp, g.ids()).unwrap(), vectors);

    let k = 2.min(set.components.len());
    let assignments: Vec<usize> = (0..set.components.len()).map(|i| i % k).collect();
    for aac in build_all(&set.components, &assignments, k, EdgeNormalization::Support).unwrap() {
        let p = dir.path().join(format!("aac_{}.json", aac.cluster_id));
        write_aac(&p, &aac, g.ids()).unwrap();
        let back = read_aac(&p, g.ids()).unwrap();
        assert_eq!(back.nodes().collect::<Vec<_>>(), aac.nodes().collect::<Vec<_>>());
        assert_eq!(back.edges().collect::<Vec<_>>(), aac.edges().collect::<Vec<_>>());
    }
}
