use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cmg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmg")).args(args).output().unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn synth(dir: &Path, extra: &[&str]) {
    let mut args = vec!["synth", "--out", arg(dir)];
    args.extend_from_slice(extra);
    let out = cmg(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn manifest(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn missing_input_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmg(&["mask", "--graph", "/nonexistent/g.csv", "--signal", "s.csv", "--mu", "0", "--out", arg(&dir.path().join("m"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/g.csv"));

    let cfg = dir.path().join("p.toml");
    std::fs::write(&cfg, "graph = \"nope.csv\"\nsignal = \"nope.csv\"\noutput = \"out\"\nmu = 0.0\nk = 2\n").unwrap();
    assert_eq!(cmg(&["pipeline", "--config", arg(&cfg)]).status.code(), Some(2));
    std::fs::write(&cfg, "graph = \"a\"\nsignal = \"b\"\noutput = \"out\"\nmu = 0.0\nbogus = 1\n").unwrap();
    assert_eq!(cmg(&["pipeline", "--config", arg(&cfg)]).status.code(), Some(2));
    assert_eq!(cmg(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(cmg(&["--help"]).status.code(), Some(0));
}

#[test]
fn pipeline_recovers_planted_templates() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), &["--seed", "3"]);
    let out = cmg(&["pipeline", "--config", arg(&dir.path().join("pipeline.toml")), "--checked"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = manifest(&dir.path().join("out"));
    assert_eq!(m["counts"]["k"], 3);
    assert_eq!(m["recovery"]["clusters_recovered"], 3);
    assert!(m["recovery"]["ari"].as_f64().unwrap() >= 0.9, "{m}");
    for f in ["id_map.json", "mask.bin", "h.csv", "components.json", "summary.csv", "features.json", "cluster.json", "centroids.csv", "aac_0.json"] {
        assert!(dir.path().join("out").join(f).exists(), "{f}");
    }
}

#[test]
fn huge_threshold_gives_no_components() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), &["--rows", "4", "--cols", "5", "--templates", "1", "--repetitions", "2", "--steps", "40"]);
    let out = cmg(&["pipeline", "--config", arg(&dir.path().join("pipeline.toml")), "--mu", "1e9"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let m = manifest(&dir.path().join("out"));
    assert_eq!(m["counts"]["components"], 0);
    assert!(!m["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn stages_chain_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth(d, &["--rows", "4", "--cols", "4", "--templates", "1", "--repetitions", "3", "--steps", "60", "--noise", "0", "--radius", "1", "--duration", "4"]);
    let run = |args: &[&str]| {
        let out = cmg(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    };
    let p = |f: &str| d.join(f).to_str().unwrap().to_string();
    run(&["ingest", "--graph", &p("graph.csv"), "--signal", &p("signal.csv"), "--out", &p("in")]);
    let ids = p("in/id_map.json");
    run(&["mask", "--graph", &p("in/graph.csv"), "--ids", &ids, "--signal", &p("in/signal.csv"), "--normalization", "none", "--mu", "0.5", "--out", &p("mask.bin")]);
    run(&["build", "--graph", &p("in/graph.csv"), "--ids", &ids, "--mask", &p("mask.bin"), "--out", &p("h.csv")]);
    run(&["components", "--ids", &ids, "--h", &p("h.csv"), "--mask", &p("mask.bin"), "--out", &p("c.json")]);
    let comps: Value = serde_json::from_str(&std::fs::read_to_string(d.join("c.json")).unwrap()).unwrap();
    assert_eq!(comps.as_array().unwrap().len(), 3);
    // three repetitions of one template: same footprint, four layers each
    let comps = comps.as_array().unwrap();
    assert!(comps.iter().all(|c| c["width"] == 4 && c["num_members"] == comps[0]["num_members"]));
    run(&["features", "--ids", &ids, "--components", &p("c.json"), "--out", &p("f.json")]);
    run(&["cluster", "--ids", &ids, "--features", &p("f.json"), "--k", "1", "--out", &p("k.json")]);
    run(&["aac", "--ids", &ids, "--components", &p("c.json"), "--cluster", &p("k.json"), "--out", &p("aac")]);
    run(&["walk", "--ids", &ids, "--aac", &p("aac/aac_0.json"), "--rng-seed", "5", "--out", &p("w.json")]);
    let walk: Vec<String> = serde_json::from_str(&std::fs::read_to_string(d.join("w.json")).unwrap()).unwrap();
    assert_eq!(walk.len(), 4);
    // verify needs N*T <= 4096
    run(&["verify", "--graph", &p("in/graph.csv"), "--ids", &ids, "--mask", &p("mask.bin"), "--out", &p("v.json")]);
    run(&["verify", "--graph", &p("in/graph.csv"), "--ids", &ids, "--mask", &p("mask.bin"), "--include-intra", "--out", &p("v2.json")]);
}
