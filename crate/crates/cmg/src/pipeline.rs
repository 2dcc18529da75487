//! End-to-end run: ingest, normalise, threshold, build, components,
//! features, k-means and average components.

use std::path::{Path, PathBuf};
use std::time::Instant;

use cmg_core::aac::build_all;
use cmg_core::build::Builder;
use cmg_core::cluster::{adjusted_rand_index, kmeans, scan_k, ScanRow};
use cmg_core::components::extract_components;
use cmg_core::features::static_features;
use cmg_core::synth::label_components;
use cmg_core::verify::{verify_against_definition, VERIFY_LIMIT};
use cmg_core::{EdgeMask, IdMap, KMeansConfig, Normalization, SpatialGraph};
use serde::Serialize;

use crate::config::PipelineConfig;
use crate::error::{Error, Result, StageExt};
use crate::formats;

#[derive(Clone, Debug, Serialize)]
pub struct StageTiming {
    pub stage: &'static str,
    pub ms: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Counts {
    pub spatial_nodes: usize,
    pub spatial_edges: usize,
    pub steps: usize,
    pub activated: usize,
    pub h_nodes: usize,
    pub h_edges: usize,
    pub neighbor_edges: usize,
    pub self_edges: usize,
    pub components: usize,
    pub singletons: usize,
    pub k: Option<usize>,
    pub cluster_sizes: Vec<usize>,
    pub aac_nodes: Vec<usize>,
    pub aac_edges: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Recovery {
    /// Components whose majority of members belongs to one planted instance.
    pub labelled_components: usize,
    pub ari: f64,
    /// Distinct templates that are the majority label of some cluster.
    pub clusters_recovered: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub workers: usize,
    pub config: PipelineConfig,
    pub timings_ms: Vec<StageTiming>,
    pub counts: Counts,
    pub artifacts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovery: Option<Recovery>,
    pub warnings: Vec<String>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

struct Run {
    out: PathBuf,
    timings: Vec<StageTiming>,
    artifacts: Vec<String>,
    warnings: Vec<String>,
}

impl Run {
    fn timed<T>(&mut self, stage: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f().stage(stage)?;
        self.timings.push(StageTiming { stage, ms: start.elapsed().as_secs_f64() * 1e3 });
        Ok(out)
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.artifacts.push(name.to_string());
        self.out.join(name)
    }

    fn warn(&mut self, msg: String) {
        log::warn!("{msg}");
        self.warnings.push(msg);
    }
}

/// Loads the graph and gives nodes that only appear in the signal an index
/// after the graph's own nodes.
pub fn ingest(graph_path: &Path, signal_path: &Path, directed: bool) -> Result<(SpatialGraph, formats::SignalRows, Vec<String>)> {
    let graph = formats::load_edge_list(graph_path, directed, None)?;
    let rows = formats::read_signal_rows(signal_path)?;
    let extra: Vec<String> = rows.nodes.iter().filter(|n| graph.ids().get(n).is_none()).cloned().collect();
    if extra.is_empty() {
        return Ok((graph, rows, extra));
    }
    let mut ids: IdMap = graph.ids().clone();
    for n in &extra {
        ids.intern(n);
    }
    let graph = formats::load_edge_list(graph_path, directed, Some(ids))?;
    Ok((graph, rows, extra))
}

pub fn run_pipeline(config: &PipelineConfig) -> Result<Manifest> {
    config.validate()?;
    let workers = config.workers();
    std::fs::create_dir_all(&config.output).map_err(|e| Error::io(&config.output, e))?;
    let mut run = Run { out: config.output.clone(), timings: Vec::new(), artifacts: Vec::new(), warnings: Vec::new() };
    let mut counts = Counts::default();

    let (graph, signal) = run.timed("ingest", || {
        let (graph, rows, extra) = ingest(&config.graph, &config.signal, config.directed)?;
        let signal = formats::align_signal(&config.signal, rows, graph.ids())?;
        Ok((graph, signal, extra))
    })
    .map(|(g, s, extra)| {
        if !extra.is_empty() {
            run.warn(format!("{} signal nodes have no edges", extra.len()));
        }
        (g, s)
    })?;
    let ids = graph.ids().clone();
    formats::write_ids(&run.path("id_map.json"), &ids)?;
    counts.spatial_nodes = graph.num_nodes();
    counts.spatial_edges = graph.num_edges();
    counts.steps = signal.num_steps();

    let edge_mask = match (&config.events, config.dynamic) {
        (Some(path), true) => Some(run.timed("events", || {
            let events = formats::load_edge_events(path, &graph, signal.num_steps())?;
            Ok(EdgeMask::from_events(&events, &graph))
        })?),
        _ => None,
    };

    let norm: Normalization = config.normalization.into();
    let normalized = run.timed("zscore", || Ok(signal.normalize(norm)))?;
    let mask = run.timed("threshold", || Ok(normalized.threshold(config.mu)))?;
    drop(normalized);
    formats::write_mask(&run.path("mask.bin"), &mask)?;
    counts.activated = mask.count_active();
    if counts.activated == 0 {
        run.warn(format!("no (node, step) pair exceeds mu = {}", config.mu));
    }

    let h = run.timed("build", || {
        let mut b = Builder::new(&graph, &mask).workers(workers);
        if let Some(em) = &edge_mask {
            b = b.edge_mask(em);
        }
        let h = b.build()?;
        if config.checked {
            h.check_invariants(Some(&graph), Some(&mask))?;
            if edge_mask.is_none() && graph.num_nodes() * mask.num_steps() <= VERIFY_LIMIT {
                let report = verify_against_definition(&graph, &mask, config.include_intra)?;
                if !report.pass {
                    return Err(Error::Runtime(format!("builder disagrees with definition: {:?}", report.first_mismatch)));
                }
            }
        }
        Ok(h)
    })?;
    formats::write_activity_graph(&run.path("h.csv"), &h, &ids)?;
    let stats = h.stats();
    counts.h_nodes = stats.nodes;
    counts.h_edges = h.edges().len();
    counts.neighbor_edges = stats.neighbor_edges;
    counts.self_edges = stats.self_edges;

    let set = run.timed("components", || {
        let set = extract_components(&h);
        if config.checked {
            set.check_invariants(&h)?;
        }
        Ok(set)
    })?;
    drop(h);
    formats::write_components(&run.path("components.json"), &set.components, &ids)?;
    formats::write_summary(&run.path("summary.csv"), &set.components, None)?;
    counts.components = set.components.len();
    counts.singletons = set.singletons;

    let n = graph.num_nodes();
    let vectors = run.timed("features", || {
        Ok(set.components.iter().map(|c| static_features(c, n, config.normalize_static)).collect::<Vec<_>>())
    })?;
    formats::write_features(&run.path("features.json"), &vectors, config.normalize_static, &ids)?;

    let mut recovery = None;
    if set.components.is_empty() {
        run.warn("no components found; clustering skipped".into());
    } else {
        let base = KMeansConfig::new(0, config.seed).restarts(config.restarts).max_iter(config.max_iter);
        let mut k = config.k;
        if let Some([lo, hi]) = config.k_range {
            let hi = hi.min(vectors.len());
            if lo > hi {
                return Err(Error::Config(format!("k_range needs at least {lo} components, found {}", vectors.len())).in_stage("scan"));
            }
            let rows = run.timed("scan", || Ok(scan_k(&vectors, lo..=hi, &base)?))?;
            formats::write_scan(&run.path("scan.csv"), &rows)?;
            if k.is_none() {
                let best = best_silhouette(&rows);
                run.warn(format!("k not set; using k = {best} with the highest silhouette"));
                k = Some(best);
            }
        }
        let k = k.expect("validated");
        let model = run.timed("cluster", || {
            let model = kmeans(&vectors, &KMeansConfig { k, ..base })?;
            if config.checked {
                model.check_invariants(&vectors)?;
            }
            Ok(model)
        })?;
        formats::write_cluster(&run.path("cluster.json"), &model, "centroids.csv")?;
        formats::write_centroids(&run.path("centroids.csv"), &model, &ids)?;
        counts.k = Some(k);
        counts.cluster_sizes = model.cluster_sizes();

        let aacs = run.timed("aac", || {
            let all = build_all(&set.components, &model.assignments, k, config.edge_weighting.into())?;
            let sparse = all.iter().map(|a| a.sparsify(config.tau)).collect::<cmg_core::Result<Vec<_>>>()?;
            if config.checked {
                for a in &sparse {
                    a.check_invariants()?;
                }
            }
            Ok(sparse)
        })?;
        for aac in &aacs {
            let c = aac.cluster_id;
            formats::write_aac(&run.path(&format!("aac_{c}.json")), aac, &ids)?;
            formats::write_layer_profile(&run.path(&format!("aac_{c}_layers.csv")), &aac.layer_profile())?;
            counts.aac_nodes.push(aac.num_nodes());
            counts.aac_edges.push(aac.num_edges());
        }

        if let Some(path) = &config.truth {
            let instances = formats::read_truth(path, &ids).stage("truth")?;
            recovery = Some(score(&label_components(&set, &instances), &model.assignments, k));
        }
    }

    let manifest = Manifest {
        tool: "cmg",
        version: env!("CARGO_PKG_VERSION"),
        seed: config.seed,
        workers,
        config: config.clone(),
        timings_ms: run.timings,
        counts,
        artifacts: run.artifacts,
        recovery,
        warnings: run.warnings,
    };
    formats::write_json(&config.output.join(MANIFEST_FILE), &manifest)?;
    Ok(manifest)
}

/// Highest silhouette, smallest k on ties.
pub fn best_silhouette(rows: &[ScanRow]) -> usize {
    let mut best = &rows[0];
    for r in rows {
        if r.silhouette.unwrap_or(f64::NEG_INFINITY) > best.silhouette.unwrap_or(f64::NEG_INFINITY) {
            best = r;
        }
    }
    best.k
}

pub fn score(labels: &[Option<usize>], assignments: &[usize], k: usize) -> Recovery {
    let (truth, found): (Vec<usize>, Vec<usize>) =
        labels.iter().zip(assignments).filter_map(|(l, &a)| l.map(|l| (l, a))).unzip();
    let mut majority = std::collections::BTreeSet::new();
    for c in 0..k {
        let mut tally = std::collections::BTreeMap::new();
        for (&t, _) in truth.iter().zip(&found).filter(|(_, &f)| f == c) {
            *tally.entry(t).or_insert(0usize) += 1;
        }
        if let Some((&t, _)) = tally.iter().max_by_key(|&(t, n)| (*n, std::cmp::Reverse(*t))) {
            majority.insert(t);
        }
    }
    Recovery {
        labelled_components: truth.len(),
        ari: if truth.is_empty() { 0.0 } else { adjusted_rand_index(&truth, &found) },
        clusters_recovered: majority.len(),
    }
}
