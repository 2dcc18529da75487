use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cmg_core::aac::{build_all, sample_walk};
use cmg_core::build::{Builder, LayerNode};
use cmg_core::cluster::{kmeans, scan_k};
use cmg_core::components::extract_components;
use cmg_core::features::static_features;
use cmg_core::synth::{generate_scenario, GraphFamily, SyntheticScenario, Template};
use cmg_core::verify::verify_against_definition;
use cmg_core::{CausalActivityGraph, EdgeMask, IdMap, KMeansConfig, SpatialGraph};

use crate::bench::{run_bench, BenchConfig};
use crate::config::{NormalizationName, PipelineConfig};
use crate::error::{Error, Result};
use crate::formats::{self, TimeAxis};
use crate::pipeline::run_pipeline;

#[derive(Parser, Debug)]
#[command(name = "cmg", version, about = "Recurring spatio-temporal activity patterns on graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate inputs and write the id map and canonical edge list
    Ingest(IngestArgs),
    /// Normalise and threshold a signal into a bit-packed mask
    Mask(MaskArgs),
    /// Build the causal activity graph from a graph and a mask
    Build(BuildArgs),
    /// Extract dynamic activated components from an activity graph
    Components(ComponentsArgs),
    /// Static (and optionally dynamic) feature vectors of components
    Features(FeaturesArgs),
    /// k-means over static feature vectors
    Cluster(ClusterArgs),
    /// WCSS and silhouette over a range of k
    ScanK(ScanArgs),
    /// Average activation component per cluster
    Aac(AacArgs),
    /// Weighted random walk on an average component
    Walk(WalkArgs),
    /// Compare the builder with the materialised multilayer definition
    Verify(VerifyArgs),
    /// Generate a synthetic spreading scenario with ground truth
    Synth(SynthArgs),
    /// Time the builder across instance sizes
    Bench(BenchArgs),
    /// Run every stage from a configuration file
    Pipeline(PipelineArgs),
    /// Components of the Higgs Twitter retweet activity
    Higgs(HiggsArgs),
}

#[derive(Args, Debug)]
pub struct GraphInput {
    /// Edge list CSV with header `src,dst[,weight]`
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub directed: bool,
    /// Id map JSON fixing node indices
    #[arg(long)]
    pub ids: Option<PathBuf>,
}

impl GraphInput {
    fn load(&self) -> Result<SpatialGraph> {
        let ids = self.ids.as_deref().map(formats::read_ids).transpose()?;
        let fixed = ids.as_ref().map(IdMap::len);
        let g = formats::load_edge_list(&self.graph, self.directed, ids)?;
        if fixed.is_some_and(|n| n != g.num_nodes()) {
            return Err(Error::format(&self.graph, "edge list names nodes missing from the id map"));
        }
        Ok(g)
    }
}

#[derive(Args, Debug)]
pub struct IngestArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub directed: bool,
    /// Wide signal CSV `node,t0,t1,...`; nodes absent from the graph are appended
    #[arg(long)]
    pub signal: Option<PathBuf>,
    /// Edge events CSV `src,dst,t`, validated against the graph
    #[arg(long, requires = "steps")]
    pub events: Option<PathBuf>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct MaskArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub signal: PathBuf,
    #[arg(long, value_enum, default_value = "zscore-per-node")]
    pub normalization: NormArg,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum NormArg {
    None,
    ZscorePerNode,
    ZscoreGlobal,
}

impl From<NormArg> for NormalizationName {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::None => NormalizationName::None,
            NormArg::ZscorePerNode => NormalizationName::ZscorePerNode,
            NormArg::ZscoreGlobal => NormalizationName::ZscoreGlobal,
        }
    }
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub mask: PathBuf,
    /// Edge events for the dynamic-graph variant
    #[arg(long)]
    pub events: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ComponentsArgs {
    #[arg(long)]
    pub ids: PathBuf,
    /// Activity graph CSV from `cmg build`
    #[arg(long)]
    pub h: PathBuf,
    /// Mask the graph was built from; restores isolated pairs for singleton counts
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Unix time of layer 0, for timestamped summaries
    #[arg(long, requires = "step_secs")]
    pub time_origin: Option<i64>,
    #[arg(long)]
    pub step_secs: Option<i64>,
}

#[derive(Args, Debug)]
pub struct FeaturesArgs {
    #[arg(long)]
    pub ids: PathBuf,
    #[arg(long)]
    pub components: PathBuf,
    #[arg(long)]
    pub no_normalize: bool,
    /// Also write dynamic feature vectors here
    #[arg(long)]
    pub dynamic: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct KMeansArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value_t = 300)]
    pub max_iter: usize,
}

impl KMeansArgs {
    fn config(&self, k: usize) -> KMeansConfig {
        KMeansConfig::new(k, self.seed).restarts(self.restarts).max_iter(self.max_iter)
    }
}

#[derive(Args, Debug)]
pub struct ClusterArgs {
    #[arg(long)]
    pub ids: PathBuf,
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub kmeans: KMeansArgs,
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to `centroids.csv` next to the output
    #[arg(long)]
    pub centroids: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub ids: PathBuf,
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub k_min: usize,
    #[arg(long)]
    pub k_max: usize,
    #[command(flatten)]
    pub kmeans: KMeansArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct AacArgs {
    #[arg(long)]
    pub ids: PathBuf,
    #[arg(long)]
    pub components: PathBuf,
    #[arg(long)]
    pub cluster: PathBuf,
    #[arg(long, default_value_t = cmg_core::aac::DEFAULT_TAU)]
    pub tau: f64,
    /// Edge weights conditional on the source node instead of cluster support
    #[arg(long)]
    pub conditional: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct WalkArgs {
    #[arg(long)]
    pub ids: PathBuf,
    #[arg(long)]
    pub aac: PathBuf,
    /// Start node on relative layer 0; drawn by node weight when absent
    #[arg(long)]
    pub seed_node: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Exponent applied to edge weights
    #[arg(long, default_value_t = 1.0)]
    pub bias: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub mask: PathBuf,
    /// Keep intra-layer copies of the spatial edges on both sides
    #[arg(long)]
    pub include_intra: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    Grid,
    Er,
    Tree,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(long, value_enum, default_value = "grid")]
    pub family: Family,
    #[arg(long, default_value_t = 10)]
    pub rows: usize,
    #[arg(long, default_value_t = 20)]
    pub cols: usize,
    /// Node count for `er` and `tree`
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Edge probability for `er`
    #[arg(long, default_value_t = 0.02)]
    pub p: f64,
    #[arg(long, default_value_t = 3)]
    pub templates: usize,
    #[arg(long, default_value_t = 2)]
    pub radius: u32,
    #[arg(long, default_value_t = 8)]
    pub duration: u32,
    #[arg(long, default_value_t = 20)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 0.01)]
    pub noise: f64,
    #[arg(long, default_value_t = 300)]
    pub steps: usize,
    #[arg(long, default_value_t = 2)]
    pub gap: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',')]
    pub edges: Option<Vec<usize>>,
    #[arg(long, default_value_t = 256)]
    pub steps: usize,
    #[arg(long, value_delimiter = ',')]
    pub step_sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 100_000)]
    pub fixed_edges: usize,
    #[arg(long, value_delimiter = ',')]
    pub workers: Option<Vec<usize>>,
    #[arg(long, default_value_t = 3)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PipelineArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub checked: bool,
}

#[derive(Args, Debug)]
pub struct HiggsArgs {
    #[arg(long)]
    pub social: PathBuf,
    #[arg(long)]
    pub activity: PathBuf,
    /// Step length in seconds
    #[arg(long, default_value_t = 600)]
    pub step_secs: i64,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

fn default_workers(w: Option<usize>) -> usize {
    w.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1)
}

fn check_mask_rows(path: &Path, rows: usize, nodes: usize) -> Result<()> {
    if rows != nodes {
        return Err(Error::format(path, format!("mask has {rows} rows for {nodes} nodes")));
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            print!("{e}");
            Error::Config(String::new())
        }
        _ => Error::Config(e.to_string()),
    })?;
    execute(cli.command)
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Ingest(a) => ingest(a),
        Command::Mask(a) => {
            let g = a.input.load()?;
            let signal = formats::load_signal(&a.signal, g.ids())?;
            let norm: NormalizationName = a.normalization.into();
            if !a.mu.is_finite() {
                return Err(cmg_core::Error::NonFiniteThreshold(a.mu).into());
            }
            let mask = cmg_core::ActivationMask::from_signal(&signal, norm.into(), a.mu);
            formats::write_mask(&a.out, &mask)?;
            println!("{} of {} pairs active", mask.count_active(), mask.num_nodes() * mask.num_steps());
            Ok(())
        }
        Command::Build(a) => {
            let g = a.input.load()?;
            let mask = formats::read_mask(&a.mask)?;
            check_mask_rows(&a.mask, mask.num_nodes(), g.num_nodes())?;
            let em = match &a.events {
                Some(p) => Some(EdgeMask::from_events(&formats::load_edge_events(p, &g, mask.num_steps())?, &g)),
                None => None,
            };
            let mut b = Builder::new(&g, &mask).workers(default_workers(a.workers));
            if let Some(em) = &em {
                b = b.edge_mask(em);
            }
            let h = b.build()?;
            formats::write_activity_graph(&a.out, &h, g.ids())?;
            let s = h.stats();
            println!(
                "{} nodes ({} isolated), {} neighbour edges, {} self edges",
                s.nodes, s.isolated, s.neighbor_edges, s.self_edges
            );
            Ok(())
        }
        Command::Components(a) => {
            let ids = formats::read_ids(&a.ids)?;
            let edges = formats::read_activity_edges(&a.h, &ids)?;
            let h = match &a.mask {
                Some(p) => {
                    let mask = formats::read_mask(p)?;
                    check_mask_rows(p, mask.num_nodes(), ids.len())?;
                    let mut nodes = Vec::with_capacity(mask.count_active());
                    for t in 0..mask.num_steps() {
                        for i in 0..mask.num_nodes() {
                            if mask.get(i, t) {
                                nodes.push(LayerNode::new(i as u32, t as u32));
                            }
                        }
                    }
                    nodes.sort_unstable();
                    let h = CausalActivityGraph::from_parts(ids.len(), mask.num_steps(), nodes, edges)?;
                    h.check_invariants(None, Some(&mask))?;
                    h
                }
                None => {
                    let layers = edges.iter().map(|e| e.layer as usize + 2).max().unwrap_or(0);
                    CausalActivityGraph::from_parts(ids.len(), layers, [], edges)?
                }
            };
            let set = extract_components(&h);
            formats::write_components(&a.out, &set.components, &ids)?;
            if let Some(p) = &a.summary {
                let time = a.time_origin.zip(a.step_secs).map(|(origin, step_secs)| TimeAxis { origin, step_secs });
                formats::write_summary(p, &set.components, time)?;
            }
            println!("{} components, {} singletons", set.components.len(), set.singletons);
            Ok(())
        }
        Command::Features(a) => {
            let ids = formats::read_ids(&a.ids)?;
            let comps = formats::read_components(&a.components, &ids)?;
            let normalize = !a.no_normalize;
            let vectors: Vec<_> = comps.iter().map(|c| static_features(c, ids.len(), normalize)).collect();
            formats::write_features(&a.out, &vectors, normalize, &ids)?;
            if let Some(p) = &a.dynamic {
                formats::write_dynamic_features(p, &comps, &ids)?;
            }
            Ok(())
        }
        Command::Cluster(a) => {
            let ids = formats::read_ids(&a.ids)?;
            let vectors = formats::read_features(&a.features, &ids)?;
            let model = kmeans(&vectors, &a.kmeans.config(a.k))?;
            let centroids = a.centroids.clone().unwrap_or_else(|| a.out.with_file_name("centroids.csv"));
            let name = centroids.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
            formats::write_cluster(&a.out, &model, &name)?;
            formats::write_centroids(&centroids, &model, &ids)?;
            println!("k = {}, wcss = {}, {} iterations", model.k, model.wcss, model.iterations);
            Ok(())
        }
        Command::ScanK(a) => {
            let ids = formats::read_ids(&a.ids)?;
            let vectors = formats::read_features(&a.features, &ids)?;
            let rows = scan_k(&vectors, a.k_min..=a.k_max, &a.kmeans.config(0))?;
            formats::write_scan(&a.out, &rows)?;
            for r in &rows {
                match r.silhouette {
                    Some(s) => println!("k = {}: wcss {}, silhouette {s}", r.k, r.wcss),
                    None => println!("k = {}: wcss {}, silhouette undefined", r.k, r.wcss),
                }
            }
            Ok(())
        }
        Command::Aac(a) => {
            let ids = formats::read_ids(&a.ids)?;
            let comps = formats::read_components(&a.components, &ids)?;
            let (k, assignments) = formats::read_assignments(&a.cluster)?;
            if assignments.len() != comps.len() {
                return Err(Error::format(&a.cluster, format!("{} assignments for {} components", assignments.len(), comps.len())));
            }
            let norm = if a.conditional { cmg_core::EdgeNormalization::Conditional } else { cmg_core::EdgeNormalization::Support };
            for aac in build_all(&comps, &assignments, k, norm)? {
                let aac = aac.sparsify(a.tau)?;
                let c = aac.cluster_id;
                formats::write_aac(&a.out.join(format!("aac_{c}.json")), &aac, &ids)?;
                formats::write_layer_profile(&a.out.join(format!("aac_{c}_layers.csv")), &aac.layer_profile())?;
            }
            Ok(())
        }
        Command::Walk(a) => {
            let ids = formats::read_ids(&a.ids)?;
            let aac = formats::read_aac(&a.aac, &ids)?;
            let seed = a
                .seed_node
                .as_deref()
                .map(|s| ids.get(s).ok_or_else(|| Error::Config(format!("unknown seed node {s:?}"))))
                .transpose()?;
            let walk = sample_walk(&aac, seed, a.rng_seed, a.bias)?;
            formats::write_walk(&a.out, &walk, &ids)
        }
        Command::Verify(a) => {
            let g = a.input.load()?;
            let mask = formats::read_mask(&a.mask)?;
            check_mask_rows(&a.mask, mask.num_nodes(), g.num_nodes())?;
            let report = verify_against_definition(&g, &mask, a.include_intra)?;
            formats::write_report(&a.out, &report, g.ids())?;
            if report.pass {
                println!("pass: {} edges", report.builder_edges);
                Ok(())
            } else {
                Err(Error::Runtime(format!("builder and definition disagree: {:?}", report.first_mismatch)))
            }
        }
        Command::Synth(a) => synth(a),
        Command::Bench(a) => {
            let defaults = BenchConfig::default();
            let cfg = BenchConfig {
                edge_sizes: a.edges.unwrap_or(defaults.edge_sizes),
                fixed_steps: a.steps,
                step_sizes: a.step_sizes.unwrap_or(defaults.step_sizes),
                fixed_edges: a.fixed_edges,
                workers: a.workers.unwrap_or(defaults.workers),
                repetitions: a.repetitions,
                seed: a.seed,
            };
            let report = run_bench(&cfg)?;
            for r in report.by_edges.iter().chain(&report.by_steps) {
                println!("edges {:>9} steps {:>5}: {:>10.2} ms", r.edges, r.steps, r.ms);
            }
            println!("exponent in |E|: {:?}, in T: {:?}", report.edge_exponent, report.step_exponent);
            for s in &report.speedup {
                println!("workers {:>2}: {:>10.2} ms, speedup {:.2}", s.workers, s.ms, s.speedup);
            }
            if let Some(p) = &a.out {
                formats::write_json(p, &report)?;
            }
            Ok(())
        }
        Command::Pipeline(a) => {
            let mut cfg = PipelineConfig::load(&a.config)?;
            if let Some(o) = a.output {
                cfg.output = o;
            }
            cfg.mu = a.mu.unwrap_or(cfg.mu);
            cfg.k = a.k.or(cfg.k);
            cfg.seed = a.seed.unwrap_or(cfg.seed);
            cfg.tau = a.tau.unwrap_or(cfg.tau);
            cfg.workers = a.workers.or(cfg.workers);
            cfg.checked |= a.checked;
            let m = run_pipeline(&cfg)?;
            println!(
                "{} components, {} singletons, k = {}, written to {}",
                m.counts.components,
                m.counts.singletons,
                m.counts.k.map_or("none".to_string(), |k| k.to_string()),
                cfg.output.display()
            );
            if let Some(r) = &m.recovery {
                println!("recovery: ARI {} over {} labelled components", r.ari, r.labelled_components);
            }
            Ok(())
        }
        Command::Higgs(a) => {
            let d = crate::higgs::load_higgs(&a.social, &a.activity, a.step_secs)?;
            let h = Builder::new(&d.graph, &d.mask).workers(default_workers(a.workers)).build()?;
            let set = extract_components(&h);
            formats::write_components(&a.out.join("components.json"), &set.components, d.graph.ids())?;
            formats::write_summary(&a.out.join("summary.csv"), &set.components, Some(d.time))?;
            println!(
                "{} users, {} follower edges, {} retweets over {} steps",
                d.graph.num_nodes(),
                d.graph.num_edges(),
                d.retweets,
                d.mask.num_steps()
            );
            for c in set.components.iter().take(10) {
                println!(
                    "{:>7} {:>5} {:>7}  {}  {}",
                    c.members.len(),
                    c.width,
                    c.spatial_spread,
                    d.time.format(c.start_layer),
                    d.time.format(c.end_layer)
                );
            }
            Ok(())
        }
    }
}

fn ingest(a: IngestArgs) -> Result<()> {
    let (graph, rows) = match &a.signal {
        Some(s) => {
            let (g, rows, extra) = crate::pipeline::ingest(&a.graph, s, a.directed)?;
            if !extra.is_empty() {
                log::warn!("{} signal nodes have no edges", extra.len());
            }
            (g, Some(rows))
        }
        None => (formats::load_edge_list(&a.graph, a.directed, None)?, None),
    };
    formats::write_ids(&a.out.join("id_map.json"), graph.ids())?;
    formats::write_edge_list(&a.out.join("graph.csv"), &graph)?;
    if let (Some(rows), Some(path)) = (rows, &a.signal) {
        let signal = formats::align_signal(path, rows, graph.ids())?;
        formats::write_signal(&a.out.join("signal.csv"), &signal, graph.ids())?;
    }
    if let (Some(p), Some(steps)) = (&a.events, a.steps) {
        let events = formats::load_edge_events(p, &graph, steps)?;
        formats::write_edge_events(&a.out.join("events.csv"), &graph, &events)?;
    }
    println!("{} nodes, {} edges", graph.num_nodes(), graph.num_edges());
    Ok(())
}

fn synth(a: SynthArgs) -> Result<()> {
    let family = match a.family {
        Family::Grid => GraphFamily::Grid { rows: a.rows, cols: a.cols },
        Family::Er => GraphFamily::ErdosRenyi { n: a.n, p: a.p },
        Family::Tree => GraphFamily::RandomTree { n: a.n },
    };
    let t = Template { seed_node: None, max_radius: a.radius, duration: a.duration };
    let scenario = SyntheticScenario::new(family, vec![t; a.templates], a.steps, a.seed)
        .repetitions(a.repetitions)
        .noise_rate(a.noise)
        .min_gap(a.gap);
    let s = generate_scenario(&scenario)?;
    let ids = s.graph.ids();
    formats::write_edge_list(&a.out.join("graph.csv"), &s.graph)?;
    formats::write_signal(&a.out.join("signal.csv"), &s.signal, ids)?;
    formats::write_truth(&a.out.join("truth.json"), &s.seeds, &s.instances, ids)?;
    let mut cfg = PipelineConfig::new("graph.csv", "signal.csv", "out", 0.5);
    cfg.truth = Some("truth.json".into());
    cfg.normalization = NormalizationName::None;
    cfg.k = Some(a.templates.max(1));
    cfg.seed = a.seed;
    let text = toml::to_string(&cfg).map_err(|e| Error::Config(e.to_string()))?;
    let path = a.out.join("pipeline.toml");
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    println!("{} planted instances on {} nodes over {} steps", s.instances.len(), s.graph.num_nodes(), a.steps);
    Ok(())
}
