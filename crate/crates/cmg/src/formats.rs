//! Readers and writers for every artifact the pipeline exchanges.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use cmg_core::aac::LayerProfile;
use cmg_core::bits::BitMatrix;
use cmg_core::build::{CausalActivityGraph, CausalEdge, EdgeKind, LayerNode};
use cmg_core::cluster::{ClusterModel, ScanRow};
use cmg_core::graph::GraphBuilder;
use cmg_core::synth::PlantedInstance;
use cmg_core::verify::VerifyReport;
use cmg_core::{
    ActivationMask, AverageComponent, DynamicComponent, EdgeEvents, EdgeNormalization, IdMap, SignalMatrix,
    SpatialGraph, StaticFeatureVector,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MASK_MAGIC: &[u8; 4] = b"CMGM";
pub const MASK_VERSION: u32 = 1;

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

fn csv_reader(path: &Path) -> Result<csv::Reader<BufReader<File>>> {
    Ok(csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(open(path)?))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::Writer::from_writer(create(path)?))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        kind => Error::Parse { path: path.to_path_buf(), line, msg: format!("{kind:?}") },
    }
}

fn parse_err(path: &Path, line: u64, msg: impl Into<String>) -> Error {
    Error::Parse { path: path.to_path_buf(), line, msg: msg.into() }
}

fn check_header(path: &Path, rdr: &mut csv::Reader<BufReader<File>>, allowed: &[&[&str]]) -> Result<usize> {
    let header = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    let got: Vec<&str> = header.iter().collect();
    allowed
        .iter()
        .position(|h| *h == &got[..])
        .ok_or_else(|| parse_err(path, 1, format!("expected header {}, found {}", allowed[0].join(","), got.join(","))))
}

fn field<T: std::str::FromStr>(path: &Path, line: u64, rec: &csv::StringRecord, i: usize, what: &str) -> Result<T> {
    rec[i].parse().map_err(|_| parse_err(path, line, format!("invalid {what} {:?}", &rec[i])))
}

fn flush<W: Write>(path: &Path, mut w: W) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn flush_csv<W: Write>(path: &Path, mut w: csv::Writer<W>) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::format(path, e.to_string()))?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    flush(path, w)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_reader(open(path)?).map_err(|e| {
        if e.is_io() {
            Error::io(path, e.into())
        } else {
            parse_err(path, e.line() as u64, e.to_string())
        }
    })
}

fn lookup(path: &Path, ids: &IdMap, id: &str) -> Result<u32> {
    ids.get(id).ok_or_else(|| Error::format(path, format!("unknown node id {id:?}")))
}

// ---- id map ----

pub fn write_ids(path: &Path, ids: &IdMap) -> Result<()> {
    write_json(path, ids.ids())
}

pub fn read_ids(path: &Path) -> Result<IdMap> {
    let ids: Vec<String> = read_json(path)?;
    let map = IdMap::from_ids(ids.iter().map(String::as_str));
    if map.len() != ids.len() {
        return Err(Error::format(path, "duplicate node ids"));
    }
    Ok(map)
}

// ---- edge lists ----

/// Loads a `src,dst[,weight]` edge list. With `ids`, nodes keep their
/// indices from the map and unseen ids are appended.
pub fn load_edge_list(path: &Path, directed: bool, ids: Option<IdMap>) -> Result<SpatialGraph> {
    let mut rdr = csv_reader(path)?;
    let weighted = check_header(path, &mut rdr, &[&["src", "dst"], &["src", "dst", "weight"]])? == 1;
    let mut b = match ids {
        Some(ids) => GraphBuilder::with_ids(ids, directed),
        None => GraphBuilder::new(directed),
    };
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let w = if weighted { field(path, line, &rec, 2, "weight")? } else { 1.0 };
        b.add_edge(&rec[0], &rec[1], w).map_err(|e| parse_err(path, line, e.to_string()))?;
    }
    Ok(b.build())
}

pub fn write_edge_list(path: &Path, graph: &SpatialGraph) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = |e| csv_err(path, e);
    w.write_record(["src", "dst", "weight"]).map_err(err)?;
    let ids = graph.ids();
    for e in graph.edges() {
        w.write_record([ids.name(e.src), ids.name(e.dst), &e.weight.to_string()]).map_err(err)?;
    }
    flush_csv(path, w)
}

pub fn load_edge_events(path: &Path, graph: &SpatialGraph, num_steps: usize) -> Result<EdgeEvents> {
    let mut rdr = csv_reader(path)?;
    check_header(path, &mut rdr, &[&["src", "dst", "t"]])?;
    let mut events = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let node = |i: usize| {
            graph.ids().get(&rec[i]).ok_or_else(|| parse_err(path, line, format!("unknown node {:?}", &rec[i])))
        };
        let (s, d) = (node(0)?, node(1)?);
        let t: u32 = field(path, line, &rec, 2, "step")?;
        let ev = (s as usize, d as usize, t as usize);
        EdgeEvents::new(graph, num_steps, [ev]).map_err(|e| parse_err(path, line, e.to_string()))?;
        events.push(ev);
    }
    Ok(EdgeEvents::new(graph, num_steps, events)?)
}

pub fn write_edge_events(path: &Path, graph: &SpatialGraph, events: &EdgeEvents) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = |e| csv_err(path, e);
    w.write_record(["src", "dst", "t"]).map_err(err)?;
    let ids = graph.ids();
    for &(s, d, t) in events.events() {
        w.write_record([ids.name(s), ids.name(d), &t.to_string()]).map_err(err)?;
    }
    flush_csv(path, w)
}

// ---- signals ----

/// Rows of a wide `node,t0,t1,...` signal file in file order.
pub struct SignalRows {
    pub nodes: Vec<String>,
    pub steps: usize,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_signal_rows(path: &Path) -> Result<SignalRows> {
    let mut rdr = csv_reader(path)?;
    let header = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    if header.get(0) != Some("node") {
        return Err(parse_err(path, 1, "signal header must start with `node`"));
    }
    let steps = header.len() - 1;
    let mut out = SignalRows { nodes: Vec::new(), steps, rows: Vec::new() };
    let mut seen = std::collections::HashSet::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        if !seen.insert(rec[0].to_string()) {
            return Err(parse_err(path, line, format!("duplicate node {:?}", &rec[0])));
        }
        let mut row = Vec::with_capacity(steps);
        for t in 1..=steps {
            let v: f64 = field(path, line, &rec, t, "value")?;
            if !v.is_finite() {
                return Err(parse_err(path, line, format!("non-finite value at step {}", t - 1)));
            }
            row.push(v);
        }
        out.nodes.push(rec[0].to_string());
        out.rows.push(row);
    }
    Ok(out)
}

/// Orders signal rows by `ids`; every id needs a row and vice versa.
pub fn align_signal(path: &Path, rows: SignalRows, ids: &IdMap) -> Result<SignalMatrix> {
    let mut slots: Vec<Option<Vec<f64>>> = vec![None; ids.len()];
    for (node, row) in rows.nodes.iter().zip(rows.rows) {
        let i = lookup(path, ids, node)? as usize;
        slots[i] = Some(row);
    }
    let mut values = Vec::with_capacity(ids.len() * rows.steps);
    for (i, slot) in slots.into_iter().enumerate() {
        let row = slot.ok_or_else(|| Error::format(path, format!("no signal row for node {:?}", ids.name(i as u32))))?;
        values.extend(row);
    }
    Ok(SignalMatrix::new(ids.len(), rows.steps, values)?)
}

pub fn load_signal(path: &Path, ids: &IdMap) -> Result<SignalMatrix> {
    align_signal(path, read_signal_rows(path)?, ids)
}

pub fn write_signal(path: &Path, signal: &SignalMatrix, ids: &IdMap) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = |e| csv_err(path, e);
    let mut header = vec!["node".to_string()];
    header.extend((0..signal.num_steps()).map(|t| format!("t{t}")));
    w.write_record(&header).map_err(err)?;
    for i in 0..signal.num_nodes() {
        let mut rec = vec![ids.name(i as u32).to_string()];
        rec.extend(signal.row(i).iter().map(f64::to_string));
        w.write_record(&rec).map_err(err)?;
    }
    flush_csv(path, w)
}

// ---- masks ----

pub fn write_bits(path: &Path, bits: &BitMatrix) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    w.write_all(MASK_MAGIC).map_err(io)?;
    w.write_all(&MASK_VERSION.to_le_bytes()).map_err(io)?;
    w.write_all(&(bits.rows() as u64).to_le_bytes()).map_err(io)?;
    w.write_all(&(bits.cols() as u64).to_le_bytes()).map_err(io)?;
    for word in bits.words() {
        w.write_all(&word.to_le_bytes()).map_err(io)?;
    }
    flush(path, w)
}

pub fn read_bits(path: &Path) -> Result<BitMatrix> {
    let mut buf = Vec::new();
    open(path)?.read_to_end(&mut buf).map_err(|e| Error::io(path, e))?;
    if buf.len() < 24 || &buf[..4] != MASK_MAGIC {
        return Err(Error::format(path, "not a mask file"));
    }
    let version = u32::from_le_bytes(buf[4..8].try_into().expect("4 bytes"));
    if version != MASK_VERSION {
        return Err(Error::format(path, format!("unsupported mask version {version}")));
    }
    let rows = u64::from_le_bytes(buf[8..16].try_into().expect("8 bytes")) as usize;
    let cols = u64::from_le_bytes(buf[16..24].try_into().expect("8 bytes")) as usize;
    let body = &buf[24..];
    let stride = cols.div_ceil(64);
    if rows.checked_mul(stride).and_then(|w| w.checked_mul(8)) != Some(body.len()) {
        return Err(Error::format(path, format!("{} payload bytes for a {rows}x{cols} mask", body.len())));
    }
    let words = body.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    BitMatrix::from_words(rows, cols, words).map_err(|e| Error::format(path, e.to_string()))
}

pub fn write_mask(path: &Path, mask: &ActivationMask) -> Result<()> {
    write_bits(path, mask.bits())
}

pub fn read_mask(path: &Path) -> Result<ActivationMask> {
    Ok(ActivationMask::from_bits(read_bits(path)?))
}

// ---- activity graph ----

pub fn write_activity_graph(path: &Path, h: &CausalActivityGraph, ids: &IdMap) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = |e| csv_err(path, e);
    w.write_record(["src_node", "src_layer", "dst_node", "dst_layer", "kind"]).map_err(err)?;
    for e in h.edges() {
        let kind = match e.kind() {
            EdgeKind::Neighbor => "neighbor",
            EdgeKind::SelfEdge => "self",
        };
        let (sl, dl) = (e.layer.to_string(), (e.layer + 1).to_string());
        w.write_record([ids.name(e.src), &sl, ids.name(e.dst), &dl, kind]).map_err(err)?;
    }
    flush_csv(path, w)
}

pub fn read_activity_edges(path: &Path, ids: &IdMap) -> Result<Vec<CausalEdge>> {
    let mut rdr = csv_reader(path)?;
    check_header(path, &mut rdr, &[&["src_node", "src_layer", "dst_node", "dst_layer", "kind"]])?;
    let mut edges = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let node = |i: usize| ids.get(&rec[i]).ok_or_else(|| parse_err(path, line, format!("unknown node {:?}", &rec[i])));
        let (src, dst) = (node(0)?, node(2)?);
        let sl: u32 = field(path, line, &rec, 1, "layer")?;
        let dl: u32 = field(path, line, &rec, 3, "layer")?;
        if dl != sl + 1 {
            return Err(parse_err(path, line, "causal edges join consecutive layers"));
        }
        let e = CausalEdge::new(src, dst, sl);
        let kind = match e.kind() {
            EdgeKind::Neighbor => "neighbor",
            EdgeKind::SelfEdge => "self",
        };
        if &rec[4] != kind {
            return Err(parse_err(path, line, format!("kind {:?} does not match endpoints", &rec[4])));
        }
        edges.push(e);
    }
    Ok(edges)
}

// ---- components ----

#[derive(Serialize, Deserialize)]
struct ComponentRecord {
    id: usize,
    root: (String, u32),
    members: Vec<(String, u32)>,
    edges: Vec<(String, String, u32)>,
    num_members: usize,
    width: usize,
    spatial_spread: usize,
    start_layer: u32,
    end_layer: u32,
}

fn named(ids: &IdMap, v: LayerNode) -> (String, u32) {
    (ids.name(v.node).to_string(), v.layer)
}

pub fn write_components(path: &Path, components: &[DynamicComponent], ids: &IdMap) -> Result<()> {
    let records: Vec<ComponentRecord> = components
        .iter()
        .enumerate()
        .map(|(id, c)| ComponentRecord {
            id,
            root: named(ids, c.id),
            members: c.members.iter().map(|&v| named(ids, v)).collect(),
            edges: c.edges.iter().map(|e| (ids.name(e.src).into(), ids.name(e.dst).into(), e.layer)).collect(),
            num_members: c.members.len(),
            width: c.width,
            spatial_spread: c.spatial_spread,
            start_layer: c.start_layer,
            end_layer: c.end_layer,
        })
        .collect();
    write_json(path, &records)
}

pub fn read_components(path: &Path, ids: &IdMap) -> Result<Vec<DynamicComponent>> {
    let records: Vec<ComponentRecord> = read_json(path)?;
    let mut out = Vec::with_capacity(records.len());
    for (pos, r) in records.into_iter().enumerate() {
        if r.id != pos {
            return Err(Error::format(path, format!("component {pos} has id {}", r.id)));
        }
        let members = r
            .members
            .iter()
            .map(|(n, l)| Ok(LayerNode::new(lookup(path, ids, n)?, *l)))
            .collect::<Result<Vec<_>>>()?;
        let edges = r
            .edges
            .iter()
            .map(|(s, d, l)| Ok(CausalEdge::new(lookup(path, ids, s)?, lookup(path, ids, d)?, *l)))
            .collect::<Result<Vec<_>>>()?;
        let c = DynamicComponent::from_parts(members, edges)?;
        let stats = (c.members.len(), c.width, c.spatial_spread, c.start_layer, c.end_layer);
        if stats != (r.num_members, r.width, r.spatial_spread, r.start_layer, r.end_layer) || named(ids, c.id) != r.root {
            return Err(Error::format(path, format!("component {pos} statistics do not match its members")));
        }
        c.check_invariants()?;
        out.push(c);
    }
    Ok(out)
}

/// Start of each layer as seconds since the epoch, for timestamped summaries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeAxis {
    pub origin: i64,
    pub step_secs: i64,
}

impl TimeAxis {
    pub fn format(&self, layer: u32) -> String {
        let secs = self.origin + layer as i64 * self.step_secs;
        chrono::DateTime::from_timestamp(secs, 0).map_or_else(|| secs.to_string(), |t| t.format("%d, %H:%M").to_string())
    }
}

pub fn write_summary(path: &Path, components: &[DynamicComponent], time: Option<TimeAxis>) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = |e| csv_err(path, e);
    w.write_record(["num_nodes", "num_layers", "spatial_spread", "start", "end"]).map_err(err)?;
    for row in cmg_core::components::component_summary(components) {
        let (start, end) = match time {
            Some(t) => (t.format(row.start_layer), t.format(row.end_layer)),
            None => (row.start_layer.to_string(), row.end_layer.to_string()),
        };
        w.write_record([row.num_members.to_string(), row.width.to_string(), row.spatial_spread.to_string(), start, end])
            .map_err(err)?;
    }
    flush_csv(path, w)
}

// ---- features ----

#[derive(Serialize, Deserialize)]
struct FeatureFile {
    normalized: bool,
    num_nodes: usize,
    vectors: Vec<FeatureRecord>,
}

#[derive(Serialize, Deserialize)]
struct FeatureRecord {
    component: usize,
    entries: Vec<(String, f64)>,
}

pub fn write_features(path: &Path, vectors: &[StaticFeatureVector], normalized: bool, ids: &IdMap) -> Result<()> {
    let file = FeatureFile {
        normalized,
        num_nodes: ids.len(),
        vectors: vectors
            .iter()
            .enumerate()
            .map(|(component, v)| FeatureRecord {
                component,
                entries: v.entries().iter().map(|&(i, x)| (ids.name(i).to_string(), x)).collect(),
            })
            .collect(),
    };
    write_json(path, &file)
}

pub fn read_features(path: &Path, ids: &IdMap) -> Result<Vec<StaticFeatureVector>> {
    let file: FeatureFile = read_json(path)?;
    if file.num_nodes != ids.len() {
        return Err(Error::format(path, format!("{} nodes but the id map has {}", file.num_nodes, ids.len())));
    }
    file.vectors
        .into_iter()
        .enumerate()
        .map(|(pos, r)| {
            if r.component != pos {
                return Err(Error::format(path, format!("vector {pos} belongs to component {}", r.component)));
            }
            let entries = r
                .entries
                .iter()
                .map(|(n, x)| Ok((lookup(path, ids, n)?, *x)))
                .collect::<Result<Vec<_>>>()?;
            if file.normalized {
                StaticFeatureVector::from_unit_entries(ids.len(), entries)
                    .ok_or_else(|| Error::format(path, format!("vector {pos} is marked normalized but lacks unit norm")))
            } else {
                Ok(StaticFeatureVector::from_entries(ids.len(), entries))
            }
        })
        .collect()
}

#[derive(Serialize)]
struct DynamicRecord {
    component: usize,
    nodes: Vec<String>,
    start_layer: u32,
    width: usize,
    bits: String,
}

pub fn write_dynamic_features(path: &Path, components: &[DynamicComponent], ids: &IdMap) -> Result<()> {
    let records: Vec<DynamicRecord> = components
        .iter()
        .enumerate()
        .map(|(component, c)| {
            let v = cmg_core::features::dynamic_features(c);
            DynamicRecord {
                component,
                nodes: v.nodes.iter().map(|&n| ids.name(n).to_string()).collect(),
                start_layer: v.start_layer,
                width: v.width,
                bits: v.to_bools().iter().map(|&b| if b { '1' } else { '0' }).collect(),
            }
        })
        .collect();
    write_json(path, &records)
}

// ---- clustering ----

fn ordered_map<S: Serializer>(pairs: &[usize], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(pairs.iter().enumerate().map(|(i, c)| (i.to_string(), c)))
}

#[derive(Serialize)]
struct ClusterRecord<'a> {
    k: usize,
    seed: u64,
    iterations: usize,
    converged: bool,
    wcss: f64,
    cluster_sizes: Vec<usize>,
    centroids: &'a str,
    #[serde(serialize_with = "ordered_map")]
    assignments: &'a [usize],
}

#[derive(Deserialize)]
struct ClusterInput {
    k: usize,
    assignments: std::collections::BTreeMap<String, usize>,
}

pub fn write_cluster(path: &Path, model: &ClusterModel, centroids_file: &str) -> Result<()> {
    let record = ClusterRecord {
        k: model.k,
        seed: model.seed,
        iterations: model.iterations,
        converged: model.converged,
        wcss: model.wcss,
        cluster_sizes: model.cluster_sizes(),
        centroids: centroids_file,
        assignments: &model.assignments,
    };
    write_json(path, &record)
}

/// `(k, assignment per component id)`.
pub fn read_assignments(path: &Path) -> Result<(usize, Vec<usize>)> {
    let input: ClusterInput = read_json(path)?;
    let mut out = vec![usize::MAX; input.assignments.len()];
    for (key, c) in input.assignments {
        let i: usize = key.parse().map_err(|_| Error::format(path, format!("bad component id {key:?}")))?;
        if i >= out.len() || c >= input.k {
            return Err(Error::format(path, format!("assignment {key} -> {c} out of range")));
        }
        out[i] = c;
    }
    Ok((input.k, out))
}

pub fn write_centroids(path: &Path, model: &ClusterModel, ids: &IdMap) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = |e| csv_err(path, e);
    let mut header = vec!["cluster"];
    header.extend(ids.ids().iter().map(String::as_str));
    w.write_record(&header).map_err(err)?;
    for (c, centroid) in model.centroids.iter().enumerate() {
        let mut rec = vec![c.to_string()];
        rec.extend(centroid.iter().map(f64::to_string));
        w.write_record(&rec).map_err(err)?;
    }
    flush_csv(path, w)
}

pub fn write_scan(path: &Path, rows: &[ScanRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = |e| csv_err(path, e);
    w.write_record(["k", "wcss", "silhouette"]).map_err(err)?;
    for r in rows {
        let s = r.silhouette.map_or_else(String::new, |s| s.to_string());
        w.write_record([r.k.to_string(), r.wcss.to_string(), s]).map_err(err)?;
    }
    flush_csv(path, w)
}

// ---- average components ----

#[derive(Serialize, Deserialize)]
struct AacRecord {
    cluster_id: usize,
    support: usize,
    width: usize,
    tau: f64,
    edge_normalization: String,
    nodes: Vec<AacNode>,
    edges: Vec<AacEdge>,
}

#[derive(Serialize, Deserialize)]
struct AacNode {
    node: String,
    layer: u32,
    weight: f64,
    count: u32,
}

#[derive(Serialize, Deserialize)]
struct AacEdge {
    src: String,
    src_layer: u32,
    dst: String,
    weight: f64,
    count: u32,
}

pub fn edge_normalization_name(n: EdgeNormalization) -> &'static str {
    match n {
        EdgeNormalization::Support => "support",
        EdgeNormalization::Conditional => "conditional",
    }
}

pub fn write_aac(path: &Path, aac: &AverageComponent, ids: &IdMap) -> Result<()> {
    let record = AacRecord {
        cluster_id: aac.cluster_id,
        support: aac.support,
        width: aac.width,
        tau: aac.tau,
        edge_normalization: edge_normalization_name(aac.edge_normalization).into(),
        nodes: aac
            .nodes()
            .map(|(n, weight)| AacNode {
                node: ids.name(n.node).into(),
                layer: n.layer,
                weight,
                count: aac.node_count(n).expect("node present"),
            })
            .collect(),
        edges: aac
            .edges()
            .map(|(e, weight)| AacEdge {
                src: ids.name(e.src).into(),
                src_layer: e.layer,
                dst: ids.name(e.dst).into(),
                weight,
                count: aac.edge_count(e).expect("edge present"),
            })
            .collect(),
    };
    write_json(path, &record)
}

pub fn read_aac(path: &Path, ids: &IdMap) -> Result<AverageComponent> {
    let r: AacRecord = read_json(path)?;
    let norm = match r.edge_normalization.as_str() {
        "support" => EdgeNormalization::Support,
        "conditional" => EdgeNormalization::Conditional,
        other => return Err(Error::format(path, format!("unknown edge normalization {other:?}"))),
    };
    let nodes = r
        .nodes
        .iter()
        .map(|n| Ok((LayerNode::new(lookup(path, ids, &n.node)?, n.layer), n.count)))
        .collect::<Result<Vec<_>>>()?;
    let edges = r
        .edges
        .iter()
        .map(|e| Ok((CausalEdge::new(lookup(path, ids, &e.src)?, lookup(path, ids, &e.dst)?, e.src_layer), e.count)))
        .collect::<Result<Vec<_>>>()?;
    let aac = AverageComponent::from_counts(r.cluster_id, r.width, r.support, r.tau, norm, nodes, edges)
        .map_err(|e| Error::format(path, e.to_string()))?;
    let weights_match = aac.nodes().zip(&r.nodes).all(|((_, w), n)| w == n.weight)
        && aac.edges().zip(&r.edges).all(|((_, w), e)| w == e.weight);
    if !weights_match {
        return Err(Error::format(path, "stored weights disagree with counts"));
    }
    Ok(aac)
}

pub fn write_layer_profile(path: &Path, rows: &[LayerProfile]) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = |e| csv_err(path, e);
    w.write_record(["layer", "nodes", "node_weight", "edges", "edge_weight"]).map_err(err)?;
    for r in rows {
        w.write_record([
            r.layer.to_string(),
            r.nodes.to_string(),
            r.node_weight.to_string(),
            r.edges.to_string(),
            r.edge_weight.to_string(),
        ])
        .map_err(err)?;
    }
    flush_csv(path, w)
}

pub fn write_walk(path: &Path, walk: &[LayerNode], ids: &IdMap) -> Result<()> {
    let names: Vec<&str> = walk.iter().map(|v| ids.name(v.node)).collect();
    write_json(path, &names)
}

// ---- verifier ----

#[derive(Serialize)]
struct ReportRecord {
    pass: bool,
    builder_edges: usize,
    definition_edges: usize,
    first_mismatch: Option<MismatchRecord>,
}

#[derive(Serialize)]
struct MismatchRecord {
    src: (String, u32),
    dst: (String, u32),
    in_builder: bool,
    in_definition: bool,
}

pub fn write_report(path: &Path, report: &VerifyReport, ids: &IdMap) -> Result<()> {
    let record = ReportRecord {
        pass: report.pass,
        builder_edges: report.builder_edges,
        definition_edges: report.definition_edges,
        first_mismatch: report.first_mismatch.as_ref().map(|m| MismatchRecord {
            src: named(ids, m.src),
            dst: named(ids, m.dst),
            in_builder: m.in_builder,
            in_definition: m.in_definition,
        }),
    };
    write_json(path, &record)
}

// ---- synthetic ground truth ----

#[derive(Serialize, Deserialize)]
struct TruthFile {
    seeds: Vec<String>,
    instances: Vec<TruthInstance>,
}

#[derive(Serialize, Deserialize)]
struct TruthInstance {
    template: usize,
    start: u32,
    members: Vec<(String, u32)>,
}

pub fn write_truth(path: &Path, seeds: &[u32], instances: &[PlantedInstance], ids: &IdMap) -> Result<()> {
    let file = TruthFile {
        seeds: seeds.iter().map(|&s| ids.name(s).to_string()).collect(),
        instances: instances
            .iter()
            .map(|inst| TruthInstance {
                template: inst.template,
                start: inst.start,
                members: inst.members.iter().map(|&v| named(ids, v)).collect(),
            })
            .collect(),
    };
    write_json(path, &file)
}

pub fn read_truth(path: &Path, ids: &IdMap) -> Result<Vec<PlantedInstance>> {
    let file: TruthFile = read_json(path)?;
    file.instances
        .into_iter()
        .map(|inst| {
            let mut members = inst
                .members
                .iter()
                .map(|(n, l)| Ok(LayerNode::new(lookup(path, ids, n)?, *l)))
                .collect::<Result<Vec<_>>>()?;
            members.sort_unstable();
            Ok(PlantedInstance { template: inst.template, start: inst.start, members })
        })
        .collect()
}
