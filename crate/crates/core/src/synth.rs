//! Seeded generator of spreading processes with known ground truth.
//!
//! Each template is a ball around a seed node that grows by one hop per step
//! up to `max_radius` and then persists until `duration` steps have elapsed.
//! A node active at step `s + 1` is either active at step `s` or adjacent to
//! such a node, so a planted instance is one weakly connected component of
//! the activity graph when no noise is applied.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::activation::SignalMatrix;
use crate::build::LayerNode;
use crate::components::ComponentSet;
use crate::error::{Error, Result};
use crate::graph::SpatialGraph;

/// Random family for the base graph.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphFamily {
    ErdosRenyi { n: usize, p: f64 },
    Grid { rows: usize, cols: usize },
    RandomTree { n: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Template {
    /// `None` picks seeds far apart from each other in the largest component.
    pub seed_node: Option<u32>,
    pub max_radius: u32,
    pub duration: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticScenario {
    pub graph: GraphFamily,
    pub templates: Vec<Template>,
    pub repetitions: usize,
    /// Probability of toggling each `(node, t)` bit.
    pub noise_rate: f64,
    pub num_steps: usize,
    /// Empty steps enforced between consecutive instances on the same nodes.
    pub min_gap: usize,
    pub seed: u64,
}

impl SyntheticScenario {
    pub fn new(graph: GraphFamily, templates: Vec<Template>, num_steps: usize, seed: u64) -> Self {
        SyntheticScenario { graph, templates, repetitions: 1, noise_rate: 0.0, num_steps, min_gap: 2, seed }
    }

    pub fn repetitions(mut self, repetitions: usize) -> Self {
        self.repetitions = repetitions;
        self
    }

    pub fn noise_rate(mut self, rate: f64) -> Self {
        self.noise_rate = rate;
        self
    }

    pub fn min_gap(mut self, gap: usize) -> Self {
        self.min_gap = gap;
        self
    }
}

/// One planted occurrence of a template, before noise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedInstance {
    pub template: usize,
    pub start: u32,
    /// Sorted by `(layer, node)`.
    pub members: Vec<LayerNode>,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub graph: SpatialGraph,
    /// 1.0 where active, 0.0 elsewhere.
    pub signal: SignalMatrix,
    pub seeds: Vec<u32>,
    pub instances: Vec<PlantedInstance>,
}

pub fn generate_scenario(scenario: &SyntheticScenario) -> Result<Scenario> {
    let bad = |msg: alloc::string::String| Err(Error::InvalidScenario(msg));
    if !(0.0..1.0).contains(&scenario.noise_rate) {
        return bad(format!("noise rate {} outside [0, 1)", scenario.noise_rate));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let graph = random_graph(&scenario.graph, &mut rng)?;
    let n = graph.num_nodes();
    let t_len = scenario.num_steps;
    let adj = adjacency(&graph);

    let mut seeds = Vec::with_capacity(scenario.templates.len());
    for (k, tpl) in scenario.templates.iter().enumerate() {
        if tpl.duration == 0 {
            return bad(format!("template {k} has zero duration"));
        }
        let seed = match tpl.seed_node {
            Some(s) if (s as usize) < n => s,
            Some(s) => return bad(format!("template {k} seed {s} outside {n} nodes")),
            None => farthest_seed(&adj, &seeds, &mut rng),
        };
        seeds.push(seed);
    }

    let depths: Vec<Vec<u32>> = seeds.iter().map(|&s| hop_distances(&adj, s)).collect();
    let footprints: Vec<Vec<bool>> = scenario
        .templates
        .iter()
        .zip(&depths)
        .map(|(tpl, d)| d.iter().map(|&h| h <= tpl.max_radius).collect())
        .collect();
    let groups = group_templates(&footprints, &adj);
    let num_groups = groups.iter().copied().max().map_or(0, |g| g + 1);

    let mut active = vec![false; n * t_len];
    let mut instances = Vec::new();
    if num_groups > 0 && scenario.repetitions > 0 {
        let slots = scenario.repetitions * num_groups;
        let slot = t_len / slots;
        for (k, tpl) in scenario.templates.iter().enumerate() {
            let need = tpl.duration as usize + scenario.min_gap;
            if slot < need {
                return bad(format!(
                    "template {k} needs {need} steps per slot but {slots} slots of {slot} fit in T = {t_len}"
                ));
            }
        }
        for rep in 0..scenario.repetitions {
            for (k, tpl) in scenario.templates.iter().enumerate() {
                let base = (rep * num_groups + groups[k]) * slot;
                let slack = slot - tpl.duration as usize - scenario.min_gap;
                let start = base + rng.random_range(0..=slack);
                let mut members = Vec::new();
                for s in 0..tpl.duration as usize {
                    let radius = (s as u32).min(tpl.max_radius);
                    let t = start + s;
                    for (node, &h) in depths[k].iter().enumerate() {
                        if h <= radius {
                            active[node * t_len + t] = true;
                            members.push(LayerNode::new(node as u32, t as u32));
                        }
                    }
                }
                members.sort_unstable();
                instances.push(PlantedInstance { template: k, start: start as u32, members });
            }
        }
    }
    instances.sort_by_key(|inst| (inst.start, inst.template));

    if scenario.noise_rate > 0.0 {
        for bit in active.iter_mut() {
            if rng.random::<f64>() < scenario.noise_rate {
                *bit = !*bit;
            }
        }
    }
    let values = active.iter().map(|&a| if a { 1.0 } else { 0.0 }).collect();
    let signal = SignalMatrix::new(n, t_len, values)?;
    Ok(Scenario { graph, signal, seeds, instances })
}

/// Template of the planted instance covering a strict majority of each
/// component's members, or `None` for components made mostly of noise.
pub fn label_components(components: &ComponentSet, instances: &[PlantedInstance]) -> Vec<Option<usize>> {
    let mut owner = BTreeMap::new();
    for (idx, inst) in instances.iter().enumerate() {
        for &m in &inst.members {
            owner.insert(m, idx);
        }
    }
    components
        .components
        .iter()
        .map(|c| {
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for m in &c.members {
                if let Some(&idx) = owner.get(m) {
                    *counts.entry(idx).or_default() += 1;
                }
            }
            let (idx, count) = counts.into_iter().max_by_key(|&(idx, c)| (c, core::cmp::Reverse(idx)))?;
            (2 * count > c.members.len()).then_some(instances[idx].template)
        })
        .collect()
}

fn random_graph(family: &GraphFamily, rng: &mut ChaCha8Rng) -> Result<SpatialGraph> {
    let mut edges = Vec::new();
    let n = match *family {
        GraphFamily::ErdosRenyi { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidScenario(format!("edge probability {p} outside [0, 1]")));
            }
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random::<f64>() < p {
                        edges.push((i, j, 1.0));
                    }
                }
            }
            n
        }
        GraphFamily::Grid { rows, cols } => {
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
            rows * cols
        }
        GraphFamily::RandomTree { n } => {
            for v in 1..n {
                edges.push((rng.random_range(0..v), v, 1.0));
            }
            n
        }
    };
    if n == 0 {
        return Err(Error::InvalidScenario("graph has no nodes".into()));
    }
    SpatialGraph::from_index_edges(n, false, edges)
}

/// Spreading follows edge direction, so a directed graph uses out-neighbours.
fn adjacency(graph: &SpatialGraph) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); graph.num_nodes()];
    for (src, _, dst) in graph.triplets() {
        adj[src as usize].push(dst);
    }
    adj
}

fn hop_distances(adj: &[Vec<u32>], source: u32) -> Vec<u32> {
    let mut dist = vec![u32::MAX; adj.len()];
    let mut queue = VecDeque::new();
    dist[source as usize] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize] + 1;
        for &w in &adj[v as usize] {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = d;
                queue.push_back(w);
            }
        }
    }
    dist
}

fn farthest_seed(adj: &[Vec<u32>], chosen: &[u32], rng: &mut ChaCha8Rng) -> u32 {
    let n = adj.len();
    if chosen.is_empty() {
        let comp = largest_component(adj);
        return comp[rng.random_range(0..comp.len())];
    }
    let reach = hop_distances(adj, chosen[0]);
    let mut best_dist = vec![u32::MAX; n];
    for &s in chosen {
        for (b, d) in best_dist.iter_mut().zip(hop_distances(adj, s)) {
            *b = (*b).min(d);
        }
    }
    (0..n)
        .filter(|&v| reach[v] != u32::MAX)
        .max_by_key(|&v| (best_dist[v], core::cmp::Reverse(v)))
        .map_or(0, |v| v as u32)
}

fn largest_component(adj: &[Vec<u32>]) -> Vec<u32> {
    let mut seen = vec![false; adj.len()];
    let mut best: Vec<u32> = Vec::new();
    for v in 0..adj.len() {
        if seen[v] {
            continue;
        }
        let dist = hop_distances(adj, v as u32);
        let comp: Vec<u32> = (0..adj.len() as u32).filter(|&w| dist[w as usize] != u32::MAX).collect();
        for &w in &comp {
            seen[w as usize] = true;
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    best
}

/// Greedy colouring: templates whose footprints overlap or touch run in
/// different time slots.
fn group_templates(footprints: &[Vec<bool>], adj: &[Vec<u32>]) -> Vec<usize> {
    let touches = |a: &[bool], b: &[bool]| {
        (0..a.len()).any(|v| a[v] && (b[v] || adj[v].iter().any(|&w| b[w as usize])))
    };
    let mut groups: Vec<usize> = Vec::with_capacity(footprints.len());
    for k in 0..footprints.len() {
        let mut g = 0;
        while (0..k).any(|j| groups[j] == g && (touches(&footprints[k], &footprints[j]) || touches(&footprints[j], &footprints[k]))) {
            g += 1;
        }
        groups.push(g);
    }
    groups
}
