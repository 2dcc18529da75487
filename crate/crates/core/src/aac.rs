//! Average activation components: per-cluster layer-aligned likelihoods of
//! node activation and causal edges, sparsification, and weighted walks.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::build::{CausalEdge, LayerNode};
use crate::components::DynamicComponent;
use crate::error::{Error, Result};
use crate::features::dynamic_features;

/// Default sparsification threshold.
pub const DEFAULT_TAU: f64 = 0.05;

/// How components are aligned before counting. Only start alignment is
/// supported: relative layer 0 is each component's first layer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Alignment {
    #[default]
    Start,
}

/// Denominator of edge likelihoods.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EdgeNormalization {
    /// Fraction of the cluster's components containing the edge.
    #[default]
    Support,
    /// Fraction of components activating the source node that also contain
    /// the edge.
    Conditional,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AverageComponent {
    pub cluster_id: usize,
    /// Maximum width of the aggregated components.
    pub width: usize,
    /// Number of aggregated components.
    pub support: usize,
    /// Last sparsification threshold applied (0 when never sparsified).
    pub tau: f64,
    pub edge_normalization: EdgeNormalization,
    /// Occurrence counts keyed by relative layer.
    node_counts: BTreeMap<LayerNode, u32>,
    edge_counts: BTreeMap<CausalEdge, u32>,
}

/// Accumulates the components assigned to `cluster_id`.
pub fn build_aac(
    components: &[DynamicComponent],
    assignments: &[usize],
    cluster_id: usize,
    alignment: Alignment,
    edge_normalization: EdgeNormalization,
) -> Result<AverageComponent> {
    if components.len() != assignments.len() {
        return Err(Error::DimensionMismatch {
            what: "assignments vs components",
            expected: components.len(),
            found: assignments.len(),
        });
    }
    let Alignment::Start = alignment;
    let mut aac = AverageComponent {
        cluster_id,
        width: 0,
        support: 0,
        tau: 0.0,
        edge_normalization,
        node_counts: BTreeMap::new(),
        edge_counts: BTreeMap::new(),
    };
    for (dac, _) in components.iter().zip(assignments).filter(|(_, &a)| a == cluster_id) {
        aac.support += 1;
        aac.width = aac.width.max(dac.width);
        let dynamic = dynamic_features(dac);
        for (node, layer) in dynamic.active_cells() {
            *aac.node_counts.entry(LayerNode::new(node, layer)).or_default() += 1;
        }
        for e in &dac.edges {
            let rel = CausalEdge::new(e.src, e.dst, e.layer - dac.start_layer);
            *aac.edge_counts.entry(rel).or_default() += 1;
        }
    }
    if aac.support == 0 {
        return Err(Error::EmptyCluster(cluster_id));
    }
    Ok(aac)
}

/// One AAC per cluster `0..k`.
pub fn build_all(
    components: &[DynamicComponent],
    assignments: &[usize],
    k: usize,
    edge_normalization: EdgeNormalization,
) -> Result<Vec<AverageComponent>> {
    (0..k)
        .map(|c| build_aac(components, assignments, c, Alignment::Start, edge_normalization))
        .collect()
}

impl AverageComponent {
    /// Reassembles an AAC from stored occurrence counts.
    #[allow(clippy::too_many_arguments)]
    pub fn from_counts(
        cluster_id: usize,
        width: usize,
        support: usize,
        tau: f64,
        edge_normalization: EdgeNormalization,
        nodes: impl IntoIterator<Item = (LayerNode, u32)>,
        edges: impl IntoIterator<Item = (CausalEdge, u32)>,
    ) -> Result<Self> {
        if support == 0 {
            return Err(Error::EmptyCluster(cluster_id));
        }
        if !(0.0..1.0).contains(&tau) {
            return Err(Error::InvalidTau(tau));
        }
        let aac = AverageComponent {
            cluster_id,
            width,
            support,
            tau,
            edge_normalization,
            node_counts: nodes.into_iter().collect(),
            edge_counts: edges.into_iter().collect(),
        };
        let over = aac.node_counts.iter().map(|(n, &c)| (format!("{n:?}"), c));
        let over = over.chain(aac.edge_counts.iter().map(|(e, &c)| (format!("{e:?}"), c)));
        for (what, c) in over {
            if c == 0 || c as usize > support {
                return Err(Error::Invariant(format!("{what} count {c} outside 1..={support}")));
            }
        }
        aac.check_invariants()?;
        Ok(aac)
    }

    pub fn node_count(&self, at: LayerNode) -> Option<u32> {
        self.node_counts.get(&at).copied()
    }

    pub fn node_weight(&self, at: LayerNode) -> Option<f64> {
        self.node_count(at).map(|c| c as f64 / self.support as f64)
    }

    pub fn edge_count(&self, e: CausalEdge) -> Option<u32> {
        self.edge_counts.get(&e).copied()
    }

    pub fn edge_weight(&self, e: CausalEdge) -> Option<f64> {
        let count = self.edge_count(e)? as f64;
        Some(match self.edge_normalization {
            EdgeNormalization::Support => count / self.support as f64,
            EdgeNormalization::Conditional => {
                let src = self.node_count(e.source()).unwrap_or(self.support as u32).max(1);
                count / src as f64
            }
        })
    }

    /// `(node, weight)` in `(relative layer, node)` order.
    pub fn nodes(&self) -> impl Iterator<Item = (LayerNode, f64)> + '_ {
        self.node_counts
            .iter()
            .map(move |(&n, &c)| (n, c as f64 / self.support as f64))
    }

    /// `(edge, weight)` in canonical order; `edge.layer` is relative.
    pub fn edges(&self) -> impl Iterator<Item = (CausalEdge, f64)> + '_ {
        self.edge_counts
            .keys()
            .map(move |&e| (e, self.edge_weight(e).expect("edge present")))
    }

    pub fn num_nodes(&self) -> usize {
        self.node_counts.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_counts.is_empty()
    }

    pub fn layer_nodes(&self, layer: u32) -> impl Iterator<Item = (LayerNode, f64)> + '_ {
        let lo = LayerNode::new(0, layer);
        let hi = LayerNode::new(u32::MAX, layer);
        self.node_counts
            .range(lo..=hi)
            .map(move |(&n, &c)| (n, c as f64 / self.support as f64))
    }

    /// Causal out-edges of `node` on relative layer `layer`.
    pub fn out_edges(&self, node: u32, layer: u32) -> impl Iterator<Item = (CausalEdge, f64)> + '_ {
        let lo = CausalEdge::new(node, 0, layer);
        let hi = CausalEdge::new(node, u32::MAX, layer);
        self.edge_counts
            .range(lo..=hi)
            .map(move |(&e, _)| (e, self.edge_weight(e).expect("edge present")))
    }

    /// Removes nodes and edges with weight `<= tau`, then edges left without
    /// an endpoint.
    pub fn sparsify(&self, tau: f64) -> Result<AverageComponent> {
        if !(0.0..1.0).contains(&tau) {
            return Err(Error::InvalidTau(tau));
        }
        let mut out = self.clone();
        out.tau = tau;
        let support = self.support as f64;
        out.node_counts.retain(|_, c| *c as f64 / support > tau);
        let kept: Vec<CausalEdge> = self
            .edges()
            .filter(|&(e, w)| {
                w > tau && out.node_counts.contains_key(&e.source()) && out.node_counts.contains_key(&e.target())
            })
            .map(|(e, _)| e)
            .collect();
        out.edge_counts.retain(|e, _| kept.binary_search(e).is_ok());
        Ok(out)
    }

    pub fn check_invariants(&self) -> Result<()> {
        for (n, w) in self.nodes() {
            if !(w > 0.0 && w <= 1.0) || w <= self.tau {
                return Err(Error::Invariant(format!("node {n:?} weight {w} outside ({}, 1]", self.tau)));
            }
        }
        for (e, w) in self.edges() {
            if !(w > 0.0 && w <= 1.0) || w <= self.tau {
                return Err(Error::Invariant(format!("edge {e:?} weight {w} outside ({}, 1]", self.tau)));
            }
            if !self.node_counts.contains_key(&e.source()) || !self.node_counts.contains_key(&e.target()) {
                return Err(Error::Invariant(format!("edge {e:?} has a missing endpoint")));
            }
            if e.layer as usize + 1 >= self.width {
                return Err(Error::Invariant(format!("edge {e:?} beyond width {}", self.width)));
            }
        }
        Ok(())
    }

    /// Per-layer totals for plotting.
    pub fn layer_profile(&self) -> Vec<LayerProfile> {
        let mut rows: Vec<LayerProfile> = (0..self.width)
            .map(|layer| LayerProfile {
                layer: layer as u32,
                ..LayerProfile::default()
            })
            .collect();
        for (n, w) in self.nodes() {
            let row = &mut rows[n.layer as usize];
            row.nodes += 1;
            row.node_weight += w;
        }
        for (e, w) in self.edges() {
            let row = &mut rows[e.layer as usize];
            row.edges += 1;
            row.edge_weight += w;
        }
        rows
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LayerProfile {
    pub layer: u32,
    pub nodes: usize,
    pub node_weight: f64,
    /// Edges leaving this layer.
    pub edges: usize,
    pub edge_weight: f64,
}

fn pick_weighted(rng: &mut ChaCha8Rng, log_weights: &[f64]) -> usize {
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = log_weights.iter().map(|&l| libm::exp(l - max)).collect();
    let total: f64 = weights.iter().sum();
    let mut r = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if r < w {
            return i;
        }
        r -= w;
    }
    weights.len() - 1
}

/// Random walk along causal edges starting on relative layer 0. Each step
/// picks an out-edge with probability proportional to `weight^bias`; the walk
/// stops at a node without out-edges or on the last layer.
pub fn sample_walk(aac: &AverageComponent, seed_node: Option<u32>, rng_seed: u64, bias: f64) -> Result<Vec<LayerNode>> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let first: Vec<(LayerNode, f64)> = aac.layer_nodes(0).collect();
    if first.is_empty() {
        return Err(Error::EmptyFirstLayer);
    }
    let start = match seed_node {
        Some(node) => first
            .iter()
            .find(|(n, _)| n.node == node)
            .map(|(n, _)| *n)
            .ok_or(Error::UnknownSeedNode(node))?,
        None => {
            let logs: Vec<f64> = first.iter().map(|(_, w)| libm::log(*w)).collect();
            first[pick_weighted(&mut rng, &logs)].0
        }
    };
    let mut walk = alloc::vec![start];
    let mut current = start;
    while (current.layer as usize) + 1 < aac.width {
        let out: Vec<(CausalEdge, f64)> = aac.out_edges(current.node, current.layer).collect();
        if out.is_empty() {
            break;
        }
        let logs: Vec<f64> = out.iter().map(|(_, w)| bias * libm::log(*w)).collect();
        current = out[pick_weighted(&mut rng, &logs)].0.target();
        walk.push(current);
    }
    Ok(walk)
}

/// Label totals on one relative layer.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerLabels<L> {
    pub layer: u32,
    /// Summed node weight per label.
    pub totals: BTreeMap<L, f64>,
    /// Number of distinct labels on the layer.
    pub spread: usize,
}

/// Groups surviving nodes by label on each layer that has nodes.
pub fn label_view<L: Ord + Clone>(aac: &AverageComponent, label: impl Fn(u32) -> Option<L>) -> Result<Vec<LayerLabels<L>>> {
    let mut layers: BTreeMap<u32, BTreeMap<L, f64>> = BTreeMap::new();
    for (n, w) in aac.nodes() {
        let l = label(n.node).ok_or(Error::MissingLabel(n.node))?;
        *layers.entry(n.layer).or_default().entry(l).or_insert(0.0) += w;
    }
    Ok(layers
        .into_iter()
        .map(|(layer, totals)| LayerLabels {
            layer,
            spread: totals.len(),
            totals,
        })
        .collect())
}
