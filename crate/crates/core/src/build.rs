//! Bit-parallel construction of the causal multilayer graph of activity.
//!
//! The full multilayer graph is never materialised. For every oriented
//! spatial triplet `(i, e, j)` the source mask row is And-ed with the
//! destination row shifted down by one position, so that bit `t` of the
//! result is `M(i, t) & M(j, t + 1)`; causal edges are read off the set bits.
//! Self-edges use the same operation with `i = j`.

use alloc::vec;
use alloc::vec::Vec;

use crate::activation::{ActivationMask, EdgeMask};
use crate::bits::{for_each_one, shifted_down, words_for, WORD_BITS};
use crate::error::{Error, Result};
use crate::graph::SpatialGraph;

/// A node of the multilayer graph: spatial node `node` on layer `layer`.
/// Ordered by layer first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LayerNode {
    pub layer: u32,
    pub node: u32,
}

impl LayerNode {
    pub fn new(node: u32, layer: u32) -> Self {
        Self { layer, node }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Neighbor,
    SelfEdge,
}

/// Causal edge `(src, layer) -> (dst, layer + 1)`. The derived order is the
/// canonical `(source layer, source node, destination node)` order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CausalEdge {
    pub layer: u32,
    pub src: u32,
    pub dst: u32,
}

impl CausalEdge {
    pub fn new(src: u32, dst: u32, layer: u32) -> Self {
        Self { layer, src, dst }
    }

    pub fn kind(&self) -> EdgeKind {
        if self.src == self.dst {
            EdgeKind::SelfEdge
        } else {
            EdgeKind::Neighbor
        }
    }

    pub fn source(&self) -> LayerNode {
        LayerNode::new(self.src, self.layer)
    }

    pub fn target(&self) -> LayerNode {
        LayerNode::new(self.dst, self.layer + 1)
    }
}

/// The graph `H`: every activated `(node, layer)` pair and the causal edges
/// between consecutive layers. Pairs with no incident edge are kept and
/// flagged as isolated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalActivityGraph {
    num_spatial_nodes: usize,
    num_layers: usize,
    nodes: Vec<LayerNode>,
    isolated: Vec<bool>,
    layer_offsets: Vec<usize>,
    edges: Vec<CausalEdge>,
}

impl CausalActivityGraph {
    /// Assembles a graph from explicit nodes and edges. Edge endpoints are
    /// added to the node set; both lists are sorted and deduplicated.
    pub fn from_parts(
        num_spatial_nodes: usize,
        num_layers: usize,
        nodes: impl IntoIterator<Item = LayerNode>,
        edges: impl IntoIterator<Item = CausalEdge>,
    ) -> Result<Self> {
        let mut edges: Vec<CausalEdge> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        let mut nodes: Vec<LayerNode> = nodes.into_iter().collect();
        nodes.extend(edges.iter().flat_map(|e| [e.source(), e.target()]));
        nodes.sort_unstable();
        nodes.dedup();
        for n in &nodes {
            if n.node as usize >= num_spatial_nodes {
                return Err(Error::NodeOutOfRange {
                    index: n.node as usize,
                    num_nodes: num_spatial_nodes,
                });
            }
            if n.layer as usize >= num_layers {
                return Err(Error::LayerOutOfRange {
                    layer: n.layer as usize,
                    num_steps: num_layers,
                });
            }
        }
        let mut counts = vec![0usize; num_layers];
        for n in &nodes {
            counts[n.layer as usize] += 1;
        }
        let mut h = Self::assemble(num_spatial_nodes, num_layers, nodes, &counts, Vec::new(), edges);
        h.isolated = vec![true; h.nodes.len()];
        for k in 0..h.edges.len() {
            let e = h.edges[k];
            for end in [e.source(), e.target()] {
                if let Some(idx) = h.node_index(end) {
                    h.isolated[idx] = false;
                }
            }
        }
        Ok(h)
    }

    fn assemble(
        num_spatial_nodes: usize,
        num_layers: usize,
        nodes: Vec<LayerNode>,
        layer_counts: &[usize],
        isolated: Vec<bool>,
        edges: Vec<CausalEdge>,
    ) -> Self {
        let mut layer_offsets = Vec::with_capacity(num_layers + 1);
        let mut acc = 0;
        layer_offsets.push(0);
        for c in layer_counts {
            acc += c;
            layer_offsets.push(acc);
        }
        Self {
            num_spatial_nodes,
            num_layers,
            isolated,
            nodes,
            layer_offsets,
            edges,
        }
    }

    pub fn num_spatial_nodes(&self) -> usize {
        self.num_spatial_nodes
    }

    pub fn num_layers(&self) -> usize {
        self.num_layers
    }

    /// All activated pairs, sorted by `(layer, node)`.
    pub fn nodes(&self) -> &[LayerNode] {
        &self.nodes
    }

    /// Causal edges in canonical order.
    pub fn edges(&self) -> &[CausalEdge] {
        &self.edges
    }

    pub fn is_isolated(&self, index: usize) -> bool {
        self.isolated[index]
    }

    pub fn layer_nodes(&self, layer: usize) -> &[LayerNode] {
        &self.nodes[self.layer_offsets[layer]..self.layer_offsets[layer + 1]]
    }

    /// Position of `at` in [`nodes`](Self::nodes).
    pub fn node_index(&self, at: LayerNode) -> Option<usize> {
        let layer = at.layer as usize;
        if layer >= self.num_layers {
            return None;
        }
        let lo = self.layer_offsets[layer];
        self.layer_nodes(layer)
            .binary_search_by_key(&at.node, |n| n.node)
            .ok()
            .map(|k| lo + k)
    }

    pub fn stats(&self) -> BuildStats {
        BuildStats::of(self)
    }

    /// Checks the structural invariants of `H`, and when given the mask and
    /// graph it was built from, that every endpoint is activated and every
    /// neighbour edge follows a spatial edge.
    pub fn check_invariants(
        &self,
        graph: Option<&SpatialGraph>,
        mask: Option<&ActivationMask>,
    ) -> Result<()> {
        use alloc::format;
        if !self.edges.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invariant("edges not in canonical order".into()));
        }
        for e in &self.edges {
            if e.layer as usize + 1 >= self.num_layers {
                return Err(Error::Invariant(format!("edge {e:?} leaves the last layer")));
            }
            if self.node_index(e.source()).is_none() || self.node_index(e.target()).is_none() {
                return Err(Error::Invariant(format!("edge {e:?} endpoint missing from V_H")));
            }
            if let Some(g) = graph {
                if e.kind() == EdgeKind::Neighbor && !g.has_edge(e.src, e.dst) {
                    return Err(Error::Invariant(format!("edge {e:?} has no spatial edge")));
                }
            }
        }
        if let Some(m) = mask {
            if m.count_active() != self.nodes.len() {
                return Err(Error::Invariant(format!(
                    "{} activated pairs but {} nodes",
                    m.count_active(),
                    self.nodes.len()
                )));
            }
            for n in &self.nodes {
                if !m.get(n.node as usize, n.layer as usize) {
                    return Err(Error::Invariant(format!("node {n:?} is not activated")));
                }
            }
        }
        Ok(())
    }
}

/// Counts describing a built `H`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BuildStats {
    /// Pairs with at least one incident causal edge.
    pub nodes: usize,
    pub isolated: usize,
    pub activated_pairs: usize,
    pub neighbor_edges: usize,
    pub self_edges: usize,
    pub layers: Vec<LayerStats>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LayerStats {
    pub active: usize,
    /// Causal edges leaving this layer.
    pub out_edges: usize,
    /// Fraction of spatial nodes active on this layer.
    pub density: f64,
}

impl BuildStats {
    pub fn of(h: &CausalActivityGraph) -> Self {
        let isolated = h.isolated.iter().filter(|&&b| b).count();
        let self_edges = h
            .edges
            .iter()
            .filter(|e| e.kind() == EdgeKind::SelfEdge)
            .count();
        let mut layers: Vec<LayerStats> = (0..h.num_layers)
            .map(|t| {
                let active = h.layer_nodes(t).len();
                LayerStats {
                    active,
                    out_edges: 0,
                    density: if h.num_spatial_nodes == 0 {
                        0.0
                    } else {
                        active as f64 / h.num_spatial_nodes as f64
                    },
                }
            })
            .collect();
        for e in &h.edges {
            layers[e.layer as usize].out_edges += 1;
        }
        Self {
            nodes: h.nodes.len() - isolated,
            isolated,
            activated_pairs: h.nodes.len(),
            neighbor_edges: h.edges.len() - self_edges,
            self_edges,
            layers,
        }
    }
}

/// `u_e` for the oriented pair `src -> dst`: `T - 1` bits, bit `t` set iff
/// `M(src, t) & M(dst, t + 1)`.
pub fn edge_activation(mask: &ActivationMask, src: usize, dst: usize) -> Vec<u64> {
    activation_vector(mask.row(src), mask.row(dst), None, mask.num_steps())
}

/// `u_self` for `node`: bit `t` set iff `M(node, t) & M(node, t + 1)`.
pub fn self_activation(mask: &ActivationMask, node: usize) -> Vec<u64> {
    edge_activation(mask, node, node)
}

fn activation_vector(src: &[u64], dst: &[u64], existence: Option<&[u64]>, steps: usize) -> Vec<u64> {
    let mut out: Vec<u64> = (0..src.len())
        .map(|w| {
            let u = src[w] & shifted_down(dst, w);
            existence.map_or(u, |m| u & m[w])
        })
        .collect();
    out.truncate(words_for(steps.saturating_sub(1)));
    out
}

/// Builds `H` from `(G, M)` on a single worker.
pub fn build_activity_graph(graph: &SpatialGraph, mask: &ActivationMask) -> Result<CausalActivityGraph> {
    Builder::new(graph, mask).build()
}

/// Builds `H` for a dynamic graph: a neighbour edge at source layer `t`
/// additionally requires `M_E(e, t) = 1`. Self-edges follow the static rule.
pub fn build_activity_graph_dynamic(
    graph: &SpatialGraph,
    mask: &ActivationMask,
    edge_mask: &EdgeMask,
) -> Result<CausalActivityGraph> {
    Builder::new(graph, mask).edge_mask(edge_mask).build()
}

/// Stable counting sort of the worker buffers by source layer.
fn by_layer(buffers: &[Vec<CausalEdge>], steps: usize) -> (Vec<CausalEdge>, Vec<usize>) {
    let mut start = vec![0usize; steps + 1];
    for e in buffers.iter().flatten() {
        start[e.layer as usize + 1] += 1;
    }
    for t in 0..steps {
        start[t + 1] += start[t];
    }
    let bounds = start.clone();
    let mut out = vec![CausalEdge::new(0, 0, 0); start[steps]];
    for e in buffers.iter().flatten() {
        let slot = &mut start[e.layer as usize];
        out[*slot] = *e;
        *slot += 1;
    }
    (out, bounds)
}

/// Clears the flag of every node of `layer` (sorted by node) whose node id
/// appears in `ids` (sorted).
fn mark_touched(layer: &[LayerNode], flags: &mut [bool], ids: impl Iterator<Item = u32>) {
    let mut k = 0;
    for id in ids {
        while k < layer.len() && layer[k].node < id {
            k += 1;
        }
        if k < layer.len() && layer[k].node == id {
            flags[k] = false;
        }
    }
}

/// Configurable builder. Spatial edges and nodes are split into `workers`
/// contiguous chunks that each fill a private edge buffer. A counting pass
/// buckets the buffers by layer and each layer is sorted on its own, so the
/// output does not depend on the worker count. Only the per-layer sorts
/// exceed linear cost, by a factor logarithmic in the edges per layer.
#[derive(Clone, Copy, Debug)]
pub struct Builder<'a> {
    graph: &'a SpatialGraph,
    mask: &'a ActivationMask,
    edge_mask: Option<&'a EdgeMask>,
    workers: usize,
}

impl<'a> Builder<'a> {
    pub fn new(graph: &'a SpatialGraph, mask: &'a ActivationMask) -> Self {
        Self {
            graph,
            mask,
            edge_mask: None,
            workers: 1,
        }
    }

    pub fn edge_mask(mut self, edge_mask: &'a EdgeMask) -> Self {
        self.edge_mask = Some(edge_mask);
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.graph.num_nodes();
        if self.mask.num_nodes() != n {
            return Err(Error::DimensionMismatch {
                what: "mask rows vs graph nodes",
                expected: n,
                found: self.mask.num_nodes(),
            });
        }
        if n > u32::MAX as usize || self.mask.num_steps() > u32::MAX as usize {
            return Err(Error::DimensionMismatch {
                what: "graph or mask size exceeds u32 indexing",
                expected: u32::MAX as usize,
                found: n.max(self.mask.num_steps()),
            });
        }
        if let Some(em) = self.edge_mask {
            if em.num_edges() != self.graph.num_edges() {
                return Err(Error::DimensionMismatch {
                    what: "edge mask rows vs graph edges",
                    expected: self.graph.num_edges(),
                    found: em.num_edges(),
                });
            }
            if em.num_steps() != self.mask.num_steps() {
                return Err(Error::DimensionMismatch {
                    what: "edge mask steps vs activation mask steps",
                    expected: self.mask.num_steps(),
                    found: em.num_steps(),
                });
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<CausalActivityGraph> {
        self.validate()?;
        let steps = self.mask.num_steps();
        let buffers = self.run_chunks(&self.chunks());
        let (mut edges, bounds) = by_layer(&buffers, steps);
        drop(buffers);
        self.sort_layers(&mut edges, &bounds);

        let (nodes, counts) = self.activated_nodes();
        let mut isolated = vec![true; nodes.len()];
        let mut offset = 0;
        let mut dsts: Vec<u32> = Vec::new();
        for t in 0..steps {
            let layer = &nodes[offset..offset + counts[t]];
            let flags = &mut isolated[offset..offset + counts[t]];
            let out = &edges[bounds[t]..bounds[t + 1]];
            mark_touched(layer, flags, out.iter().map(|e| e.src));
            // targets on this layer came from the previous one
            mark_touched(layer, flags, dsts.iter().copied());
            dsts.clear();
            dsts.extend(out.iter().map(|e| e.dst));
            dsts.sort_unstable();
            offset += counts[t];
        }
        Ok(CausalActivityGraph::assemble(
            self.graph.num_nodes(),
            steps,
            nodes,
            &counts,
            isolated,
            edges,
        ))
    }

    /// Work items: `(edge range, node range)` per worker.
    fn chunks(&self) -> Vec<(core::ops::Range<usize>, core::ops::Range<usize>)> {
        let w = self.workers;
        let split = |len: usize, k: usize| {
            let per = len.div_ceil(w).max(1);
            (k * per).min(len)..((k + 1) * per).min(len)
        };
        (0..w)
            .map(|k| (split(self.graph.num_edges(), k), split(self.graph.num_nodes(), k)))
            .collect()
    }

    #[cfg(feature = "parallel")]
    fn pool(&self) -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .expect("thread pool")
    }

    #[cfg(feature = "parallel")]
    fn run_chunks(&self, chunks: &[(core::ops::Range<usize>, core::ops::Range<usize>)]) -> Vec<Vec<CausalEdge>> {
        use rayon::prelude::*;
        if self.workers == 1 {
            return chunks.iter().map(|(e, n)| self.emit(e.clone(), n.clone())).collect();
        }
        self.pool().install(|| {
            chunks
                .par_iter()
                .map(|(e, n)| self.emit(e.clone(), n.clone()))
                .collect()
        })
    }

    #[cfg(not(feature = "parallel"))]
    fn run_chunks(&self, chunks: &[(core::ops::Range<usize>, core::ops::Range<usize>)]) -> Vec<Vec<CausalEdge>> {
        chunks.iter().map(|(e, n)| self.emit(e.clone(), n.clone())).collect()
    }

    #[cfg(feature = "parallel")]
    fn sort_layers(&self, edges: &mut [CausalEdge], bounds: &[usize]) {
        use rayon::prelude::*;
        if self.workers == 1 {
            return sort_layers(edges, bounds);
        }
        let mut layers = Vec::with_capacity(bounds.len());
        let mut rest = edges;
        for w in bounds.windows(2) {
            let (layer, tail) = rest.split_at_mut(w[1] - w[0]);
            layers.push(layer);
            rest = tail;
        }
        self.pool().install(|| layers.par_iter_mut().for_each(|l| l.sort_unstable()));
    }

    #[cfg(not(feature = "parallel"))]
    fn sort_layers(&self, edges: &mut [CausalEdge], bounds: &[usize]) {
        sort_layers(edges, bounds);
    }

    fn emit(&self, edge_range: core::ops::Range<usize>, node_range: core::ops::Range<usize>) -> Vec<CausalEdge> {
        let mut out = Vec::new();
        let both = !self.graph.is_directed();
        let edges = &self.graph.edges()[edge_range.clone()];
        for (e, edge) in edge_range.zip(edges) {
            let existence = self.edge_mask.map(|m| m.row(e));
            self.emit_pair(edge.src, edge.dst, existence, &mut out);
            if both {
                self.emit_pair(edge.dst, edge.src, existence, &mut out);
            }
        }
        for node in node_range {
            self.emit_pair(node as u32, node as u32, None, &mut out);
        }
        out
    }

    #[inline]
    fn emit_pair(&self, src: u32, dst: u32, existence: Option<&[u64]>, out: &mut Vec<CausalEdge>) {
        let ms = self.mask.row(src as usize);
        let md = self.mask.row(dst as usize);
        for w in 0..ms.len() {
            let mut u = ms[w] & shifted_down(md, w);
            if let Some(me) = existence {
                u &= me[w];
            }
            for_each_one(u, w * WORD_BITS, |t| out.push(CausalEdge::new(src, dst, t as u32)));
        }
    }

    fn activated_nodes(&self) -> (Vec<LayerNode>, Vec<usize>) {
        let steps = self.mask.num_steps();
        let mut counts = vec![0usize; steps];
        for i in 0..self.mask.num_nodes() {
            for t in self.mask.bits().ones_in_row(i) {
                counts[t] += 1;
            }
        }
        let mut cursor = Vec::with_capacity(steps);
        let mut acc = 0;
        for c in &counts {
            cursor.push(acc);
            acc += c;
        }
        let mut nodes = vec![LayerNode::new(0, 0); acc];
        for i in 0..self.mask.num_nodes() {
            for t in self.mask.bits().ones_in_row(i) {
                nodes[cursor[t]] = LayerNode::new(i as u32, t as u32);
                cursor[t] += 1;
            }
        }
        (nodes, counts)
    }
}

fn sort_layers(edges: &mut [CausalEdge], bounds: &[usize]) {
    for w in bounds.windows(2) {
        edges[w[0]..w[1]].sort_unstable();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitMatrix;
    use crate::graph::SpatialGraph;

    fn mask(rows: &[&[u8]]) -> ActivationMask {
        ActivationMask::from_fn(rows.len(), rows[0].len(), |i, t| rows[i][t] == 1)
    }

    #[test]
    fn single_neighbor_edge() {
        let g = SpatialGraph::from_index_edges(2, false, [(0, 1, 1.0)]).unwrap();
        let h = build_activity_graph(&g, &mask(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(h.edges(), &[CausalEdge::new(0, 1, 0)]);
        assert_eq!(h.edges()[0].kind(), EdgeKind::Neighbor);
    }

    #[test]
    fn self_edge_chain() {
        let g = SpatialGraph::from_index_edges(1, false, []).unwrap();
        let h = build_activity_graph(&g, &mask(&[&[1, 1, 1]])).unwrap();
        assert_eq!(h.edges(), &[CausalEdge::new(0, 0, 0), CausalEdge::new(0, 0, 1)]);
        let s = h.stats();
        assert_eq!((s.nodes, s.self_edges, s.neighbor_edges), (3, 2, 0));
    }

    #[test]
    fn empty_stats() {
        let g = SpatialGraph::from_index_edges(3, false, [(0, 1, 1.0)]).unwrap();
        let h = build_activity_graph(&g, &ActivationMask::from_fn(3, 4, |_, _| false)).unwrap();
        let s = h.stats();
        assert_eq!(
            (s.nodes, s.isolated, s.activated_pairs, s.neighbor_edges, s.self_edges),
            (0, 0, 0, 0, 0)
        );
        assert!(s.layers.iter().all(|l| l.active == 0 && l.out_edges == 0));
    }

    #[test]
    fn isolated_pairs_are_flagged() {
        let g = SpatialGraph::from_index_edges(3, false, [(0, 1, 1.0)]).unwrap();
        let h = build_activity_graph(&g, &mask(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(h.nodes().len(), 3);
        let isolated: Vec<_> = (0..3).map(|k| h.is_isolated(k)).collect();
        assert_eq!(isolated, [false, false, true]);
    }

    #[test]
    fn directed_follows_edge_direction() {
        let g = SpatialGraph::from_index_edges(2, true, [(1, 0, 1.0)]).unwrap();
        let m = mask(&[&[1, 1], &[1, 1]]);
        let h = build_activity_graph(&g, &m).unwrap();
        let neighbor: Vec<_> = h.edges().iter().filter(|e| e.kind() == EdgeKind::Neighbor).collect();
        assert_eq!(neighbor, [&CausalEdge::new(1, 0, 0)]);
    }

    #[test]
    fn generalized_worked_example() {
        // edge A -> B; M(A) = 1010, M(B) = 0101, M_E = 0110. (A0, B1) would
        // connect without the edge mask.
        let g = SpatialGraph::from_index_edges(2, true, [(0, 1, 1.0)]).unwrap();
        let m = mask(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        assert_eq!(build_activity_graph(&g, &m).unwrap().edges(), &[CausalEdge::new(0, 1, 0), CausalEdge::new(0, 1, 2)]);
        let me = EdgeMask::from_bits(BitMatrix::from_fn(1, 4, |_, t| t == 1 || t == 2));
        let h = build_activity_graph_dynamic(&g, &m, &me).unwrap();
        assert_eq!(h.edges(), &[CausalEdge::new(0, 1, 2)]);
    }

    #[test]
    fn all_zero_edge_mask_leaves_self_chains() {
        let g = SpatialGraph::from_index_edges(3, false, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let m = ActivationMask::from_fn(3, 5, |_, _| true);
        let me = EdgeMask::from_bits(BitMatrix::new(2, 5));
        let h = build_activity_graph_dynamic(&g, &m, &me).unwrap();
        assert_eq!(h.edges().len(), 3 * 4);
        assert!(h.edges().iter().all(|e| e.kind() == EdgeKind::SelfEdge));
    }

    #[test]
    fn dimension_mismatch() {
        let g = SpatialGraph::from_index_edges(3, false, [(0, 1, 1.0)]).unwrap();
        let m = ActivationMask::from_fn(2, 4, |_, _| true);
        assert!(matches!(
            build_activity_graph(&g, &m),
            Err(Error::DimensionMismatch { .. })
        ));
        let m = ActivationMask::from_fn(3, 4, |_, _| true);
        let me = EdgeMask::from_bits(BitMatrix::new(1, 5));
        assert!(build_activity_graph_dynamic(&g, &m, &me).is_err());
    }

    #[test]
    fn activation_vectors_have_t_minus_one_bits() {
        for steps in [1usize, 2, 63, 64, 65, 129] {
            let m = ActivationMask::from_fn(2, steps, |_, _| true);
            let u = edge_activation(&m, 0, 1);
            assert_eq!(u.len(), words_for(steps - 1));
            let ones: usize = u.iter().map(|w| w.count_ones() as usize).sum();
            assert_eq!(ones, steps - 1);
            assert_eq!(self_activation(&m, 0), u);
        }
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let g = SpatialGraph::from_index_edges(
            5,
            false,
            [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (4, 0, 1.0)],
        )
        .unwrap();
        let m = ActivationMask::from_fn(5, 70, |i, t| (i * 7 + t * 3) % 5 < 2);
        let one = Builder::new(&g, &m).workers(1).build().unwrap();
        for w in [2, 3, 8, 16] {
            assert_eq!(Builder::new(&g, &m).workers(w).build().unwrap(), one);
        }
        one.check_invariants(Some(&g), Some(&m)).unwrap();
    }

    #[test]
    fn from_parts_adds_endpoints() {
        let h = CausalActivityGraph::from_parts(
            3,
            3,
            [LayerNode::new(2, 0)],
            [CausalEdge::new(0, 1, 1), CausalEdge::new(0, 1, 1)],
        )
        .unwrap();
        assert_eq!(h.nodes().len(), 3);
        assert_eq!(h.edges().len(), 1);
        assert!(h.is_isolated(0));
        assert!(CausalActivityGraph::from_parts(3, 2, [], [CausalEdge::new(0, 1, 1)]).is_err());
    }
}
