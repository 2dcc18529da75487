//! Dynamic activated components: weakly connected components of `H`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::build::{CausalActivityGraph, CausalEdge, LayerNode};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// One spatio-temporal activity pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicComponent {
    /// Smallest member in `(layer, node)` order.
    pub id: LayerNode,
    /// Sorted by `(layer, node)`.
    pub members: Vec<LayerNode>,
    /// Internal causal edges in canonical order.
    pub edges: Vec<CausalEdge>,
    /// Number of layers spanned.
    pub width: usize,
    /// Number of distinct spatial nodes.
    pub spatial_spread: usize,
    pub start_layer: u32,
    pub end_layer: u32,
}

impl DynamicComponent {
    /// Computes the statistics of a component from its members and edges.
    /// Edge endpoints are added to the member set.
    pub fn from_parts(members: impl IntoIterator<Item = LayerNode>, edges: impl IntoIterator<Item = CausalEdge>) -> Result<Self> {
        let mut edges: Vec<CausalEdge> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        let mut members: Vec<LayerNode> = members.into_iter().collect();
        members.extend(edges.iter().flat_map(|e| [e.source(), e.target()]));
        members.sort_unstable();
        members.dedup();
        let Some(&id) = members.first() else {
            return Err(Error::Invariant("component without members".into()));
        };
        Ok(Self::with_sorted(members, edges, id))
    }

    fn with_sorted(members: Vec<LayerNode>, edges: Vec<CausalEdge>, id: LayerNode) -> Self {
        let start_layer = id.layer;
        let end_layer = members.last().map_or(start_layer, |m| m.layer);
        let spatial_spread = members.iter().map(|m| m.node).collect::<BTreeSet<_>>().len();
        Self {
            id,
            width: (end_layer - start_layer) as usize + 1,
            spatial_spread,
            start_layer,
            end_layer,
            members,
            edges,
        }
    }

    pub fn num_members(&self) -> usize {
        self.members.len()
    }

    /// Distinct spatial nodes in ascending order.
    pub fn spatial_nodes(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.members.iter().map(|m| m.node).collect();
        set.into_iter().collect()
    }

    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: alloc::string::String| Err(Error::Invariant(format!("component {:?}: {msg}", self.id)));
        if self.members.len() < 2 {
            return fail("fewer than two members".into());
        }
        let layers: BTreeSet<u32> = self.members.iter().map(|m| m.layer).collect();
        if layers.len() != self.width || self.width != (self.end_layer - self.start_layer) as usize + 1 {
            return fail(format!("layers {layers:?} not contiguous over width {}", self.width));
        }
        let index = |p: LayerNode| self.members.binary_search(&p).ok();
        let mut uf = UnionFind::new(self.members.len());
        for e in &self.edges {
            match (index(e.source()), index(e.target())) {
                (Some(a), Some(b)) => {
                    uf.union(a, b);
                }
                _ => return fail(format!("edge {e:?} leaves the component")),
            }
        }
        let root = uf.find(0);
        if (1..self.members.len()).any(|k| uf.find(k) != root) {
            return fail("not weakly connected".into());
        }
        Ok(())
    }
}

/// Components of `H` with singletons counted but not retained.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComponentSet {
    /// Sorted by descending member count, then id.
    pub components: Vec<DynamicComponent>,
    pub singletons: usize,
    /// `|V_H|`.
    pub total_nodes: usize,
}

/// Weakly connected components via union-find over the causal edges.
pub fn extract_components(h: &CausalActivityGraph) -> ComponentSet {
    let nodes = h.nodes();
    let mut uf = UnionFind::new(nodes.len());
    let mut edge_ends = Vec::with_capacity(h.edges().len());
    for e in h.edges() {
        let a = h.node_index(e.source()).expect("edge source in V_H");
        let b = h.node_index(e.target()).expect("edge target in V_H");
        uf.union(a, b);
        edge_ends.push(a);
    }

    // Roots are numbered by first appearance in (layer, node) order, which is
    // also the order of each component's smallest member.
    let mut slot_of_root = vec![usize::MAX; nodes.len()];
    let mut slot = vec![0usize; nodes.len()];
    let mut count = 0;
    for (k, s) in slot.iter_mut().enumerate() {
        let root = uf.find(k);
        if slot_of_root[root] == usize::MAX {
            slot_of_root[root] = count;
            count += 1;
        }
        *s = slot_of_root[root];
    }
    let mut members: Vec<Vec<LayerNode>> = vec![Vec::new(); count];
    for (k, n) in nodes.iter().enumerate() {
        members[slot[k]].push(*n);
    }
    let mut edges: Vec<Vec<CausalEdge>> = vec![Vec::new(); members.len()];
    for (e, &a) in h.edges().iter().zip(&edge_ends) {
        edges[slot[a]].push(*e);
    }

    let mut singletons = 0;
    let mut components = Vec::new();
    for (m, e) in members.into_iter().zip(edges) {
        if m.len() == 1 {
            singletons += 1;
            continue;
        }
        let id = m[0];
        components.push(DynamicComponent::with_sorted(m, e, id));
    }
    components.sort_by(|a, b| b.members.len().cmp(&a.members.len()).then(a.id.cmp(&b.id)));
    ComponentSet {
        components,
        singletons,
        total_nodes: nodes.len(),
    }
}

impl ComponentSet {
    pub fn check_invariants(&self, h: &CausalActivityGraph) -> Result<()> {
        let members: usize = self.components.iter().map(|c| c.members.len()).sum();
        if members + self.singletons != h.nodes().len() {
            return Err(Error::Invariant(format!(
                "{members} members + {} singletons != {} nodes",
                self.singletons,
                h.nodes().len()
            )));
        }
        let edges: usize = self.components.iter().map(|c| c.edges.len()).sum();
        if edges != h.edges().len() {
            return Err(Error::Invariant(format!(
                "{edges} component edges != {} edges of H",
                h.edges().len()
            )));
        }
        for c in &self.components {
            c.check_invariants()?;
        }
        Ok(())
    }
}

/// One row of the largest-components table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SummaryRow {
    pub num_members: usize,
    pub width: usize,
    pub spatial_spread: usize,
    pub start_layer: u32,
    pub end_layer: u32,
}

pub fn component_summary(components: &[DynamicComponent]) -> Vec<SummaryRow> {
    components
        .iter()
        .map(|c| SummaryRow {
            num_members: c.members.len(),
            width: c.width,
            spatial_spread: c.spatial_spread,
            start_layer: c.start_layer,
            end_layer: c.end_layer,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activation::ActivationMask;
    use crate::build::build_activity_graph;
    use crate::graph::SpatialGraph;

    #[test]
    fn two_self_chains() {
        let g = SpatialGraph::from_index_edges(2, false, []).unwrap();
        let m = ActivationMask::from_fn(2, 4, |i, t| if i == 0 { t < 3 } else { t >= 2 });
        let h = build_activity_graph(&g, &m).unwrap();
        let set = extract_components(&h);
        let stats: Vec<_> = set
            .components
            .iter()
            .map(|c| (c.num_members(), c.width, c.spatial_spread))
            .collect();
        assert_eq!(stats, [(3, 3, 1), (2, 2, 1)]);
        assert_eq!(set.singletons, 0);
        set.check_invariants(&h).unwrap();
        let rows = component_summary(&set.components);
        assert_eq!((rows[0].num_members, rows[0].width, rows[0].spatial_spread), (3, 3, 1));
        assert_eq!((rows[1].start_layer, rows[1].end_layer), (2, 3));
    }

    #[test]
    fn isolated_pair_is_a_singleton() {
        let g = SpatialGraph::from_index_edges(2, false, [(0, 1, 1.0)]).unwrap();
        let m = ActivationMask::from_fn(2, 3, |i, t| i == 1 && t == 1);
        let set = extract_components(&build_activity_graph(&g, &m).unwrap());
        assert!(set.components.is_empty());
        assert_eq!((set.singletons, set.total_nodes), (1, 1));
    }

    #[test]
    fn single_self_edge_is_retained() {
        let g = SpatialGraph::from_index_edges(1, false, []).unwrap();
        let m = ActivationMask::from_fn(1, 2, |_, _| true);
        let set = extract_components(&build_activity_graph(&g, &m).unwrap());
        assert_eq!(set.components.len(), 1);
        assert_eq!(set.components[0].width, 2);
    }

    #[test]
    fn ties_ordered_by_id() {
        let g = SpatialGraph::from_index_edges(3, false, []).unwrap();
        let m = ActivationMask::from_fn(3, 4, |i, t| match i {
            0 => t >= 2,
            1 => t < 2,
            _ => false,
        });
        let set = extract_components(&build_activity_graph(&g, &m).unwrap());
        let ids: Vec<_> = set.components.iter().map(|c| c.id).collect();
        assert_eq!(ids, [LayerNode::new(1, 0), LayerNode::new(0, 2)]);
    }

    #[test]
    fn check_detects_disconnected_parts() {
        let c = DynamicComponent::from_parts([LayerNode::new(0, 0), LayerNode::new(5, 1)], []).unwrap();
        assert!(c.check_invariants().is_err());
        let c = DynamicComponent::from_parts([], [CausalEdge::new(0, 1, 3)]).unwrap();
        c.check_invariants().unwrap();
        assert_eq!((c.start_layer, c.end_layer, c.width, c.spatial_spread), (3, 4, 2, 2));
    }
}
