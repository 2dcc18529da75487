//! Small-instance check of the builder against the explicit Kronecker-product
//! form of the multilayer adjacency, `W_K = O1 (x) W + O1 (x) I_N`, optionally
//! with the intra-layer term `I_T (x) W`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::activation::ActivationMask;
use crate::build::{build_activity_graph, CausalActivityGraph, LayerNode};
use crate::error::{Error, Result};
use crate::graph::SpatialGraph;

/// Largest `N * T` the verifier accepts.
pub const VERIFY_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub pass: bool,
    pub builder_edges: usize,
    pub definition_edges: usize,
    pub first_mismatch: Option<Mismatch>,
}

/// First edge, in `(source, target)` order, present on one side only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub src: LayerNode,
    pub dst: LayerNode,
    pub in_builder: bool,
    pub in_definition: bool,
}

/// Coordinate-format matrix; duplicate coordinates are summed.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), f64>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.insert(i, i, 1.0);
        }
        m
    }

    /// `O1`: ones on the first upper off-diagonal.
    pub fn upper_shift(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 1..n {
            m.insert(i - 1, i, 1.0);
        }
        m
    }

    /// Weighted adjacency of `graph`, symmetric when undirected.
    pub fn adjacency(graph: &SpatialGraph) -> Self {
        let n = graph.num_nodes();
        let mut m = Self::zeros(n, n);
        for e in graph.edges() {
            m.insert(e.src as usize, e.dst as usize, e.weight);
            if !graph.is_directed() {
                m.insert(e.dst as usize, e.src as usize, e.weight);
            }
        }
        m
    }

    pub fn insert(&mut self, r: usize, c: usize, v: f64) {
        assert!(r < self.rows && c < self.cols);
        *self.entries.entry((r, c)).or_insert(0.0) += v;
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries.get(&(r, c)).copied().unwrap_or(0.0)
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries
            .iter()
            .filter(|(_, v)| **v != 0.0)
            .map(|(&(r, c), &v)| (r, c, v))
    }

    /// `A (x) B` with `(A (x) B)[a*p + i, b*q + j] = A[a, b] * B[i, j]`.
    pub fn kron(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for (a, b, x) in self.nonzeros() {
            for (i, j, y) in other.nonzeros() {
                out.insert(a * other.rows + i, b * other.cols + j, x * y);
            }
        }
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert!(self.rows == other.rows && self.cols == other.cols);
        let mut out = self.clone();
        for (r, c, v) in other.nonzeros() {
            out.insert(r, c, v);
        }
        out
    }
}

/// Full multilayer adjacency over `T` layers; node `i` of layer `t` is at
/// index `t * N + i`.
pub fn multilayer_adjacency(graph: &SpatialGraph, num_layers: usize, include_intra: bool) -> SparseMatrix {
    let w = SparseMatrix::adjacency(graph);
    let shift = SparseMatrix::upper_shift(num_layers);
    let mut wk = shift
        .kron(&w)
        .add(&shift.kron(&SparseMatrix::identity(graph.num_nodes())));
    if include_intra {
        wk = wk.add(&SparseMatrix::identity(num_layers).kron(&w));
    }
    wk
}

/// Builds `H` and compares it with the definition.
pub fn verify_against_definition(
    graph: &SpatialGraph,
    mask: &ActivationMask,
    include_intra: bool,
) -> Result<VerifyReport> {
    guard(graph, mask)?;
    let h = build_activity_graph(graph, mask)?;
    compare_with_definition(graph, mask, &h, include_intra)
}

/// Compares a given `H` with the multilayer adjacency restricted to activated
/// pairs. With `include_intra`, the intra-layer edges between activated
/// neighbours on the same layer of `H` are added to the builder side.
pub fn compare_with_definition(
    graph: &SpatialGraph,
    mask: &ActivationMask,
    h: &CausalActivityGraph,
    include_intra: bool,
) -> Result<VerifyReport> {
    guard(graph, mask)?;
    let n = graph.num_nodes();
    let steps = mask.num_steps();
    let at = |k: usize| LayerNode::new((k % n) as u32, (k / n) as u32);
    let active = |p: LayerNode| mask.get(p.node as usize, p.layer as usize);

    let mut definition: Vec<(LayerNode, LayerNode)> = multilayer_adjacency(graph, steps, include_intra)
        .nonzeros()
        .map(|(r, c, _)| (at(r), at(c)))
        .filter(|&(p, q)| active(p) && active(q))
        .collect();
    definition.sort_unstable();

    let mut built: Vec<(LayerNode, LayerNode)> = h.edges().iter().map(|e| (e.source(), e.target())).collect();
    if include_intra {
        for layer in 0..h.num_layers() {
            for p in h.layer_nodes(layer) {
                for q in h.layer_nodes(layer) {
                    if p.node != q.node && graph.has_edge(p.node, q.node) {
                        built.push((*p, *q));
                    }
                }
            }
        }
    }
    built.sort_unstable();
    built.dedup();

    let first_mismatch = first_difference(&built, &definition);
    Ok(VerifyReport {
        pass: first_mismatch.is_none(),
        builder_edges: built.len(),
        definition_edges: definition.len(),
        first_mismatch,
    })
}

fn guard(graph: &SpatialGraph, mask: &ActivationMask) -> Result<()> {
    let size = graph.num_nodes() * mask.num_steps();
    if size > VERIFY_LIMIT {
        return Err(Error::SizeGuard {
            size,
            limit: VERIFY_LIMIT,
        });
    }
    if mask.num_nodes() != graph.num_nodes() {
        return Err(Error::DimensionMismatch {
            what: "mask rows vs graph nodes",
            expected: graph.num_nodes(),
            found: mask.num_nodes(),
        });
    }
    Ok(())
}

fn first_difference(built: &[(LayerNode, LayerNode)], definition: &[(LayerNode, LayerNode)]) -> Option<Mismatch> {
    let (mut a, mut b) = (0, 0);
    loop {
        match (built.get(a), definition.get(b)) {
            (None, None) => return None,
            (Some(x), Some(y)) if x == y => {
                a += 1;
                b += 1;
            }
            (Some(x), y) if y.is_none_or(|y| x < y) => {
                return Some(Mismatch {
                    src: x.0,
                    dst: x.1,
                    in_builder: true,
                    in_definition: false,
                })
            }
            (_, Some(y)) => {
                return Some(Mismatch {
                    src: y.0,
                    dst: y.1,
                    in_builder: false,
                    in_definition: true,
                })
            }
            (Some(_), None) => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::CausalEdge;

    fn triangle() -> SpatialGraph {
        SpatialGraph::from_index_edges(3, false, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn kron_index_layout() {
        let a = SparseMatrix::upper_shift(2);
        let b = SparseMatrix::identity(3);
        let k = a.kron(&b);
        assert_eq!((k.rows, k.cols), (6, 6));
        let nz: Vec<_> = k.nonzeros().map(|(r, c, _)| (r, c)).collect();
        assert_eq!(nz, [(0, 3), (1, 4), (2, 5)]);
    }

    #[test]
    fn triangle_passes() {
        let g = triangle();
        let m = ActivationMask::from_fn(3, 3, |i, t| (i + 2 * t) % 3 != 0);
        let r = verify_against_definition(&g, &m, false).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.builder_edges > 0);
        assert!(verify_against_definition(&g, &m, true).unwrap().pass);
    }

    #[test]
    fn empty_mask_passes() {
        let g = triangle();
        let m = ActivationMask::from_fn(3, 3, |_, _| false);
        let r = verify_against_definition(&g, &m, false).unwrap();
        assert_eq!((r.pass, r.builder_edges, r.definition_edges), (true, 0, 0));
    }

    #[test]
    fn corrupted_graph_reports_first_mismatch() {
        let g = triangle();
        let m = ActivationMask::from_fn(3, 3, |_, _| true);
        let h = build_activity_graph(&g, &m).unwrap();
        let mut edges = h.edges().to_vec();
        let dropped = edges.remove(1);
        let broken = CausalActivityGraph::from_parts(3, 3, h.nodes().iter().copied(), edges).unwrap();
        let r = compare_with_definition(&g, &m, &broken, false).unwrap();
        assert!(!r.pass);
        let mm = r.first_mismatch.unwrap();
        assert_eq!((mm.src, mm.dst), (dropped.source(), dropped.target()));
        assert!(mm.in_definition && !mm.in_builder);

        let m = ActivationMask::from_fn(3, 3, |i, _| i != 2);
        let h = build_activity_graph(&g, &m).unwrap();
        let mut extra = h.edges().to_vec();
        extra.push(CausalEdge::new(0, 2, 0));
        let broken = CausalActivityGraph::from_parts(3, 3, [], extra).unwrap();
        let r = compare_with_definition(&g, &m, &broken, false).unwrap();
        let mm = r.first_mismatch.unwrap();
        assert_eq!((mm.src, mm.dst), (LayerNode::new(0, 0), LayerNode::new(2, 1)));
        assert!(mm.in_builder && !mm.in_definition);
    }

    #[test]
    fn size_guard() {
        let g = SpatialGraph::from_index_edges(100, false, [(0, 1, 1.0)]).unwrap();
        let m = ActivationMask::from_fn(100, 41, |_, _| false);
        assert!(matches!(
            verify_against_definition(&g, &m, false),
            Err(Error::SizeGuard { size: 4100, .. })
        ));
    }
}
