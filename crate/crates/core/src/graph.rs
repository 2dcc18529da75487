//! The spatial graph and its time-varying edge events.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Bidirectional map between external node IDs and dense indices, in
/// first-seen order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdMap {
    ids: Vec<String>,
    index: BTreeMap<String, u32>,
}

impl IdMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Numeric IDs `"0"..."n-1"`.
    pub fn sequential(n: usize) -> Self {
        let mut map = Self::new();
        for i in 0..n {
            map.intern(&i.to_string());
        }
        map
    }

    /// Builds a map from IDs already in index order. Duplicates are collapsed
    /// onto their first occurrence, so the result may be shorter than the input.
    pub fn from_ids<I, S>(ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut map = Self::new();
        for id in ids {
            map.intern(id.as_ref());
        }
        map
    }

    pub fn intern(&mut self, id: &str) -> u32 {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.ids.len() as u32;
        self.ids.push(id.to_string());
        self.index.insert(id.to_string(), i);
        i
    }

    pub fn get(&self, id: &str) -> Option<u32> {
        self.index.get(id).copied()
    }

    pub fn name(&self, index: u32) -> &str {
        &self.ids[index as usize]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialEdge {
    pub src: u32,
    pub dst: u32,
    pub weight: f64,
}

/// Static spatial graph with dense node indices.
///
/// Undirected edges are stored once with `src < dst`. Edges keep the order in
/// which they were first seen; duplicates are merged by summing weights.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialGraph {
    directed: bool,
    edges: Vec<SpatialEdge>,
    ids: IdMap,
    lookup: BTreeMap<(u32, u32), usize>,
}

impl SpatialGraph {
    /// Graph over `num_nodes` sequentially named nodes from index pairs.
    pub fn from_index_edges<I>(num_nodes: usize, directed: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut builder = GraphBuilder::with_ids(IdMap::sequential(num_nodes), directed);
        for (src, dst, weight) in edges {
            for index in [src, dst] {
                if index >= num_nodes {
                    return Err(Error::NodeOutOfRange { index, num_nodes });
                }
            }
            builder.add_indexed(src as u32, dst as u32, weight)?;
        }
        Ok(builder.build())
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.ids.len()
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[SpatialEdge] {
        &self.edges
    }

    pub fn ids(&self) -> &IdMap {
        &self.ids
    }

    fn key(&self, src: u32, dst: u32) -> (u32, u32) {
        if self.directed || src < dst {
            (src, dst)
        } else {
            (dst, src)
        }
    }

    /// Index of the stored edge joining `src` to `dst`; orientation is
    /// ignored for undirected graphs.
    pub fn edge_index(&self, src: u32, dst: u32) -> Option<usize> {
        self.lookup.get(&self.key(src, dst)).copied()
    }

    pub fn has_edge(&self, src: u32, dst: u32) -> bool {
        self.edge_index(src, dst).is_some()
    }

    /// Oriented `(src, edge index, dst)` triplets: one per directed edge, two
    /// per undirected edge.
    pub fn triplets(&self) -> impl Iterator<Item = (u32, usize, u32)> + '_ {
        let both = !self.directed;
        self.edges.iter().enumerate().flat_map(move |(e, edge)| {
            let forward = Some((edge.src, e, edge.dst));
            let backward = both.then_some((edge.dst, e, edge.src));
            forward.into_iter().chain(backward)
        })
    }

    /// Number of oriented triplets.
    pub fn num_triplets(&self) -> usize {
        if self.directed {
            self.edges.len()
        } else {
            2 * self.edges.len()
        }
    }
}

/// Incremental construction of a [`SpatialGraph`] with validation.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    graph: SpatialGraph,
}

impl GraphBuilder {
    pub fn new(directed: bool) -> Self {
        Self::with_ids(IdMap::new(), directed)
    }

    /// Starts from a pre-seeded ID map so indices follow a known order.
    pub fn with_ids(ids: IdMap, directed: bool) -> Self {
        Self {
            graph: SpatialGraph {
                directed,
                edges: Vec::new(),
                ids,
                lookup: BTreeMap::new(),
            },
        }
    }

    pub fn add_node(&mut self, id: &str) -> u32 {
        self.graph.ids.intern(id)
    }

    pub fn add_edge(&mut self, src: &str, dst: &str, weight: f64) -> Result<()> {
        if src == dst {
            return Err(Error::SelfLoop {
                node: src.to_string(),
            });
        }
        check_weight(src, dst, weight)?;
        let s = self.graph.ids.intern(src);
        let d = self.graph.ids.intern(dst);
        self.insert(s, d, weight);
        Ok(())
    }

    fn add_indexed(&mut self, src: u32, dst: u32, weight: f64) -> Result<()> {
        if src == dst {
            return Err(Error::SelfLoop {
                node: self.graph.ids.name(src).to_string(),
            });
        }
        check_weight(self.graph.ids.name(src), self.graph.ids.name(dst), weight)?;
        self.insert(src, dst, weight);
        Ok(())
    }

    fn insert(&mut self, src: u32, dst: u32, weight: f64) {
        let (src, dst) = self.graph.key(src, dst);
        match self.graph.lookup.get(&(src, dst)) {
            Some(&e) => self.graph.edges[e].weight += weight,
            None => {
                self.graph.lookup.insert((src, dst), self.graph.edges.len());
                self.graph.edges.push(SpatialEdge { src, dst, weight });
            }
        }
    }

    pub fn build(self) -> SpatialGraph {
        self.graph
    }
}

fn check_weight(src: &str, dst: &str, weight: f64) -> Result<()> {
    if weight.is_finite() && weight > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveWeight {
            src: src.to_string(),
            dst: dst.to_string(),
            weight,
        })
    }
}

/// Per-layer existence of spatial edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeEvents {
    num_steps: usize,
    events: Vec<(u32, u32, u32)>,
}

impl EdgeEvents {
    /// Validates `(src, dst, t)` events against `graph`; duplicates collapse.
    pub fn new<I>(graph: &SpatialGraph, num_steps: usize, events: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize)>,
    {
        let n = graph.num_nodes();
        let mut out = Vec::new();
        for (src, dst, t) in events {
            for index in [src, dst] {
                if index >= n {
                    return Err(Error::NodeOutOfRange { index, num_nodes: n });
                }
            }
            if t >= num_steps {
                return Err(Error::LayerOutOfRange {
                    layer: t,
                    num_steps,
                });
            }
            if !graph.has_edge(src as u32, dst as u32) {
                return Err(Error::UnknownEdge { src, dst });
            }
            out.push((src as u32, dst as u32, t as u32));
        }
        out.sort_unstable();
        out.dedup();
        Ok(Self {
            num_steps,
            events: out,
        })
    }

    pub fn num_steps(&self) -> usize {
        self.num_steps
    }

    pub fn events(&self) -> &[(u32, u32, u32)] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}
