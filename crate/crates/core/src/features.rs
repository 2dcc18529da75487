//! Static (bag-of-nodes) and dynamic (sub-mask) feature vectors of a component.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::{words_for, Ones, WORD_BITS};
use crate::components::DynamicComponent;

/// Per-node activation counts of one component, stored sparse.
#[derive(Clone, Debug, PartialEq)]
pub struct StaticFeatureVector {
    dim: usize,
    /// `(node, value)` with strictly increasing nodes and non-zero values.
    entries: Vec<(u32, f64)>,
    normalized: bool,
}

impl StaticFeatureVector {
    /// Builds a vector from `(index, value)` pairs; zero values are dropped and
    /// repeated indices summed.
    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (u32, f64)>) -> Self {
        let mut entries: Vec<(u32, f64)> = entries.into_iter().collect();
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(u32, f64)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            assert!((i as usize) < dim, "feature index {i} out of range {dim}");
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += v,
                _ => merged.push((i, v)),
            }
        }
        merged.retain(|e| e.1 != 0.0);
        Self {
            dim,
            entries: merged,
            normalized: false,
        }
    }

    /// Like [`from_entries`](Self::from_entries) for values that already have
    /// unit norm, such as a stored normalised vector. `None` if the norm is
    /// off by more than `1e-9`.
    pub fn from_unit_entries(dim: usize, entries: impl IntoIterator<Item = (u32, f64)>) -> Option<Self> {
        let mut v = Self::from_entries(dim, entries);
        let norm = v.norm();
        if norm != 0.0 && (norm - 1.0).abs() > 1e-9 {
            return None;
        }
        v.normalized = true;
        Some(v)
    }

    pub fn from_dense(values: &[f64]) -> Self {
        Self::from_entries(values.len(), values.iter().enumerate().map(|(i, &v)| (i as u32, v)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn get(&self, i: u32) -> f64 {
        self.entries
            .binary_search_by_key(&i, |e| e.0)
            .map_or(0.0, |k| self.entries[k].1)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for &(i, v) in &self.entries {
            out[i as usize] = v;
        }
        out
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|e| e.1 * e.1).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sq())
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Divides by the Euclidean norm (a zero vector is left unchanged).
    pub fn normalized(mut self) -> Self {
        let norm = self.norm();
        if norm > 0.0 {
            self.entries.iter_mut().for_each(|e| e.1 /= norm);
        }
        self.normalized = true;
        self
    }

    /// Squared Euclidean distance between two sparse vectors.
    pub fn distance_sq(&self, other: &StaticFeatureVector) -> f64 {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        while i < a.len() || j < b.len() {
            let d = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    i += 1;
                    j += 1;
                    x.1 - y.1
                }
                (Some(x), Some(y)) if x.0 < y.0 => {
                    i += 1;
                    x.1
                }
                (Some(x), None) => {
                    i += 1;
                    x.1
                }
                (_, Some(y)) => {
                    j += 1;
                    y.1
                }
                (None, None) => unreachable!(),
            };
            acc += d * d;
        }
        acc
    }
}

/// Counts, for each spatial node, the layers on which it is active inside
/// `dac`. `num_nodes` is the dimension `N` of the spatial graph.
pub fn static_features(dac: &DynamicComponent, num_nodes: usize, normalize: bool) -> StaticFeatureVector {
    let v = StaticFeatureVector::from_entries(num_nodes, dac.members.iter().map(|m| (m.node, 1.0)));
    if normalize {
        v.normalized()
    } else {
        v
    }
}

/// Activation sub-mask of a component over its bounding box, row-major over
/// (sorted spatial nodes) x (layers `start..=end`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicFeatureVector {
    pub nodes: Vec<u32>,
    pub start_layer: u32,
    pub width: usize,
    bits: Vec<u64>,
}

impl DynamicFeatureVector {
    pub fn len(&self) -> usize {
        self.nodes.len() * self.width
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        let k = row * self.width + col;
        self.bits[k / WORD_BITS] >> (k % WORD_BITS) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len())
            .map(|k| self.bits[k / WORD_BITS] >> (k % WORD_BITS) & 1 == 1)
            .collect()
    }

    /// Active `(node, relative layer)` cells in row-major order.
    pub fn active_cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        Ones::new(&self.bits).map(move |k| (self.nodes[k / self.width], (k % self.width) as u32))
    }
}

pub fn dynamic_features(dac: &DynamicComponent) -> DynamicFeatureVector {
    let nodes = dac.spatial_nodes();
    let width = dac.width;
    let mut bits = vec![0u64; words_for(nodes.len() * width)];
    for m in &dac.members {
        let row = nodes.binary_search(&m.node).expect("member node listed");
        let k = row * width + (m.layer - dac.start_layer) as usize;
        bits[k / WORD_BITS] |= 1 << (k % WORD_BITS);
    }
    DynamicFeatureVector {
        nodes,
        start_layer: dac.start_layer,
        width,
        bits,
    }
}
