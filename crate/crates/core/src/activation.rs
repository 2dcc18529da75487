//! Signals, normalisation and thresholding into bit-packed masks.

use alloc::vec::Vec;

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::graph::{EdgeEvents, SpatialGraph};

/// `num_nodes` x `num_steps` real matrix, row `i` is the time series of node `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignalMatrix {
    num_nodes: usize,
    num_steps: usize,
    values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZscoreScope {
    PerNode,
    Global,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Normalization {
    #[default]
    None,
    ZscorePerNode,
    ZscoreGlobal,
}

impl Normalization {
    pub fn scope(self) -> Option<ZscoreScope> {
        match self {
            Normalization::None => None,
            Normalization::ZscorePerNode => Some(ZscoreScope::PerNode),
            Normalization::ZscoreGlobal => Some(ZscoreScope::Global),
        }
    }
}

impl SignalMatrix {
    pub fn new(num_nodes: usize, num_steps: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != num_nodes * num_steps {
            return Err(Error::DimensionMismatch {
                what: "signal values",
                expected: num_nodes * num_steps,
                found: values.len(),
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                node: k / num_steps,
                step: k % num_steps,
            });
        }
        Ok(Self {
            num_nodes,
            num_steps,
            values,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let num_steps = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != num_steps) {
            return Err(Error::DimensionMismatch {
                what: "signal row length",
                expected: num_steps,
                found: bad.len(),
            });
        }
        Self::new(rows.len(), num_steps, rows.concat())
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_steps(&self) -> usize {
        self.num_steps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.num_steps..(i + 1) * self.num_steps]
    }

    pub fn get(&self, i: usize, t: usize) -> f64 {
        self.row(i)[t]
    }

    /// Standardises to zero mean and unit population standard deviation.
    /// Constant rows (or a constant matrix, for the global scope) become zero.
    pub fn zscore(&self, scope: ZscoreScope) -> SignalMatrix {
        let mut values = self.values.clone();
        match scope {
            ZscoreScope::PerNode if self.num_steps > 0 => {
                for row in values.chunks_exact_mut(self.num_steps) {
                    standardize(row);
                }
            }
            ZscoreScope::PerNode => {}
            ZscoreScope::Global => standardize(&mut values),
        }
        SignalMatrix {
            num_nodes: self.num_nodes,
            num_steps: self.num_steps,
            values,
        }
    }

    pub fn normalize(&self, normalization: Normalization) -> SignalMatrix {
        match normalization.scope() {
            Some(scope) => self.zscore(scope),
            None => self.clone(),
        }
    }

    /// `M(i, t) = 1` iff `S(i, t) > mu`.
    pub fn threshold(&self, mu: f64) -> ActivationMask {
        let bits = BitMatrix::from_fn(self.num_nodes, self.num_steps, |i, t| self.get(i, t) > mu);
        ActivationMask {
            bits,
            threshold_used: Some(mu),
            normalization_used: Normalization::None,
        }
    }
}

fn standardize(xs: &mut [f64]) {
    let Some(&first) = xs.first() else { return };
    if xs.iter().all(|&x| x == first) {
        xs.iter_mut().for_each(|x| *x = 0.0);
        return;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let sd = libm::sqrt(var);
    xs.iter_mut().for_each(|x| *x = (*x - mean) / sd);
}

/// Bit-packed activation mask `M`, one row per spatial node.
#[derive(Clone, Debug, PartialEq)]
pub struct ActivationMask {
    bits: BitMatrix,
    threshold_used: Option<f64>,
    normalization_used: Normalization,
}

impl ActivationMask {
    pub fn from_bits(bits: BitMatrix) -> Self {
        Self {
            bits,
            threshold_used: None,
            normalization_used: Normalization::None,
        }
    }

    pub fn from_fn(num_nodes: usize, num_steps: usize, f: impl FnMut(usize, usize) -> bool) -> Self {
        Self::from_bits(BitMatrix::from_fn(num_nodes, num_steps, f))
    }

    /// Normalises `signal` then thresholds at `mu`, recording both.
    pub fn from_signal(signal: &SignalMatrix, normalization: Normalization, mu: f64) -> Self {
        let mut mask = signal.normalize(normalization).threshold(mu);
        mask.normalization_used = normalization;
        mask
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn into_bits(self) -> BitMatrix {
        self.bits
    }

    pub fn num_nodes(&self) -> usize {
        self.bits.rows()
    }

    pub fn num_steps(&self) -> usize {
        self.bits.cols()
    }

    pub fn threshold_used(&self) -> Option<f64> {
        self.threshold_used
    }

    pub fn normalization_used(&self) -> Normalization {
        self.normalization_used
    }

    #[inline]
    pub fn get(&self, node: usize, step: usize) -> bool {
        self.bits.get(node, step)
    }

    pub fn row(&self, node: usize) -> &[u64] {
        self.bits.row(node)
    }

    /// Number of activated `(node, layer)` pairs.
    pub fn count_active(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn check_invariants(&self) -> Result<()> {
        if !self.bits.has_canonical_padding() {
            return Err(Error::Invariant("activation mask padding bits set".into()));
        }
        Ok(())
    }
}

/// Per-edge existence mask `M_E`, one row per stored spatial edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMask {
    bits: BitMatrix,
}

impl EdgeMask {
    pub fn from_events(events: &EdgeEvents, graph: &SpatialGraph) -> Self {
        let mut bits = BitMatrix::new(graph.num_edges(), events.num_steps());
        for &(src, dst, t) in events.events() {
            // Events were validated against the graph at load time.
            let e = graph
                .edge_index(src, dst)
                .expect("edge event refers to a graph edge");
            bits.set(e, t as usize, true);
        }
        Self { bits }
    }

    pub fn all_ones(graph: &SpatialGraph, num_steps: usize) -> Self {
        let mut bits = BitMatrix::new(graph.num_edges(), num_steps);
        for e in 0..graph.num_edges() {
            bits.fill_row(e);
        }
        Self { bits }
    }

    pub fn from_bits(bits: BitMatrix) -> Self {
        Self { bits }
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn num_edges(&self) -> usize {
        self.bits.rows()
    }

    pub fn num_steps(&self) -> usize {
        self.bits.cols()
    }

    pub fn get(&self, edge: usize, step: usize) -> bool {
        self.bits.get(edge, step)
    }

    pub fn row(&self, edge: usize) -> &[u64] {
        self.bits.row(edge)
    }
}
