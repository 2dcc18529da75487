//! Builder timings on random instances and fitted growth exponents.

use std::collections::HashSet;
use std::time::Instant;

use cmg_core::bits::{tail_mask, words_for, BitMatrix};
use cmg_core::build::Builder;
use cmg_core::{ActivationMask, SpatialGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;

/// Mean degree of the random instances.
pub const DEGREE: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub edges: usize,
    pub nodes: usize,
    pub steps: usize,
    pub workers: usize,
    /// Fastest of the repetitions.
    pub ms: f64,
    pub h_edges: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Speedup {
    pub workers: usize,
    pub ms: f64,
    pub speedup: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub by_edges: Vec<BenchRow>,
    pub edge_exponent: Option<f64>,
    pub by_steps: Vec<BenchRow>,
    pub step_exponent: Option<f64>,
    pub speedup: Vec<Speedup>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchConfig {
    pub edge_sizes: Vec<usize>,
    pub fixed_steps: usize,
    pub step_sizes: Vec<usize>,
    pub fixed_edges: usize,
    pub workers: Vec<usize>,
    pub repetitions: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            edge_sizes: (0..5).map(|i| 100_000 << i).collect(),
            fixed_steps: 256,
            step_sizes: (0..5).map(|i| 256 << i).collect(),
            fixed_edges: 100_000,
            workers: vec![1, 2, 4, 8],
            repetitions: 3,
            seed: 0,
        }
    }
}

/// Undirected graph with `edges` distinct edges over `edges * 2 / DEGREE`
/// nodes and a mask where each bit is set with probability 1/16.
pub fn random_instance(edges: usize, steps: usize, seed: u64) -> Result<(SpatialGraph, ActivationMask)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = (edges * 2 / DEGREE).max(2);
    let mut seen = HashSet::with_capacity(edges);
    let mut list = Vec::with_capacity(edges);
    while list.len() < edges {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if seen.insert(key) {
            list.push((key.0, key.1, 1.0));
        }
    }
    let graph = SpatialGraph::from_index_edges(n, false, list)?;
    let stride = words_for(steps);
    let tail = tail_mask(steps);
    let mut words = Vec::with_capacity(n * stride);
    for _ in 0..n {
        for w in 0..stride {
            let bits = rng.random::<u64>() & rng.random::<u64>() & rng.random::<u64>() & rng.random::<u64>();
            words.push(if w + 1 == stride { bits & tail } else { bits });
        }
    }
    let mask = ActivationMask::from_bits(BitMatrix::from_words(n, steps, words)?);
    Ok((graph, mask))
}

pub fn time_build(graph: &SpatialGraph, mask: &ActivationMask, workers: usize, repetitions: usize) -> Result<(f64, usize)> {
    let mut best = f64::INFINITY;
    let mut h_edges = 0;
    for _ in 0..repetitions.max(1) {
        let start = Instant::now();
        let h = Builder::new(graph, mask).workers(workers).build()?;
        best = best.min(start.elapsed().as_secs_f64() * 1e3);
        h_edges = h.edges().len();
    }
    Ok((best, h_edges))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_exponent(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn sweep(sizes: impl Iterator<Item = (usize, usize)>, seed: u64, reps: usize) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for (i, (edges, steps)) in sizes.enumerate() {
        let (g, m) = random_instance(edges, steps, seed.wrapping_add(i as u64))?;
        let (ms, h_edges) = time_build(&g, &m, 1, reps)?;
        log::info!("edges {edges} steps {steps}: {ms:.1} ms, {h_edges} causal edges");
        rows.push(BenchRow { edges, nodes: g.num_nodes(), steps, workers: 1, ms, h_edges });
    }
    Ok(rows)
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    let by_edges = sweep(cfg.edge_sizes.iter().map(|&e| (e, cfg.fixed_steps)), cfg.seed, cfg.repetitions)?;
    let by_steps = sweep(cfg.step_sizes.iter().map(|&t| (cfg.fixed_edges, t)), cfg.seed ^ 0x5eed, cfg.repetitions)?;
    let fit = |rows: &[BenchRow], x: fn(&BenchRow) -> usize| {
        let xs: Vec<f64> = rows.iter().map(|r| x(r) as f64).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.ms).collect();
        fit_exponent(&xs, &ys)
    };
    let edge_exponent = fit(&by_edges, |r| r.edges);
    let step_exponent = fit(&by_steps, |r| r.steps);

    let mut speedup = Vec::new();
    if let Some(&largest) = cfg.edge_sizes.iter().max() {
        let (g, m) = random_instance(largest, cfg.fixed_steps, cfg.seed)?;
        let mut base = None;
        for &w in &cfg.workers {
            let (ms, _) = time_build(&g, &m, w, cfg.repetitions)?;
            let b = *base.get_or_insert(ms);
            speedup.push(Speedup { workers: w, ms, speedup: b / ms });
        }
    }
    Ok(BenchReport { by_edges, edge_exponent, by_steps, step_exponent, speedup })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_of_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
        assert!((fit_exponent(&xs, &ys).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(fit_exponent(&[1.0], &[1.0]), None);
    }

    #[test]
    fn instance_has_requested_size() {
        let (g, m) = random_instance(1000, 100, 1).unwrap();
        assert_eq!(g.num_edges(), 1000);
        assert_eq!(g.num_nodes(), 250);
        assert_eq!(m.num_steps(), 100);
        m.check_invariants().unwrap();
        let density = m.count_active() as f64 / (250.0 * 100.0);
        assert!((density - 1.0 / 16.0).abs() < 0.01);
    }
}
