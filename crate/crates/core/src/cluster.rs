//! Lloyd's k-means over static feature vectors, silhouette width and a
//! scan over k.
//!
//! Points are processed in a canonical order (sorted by their sparse entries)
//! so that results do not depend on input order. Initialisation is k-means++
//! driven by the configured seed; the best of `restarts` runs by WCSS wins.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::features::StaticFeatureVector;

/// Above this many points the silhouette is computed on a seeded uniform
/// subsample of this size.
pub const SILHOUETTE_SAMPLE_LIMIT: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KMeansConfig {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub restarts: usize,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            seed,
            max_iter: 300,
            restarts: 10,
        }
    }

    pub fn max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts.max(1);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterModel {
    pub k: usize,
    pub seed: u64,
    /// Dense centroids of length `N`.
    pub centroids: Vec<Vec<f64>>,
    /// Cluster of each input vector, in input order.
    pub assignments: Vec<usize>,
    pub wcss: f64,
    pub iterations: usize,
    pub converged: bool,
    /// WCSS after each Lloyd iteration of the selected run.
    pub wcss_history: Vec<f64>,
}

impl ClusterModel {
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }

    /// Recomputes WCSS densely and checks centroid means and nearest-centroid
    /// assignment.
    pub fn check_invariants(&self, vectors: &[StaticFeatureVector]) -> Result<()> {
        use alloc::format;
        if self.assignments.len() != vectors.len() || self.centroids.len() != self.k {
            return Err(Error::Invariant("cluster model shape mismatch".into()));
        }
        if self.cluster_sizes().iter().sum::<usize>() != vectors.len() {
            return Err(Error::Invariant("cluster sizes do not cover all points".into()));
        }
        let dense: Vec<Vec<f64>> = vectors.iter().map(StaticFeatureVector::to_dense).collect();
        let dist = |x: &[f64], c: &[f64]| x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        let mut wcss = 0.0;
        for (i, x) in dense.iter().enumerate() {
            let d: Vec<f64> = self.centroids.iter().map(|c| dist(x, c)).collect();
            let own = d[self.assignments[i]];
            wcss += own;
            if self.converged {
                let best = d.iter().copied().fold(f64::INFINITY, f64::min);
                if own > best + 1e-9 * (1.0 + best) {
                    return Err(Error::Invariant(format!("point {i} is not assigned to its nearest centroid")));
                }
            }
        }
        if (wcss - self.wcss).abs() > 1e-8 * wcss.abs().max(1e-300) + 1e-12 {
            return Err(Error::Invariant(format!("stored wcss {} != recomputed {wcss}", self.wcss)));
        }
        Ok(())
    }
}

fn compare_vectors(a: &StaticFeatureVector, b: &StaticFeatureVector) -> Ordering {
    for (x, y) in a.entries().iter().zip(b.entries()) {
        let ord = x.0.cmp(&y.0).then_with(|| x.1.total_cmp(&y.1));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    a.entries().len().cmp(&b.entries().len())
}

struct Centroids {
    dense: Vec<Vec<f64>>,
    norm_sq: Vec<f64>,
}

impl Centroids {
    fn new(dense: Vec<Vec<f64>>) -> Self {
        let norm_sq = dense.iter().map(|c| c.iter().map(|v| v * v).sum()).collect();
        Self { dense, norm_sq }
    }

    /// `||x - c||^2` evaluated over the support of `x`; the remainder
    /// `||c||^2 - sum_{j in supp x} c_j^2` is summed in index order so it is
    /// exactly zero when `c` lives on the support of `x`.
    #[inline]
    fn distance(&self, x: &StaticFeatureVector, c: usize) -> f64 {
        let centroid = &self.dense[c];
        let mut inside = 0.0;
        let mut c_inside = 0.0;
        for &(j, v) in x.entries() {
            let cj = centroid[j as usize];
            inside += (v - cj) * (v - cj);
            c_inside += cj * cj;
        }
        inside + (self.norm_sq[c] - c_inside).max(0.0)
    }

    fn nearest(&self, x: &StaticFeatureVector) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for c in 0..self.dense.len() {
            let d = self.distance(x, c);
            if d < best.1 {
                best = (c, d);
            }
        }
        best
    }
}

#[cfg(feature = "parallel")]
fn assign(points: &[&StaticFeatureVector], centroids: &Centroids) -> Vec<(usize, f64)> {
    use rayon::prelude::*;
    points.par_iter().map(|x| centroids.nearest(x)).collect()
}

#[cfg(not(feature = "parallel"))]
fn assign(points: &[&StaticFeatureVector], centroids: &Centroids) -> Vec<(usize, f64)> {
    points.iter().map(|x| centroids.nearest(x)).collect()
}

fn means(points: &[&StaticFeatureVector], labels: &[usize], k: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (x, &l) in points.iter().zip(labels) {
        counts[l] += 1;
        for &(j, v) in x.entries() {
            sums[l][j as usize] += v;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        if c > 0 {
            let n = c as f64;
            s.iter_mut().for_each(|v| *v /= n);
        }
    }
    sums
}

fn plus_plus_init(points: &[&StaticFeatureVector], k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = points.len();
    let mut chosen = vec![rng.random_range(0..n)];
    let mut d2: Vec<f64> = points.iter().map(|x| x.distance_sq(points[chosen[0]])).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut r = rng.random::<f64>() * total;
            let mut pick = None;
            for (i, &d) in d2.iter().enumerate() {
                if d > 0.0 {
                    pick = Some(i);
                    if r < d {
                        break;
                    }
                    r -= d;
                }
            }
            pick.expect("positive mass")
        } else {
            (0..n).find(|i| !chosen.contains(i)).expect("k <= n")
        };
        chosen.push(next);
        for (i, x) in points.iter().enumerate() {
            d2[i] = d2[i].min(x.distance_sq(points[next]));
        }
    }
    chosen
}

struct Run {
    labels: Vec<usize>,
    centroids: Vec<Vec<f64>>,
    wcss: f64,
    iterations: usize,
    converged: bool,
    history: Vec<f64>,
}

fn lloyd(points: &[&StaticFeatureVector], k: usize, max_iter: usize, rng: &mut ChaCha8Rng) -> Run {
    let dim = points[0].dim();
    let init = plus_plus_init(points, k, rng);
    let mut centroids = Centroids::new(init.iter().map(|&i| points[i].to_dense()).collect());
    let mut labels = vec![usize::MAX; points.len()];
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let nearest = assign(points, &centroids);
        let mut next: Vec<usize> = nearest.iter().map(|a| a.0).collect();
        let mut dist: Vec<f64> = nearest.iter().map(|a| a.1).collect();
        repair_empty(&mut next, &mut dist, k);
        let changed = next != labels;
        labels = next;
        centroids = Centroids::new(means(points, &labels, k, dim));
        history.push(wcss_of(points, &labels, &centroids));
        if !changed {
            converged = true;
            break;
        }
    }
    Run {
        wcss: *history.last().expect("at least one iteration"),
        labels,
        centroids: centroids.dense,
        iterations,
        converged,
        history,
    }
}

/// Moves the point farthest from its centroid (lowest index on ties) into
/// each empty cluster, taking only from clusters with more than one point.
fn repair_empty(labels: &mut [usize], dist: &mut [f64], k: usize) {
    let mut sizes = vec![0usize; k];
    for &l in labels.iter() {
        sizes[l] += 1;
    }
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let mut far: Option<usize> = None;
        for i in 0..labels.len() {
            if sizes[labels[i]] > 1 && far.is_none_or(|f| dist[i] > dist[f]) {
                far = Some(i);
            }
        }
        let Some(i) = far else { return };
        sizes[labels[i]] -= 1;
        labels[i] = empty;
        sizes[empty] = 1;
        dist[i] = 0.0;
    }
}

fn wcss_of(points: &[&StaticFeatureVector], labels: &[usize], centroids: &Centroids) -> f64 {
    points.iter().zip(labels).map(|(x, &l)| centroids.distance(x, l)).sum()
}

fn check_dims(vectors: &[StaticFeatureVector]) -> Result<()> {
    if let Some(first) = vectors.first() {
        if let Some(bad) = vectors.iter().find(|v| v.dim() != first.dim()) {
            return Err(Error::DimensionMismatch {
                what: "feature vector dimension",
                expected: first.dim(),
                found: bad.dim(),
            });
        }
    }
    Ok(())
}

pub fn kmeans(vectors: &[StaticFeatureVector], config: &KMeansConfig) -> Result<ClusterModel> {
    let n = vectors.len();
    if config.k == 0 || config.k > n {
        return Err(Error::InvalidK { k: config.k, n });
    }
    check_dims(vectors)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| compare_vectors(&vectors[a], &vectors[b]));
    let points: Vec<&StaticFeatureVector> = order.iter().map(|&i| &vectors[i]).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<Run> = None;
    for _ in 0..config.restarts.max(1) {
        let run = lloyd(&points, config.k, config.max_iter.max(1), &mut rng);
        if best.as_ref().is_none_or(|b| run.wcss < b.wcss) {
            best = Some(run);
        }
    }
    let run = best.expect("at least one restart");
    let mut assignments = vec![0; n];
    for (pos, &orig) in order.iter().enumerate() {
        assignments[orig] = run.labels[pos];
    }
    Ok(ClusterModel {
        k: config.k,
        seed: config.seed,
        centroids: run.centroids,
        assignments,
        wcss: run.wcss,
        iterations: run.iterations,
        converged: run.converged,
        wcss_history: run.history,
    })
}

/// Mean silhouette width with Euclidean distance. Clusters of size one
/// contribute zero, as do points with `a = b = 0`.
pub fn silhouette(vectors: &[StaticFeatureVector], model: &ClusterModel) -> Result<f64> {
    if model.k < 2 {
        return Err(Error::InvalidK {
            k: model.k,
            n: vectors.len(),
        });
    }
    if model.assignments.len() != vectors.len() {
        return Err(Error::DimensionMismatch {
            what: "assignments vs vectors",
            expected: vectors.len(),
            found: model.assignments.len(),
        });
    }
    let sample: Vec<usize> = if vectors.len() > SILHOUETTE_SAMPLE_LIMIT {
        let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
        let mut idx: Vec<usize> = (0..vectors.len()).collect();
        for i in 0..SILHOUETTE_SAMPLE_LIMIT {
            let j = rng.random_range(i..idx.len());
            idx.swap(i, j);
        }
        idx.truncate(SILHOUETTE_SAMPLE_LIMIT);
        idx.sort_unstable();
        idx
    } else {
        (0..vectors.len()).collect()
    };
    if sample.is_empty() {
        return Ok(0.0);
    }
    let labels: Vec<usize> = sample.iter().map(|&i| model.assignments[i]).collect();
    let mut sizes = vec![0usize; model.k];
    for &l in &labels {
        sizes[l] += 1;
    }
    let mut total = 0.0;
    let mut sums = vec![0.0; model.k];
    for (a, &i) in sample.iter().enumerate() {
        let own = labels[a];
        if sizes[own] <= 1 {
            continue;
        }
        sums.iter_mut().for_each(|s| *s = 0.0);
        for (b, &j) in sample.iter().enumerate() {
            if a != b {
                sums[labels[b]] += libm::sqrt(vectors[i].distance_sq(&vectors[j]));
            }
        }
        let within = sums[own] / (sizes[own] - 1) as f64;
        let nearest_other = (0..model.k)
            .filter(|&c| c != own && sizes[c] > 0)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        if !nearest_other.is_finite() {
            continue;
        }
        let scale = within.max(nearest_other);
        if scale > 0.0 {
            total += (nearest_other - within) / scale;
        }
    }
    Ok(total / sample.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub k: usize,
    pub wcss: f64,
    /// `None` for `k = 1`.
    pub silhouette: Option<f64>,
}

/// Runs k-means for every k in `range` with the seed and limits of `base`.
pub fn scan_k(vectors: &[StaticFeatureVector], range: RangeInclusive<usize>, base: &KMeansConfig) -> Result<Vec<ScanRow>> {
    if range.is_empty() {
        return Err(Error::EmptyRange);
    }
    range
        .map(|k| {
            let model = kmeans(vectors, &KMeansConfig { k, ..*base })?;
            let silhouette = if k >= 2 { Some(silhouette(vectors, &model)?) } else { None };
            Ok(ScanRow {
                k,
                wcss: model.wcss,
                silhouette,
            })
        })
        .collect()
}

/// Adjusted Rand index between two labelings of the same items.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings differ in length");
    let n = a.len() as f64;
    let pairs = |x: f64| x * (x - 1.0) / 2.0;
    let mut table: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cols: BTreeMap<usize, usize> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&c| pairs(c as f64)).sum();
    let sum_a: f64 = rows.values().map(|&c| pairs(c as f64)).sum();
    let sum_b: f64 = cols.values().map(|&c| pairs(c as f64)).sum();
    let expected = if n > 1.0 { sum_a * sum_b / pairs(n) } else { 0.0 };
    let max = (sum_a + sum_b) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}
