use cmg_core::cluster::{adjusted_rand_index, kmeans, scan_k, silhouette};
use cmg_core::{KMeansConfig, StaticFeatureVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `per` points in a box of half-width `spread` around each centre.
fn clouds(centres: &[Vec<f64>], per: usize, spread: f64, seed: u64) -> (Vec<StaticFeatureVector>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (label, c) in centres.iter().enumerate() {
        for _ in 0..per {
            let x: Vec<f64> = c.iter().map(|v| v + rng.random_range(-spread..spread)).collect();
            points.push(StaticFeatureVector::from_dense(&x));
            labels.push(label);
        }
    }
    (points, labels)
}

fn uniform(n: usize, dim: usize, seed: u64) -> Vec<StaticFeatureVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| StaticFeatureVector::from_dense(&(0..dim).map(|_| rng.random::<f64>()).collect::<Vec<_>>()))
        .collect()
}

fn sparse_counts(n: usize, dim: usize, seed: u64) -> Vec<StaticFeatureVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let entries: Vec<(u32, f64)> = (0..rng.random_range(1..6))
                .map(|_| (rng.random_range(0..dim as u32), rng.random_range(1..5) as f64))
                .collect();
            StaticFeatureVector::from_entries(dim, entries).normalized()
        })
        .collect()
}

fn three_clouds(seed: u64) -> (Vec<StaticFeatureVector>, Vec<usize>) {
    let centres = vec![vec![0.0, 0.0, 0.0], vec![6.0, 0.0, 1.0], vec![2.0, 7.0, -3.0]];
    clouds(&centres, 30, 0.8, seed)
}

fn all_fixtures() -> Vec<Vec<StaticFeatureVector>> {
    vec![
        uniform(120, 4, 1),
        sparse_counts(200, 30, 2),
        three_clouds(3).0,
        clouds(&[vec![0.0; 5], vec![10.0; 5]], 20, 0.5, 4).0,
    ]
}

#[test]
fn wcss_never_increases() {
    for (f, points) in all_fixtures().iter().enumerate() {
        for k in 1..=8 {
            for seed in 0..5 {
                let model = kmeans(points, &KMeansConfig::new(k, seed).restarts(1)).unwrap();
                for w in model.wcss_history.windows(2) {
                    assert!(w[1] <= w[0], "fixture {f} k {k} seed {seed}: {} > {}", w[1], w[0]);
                }
                assert_eq!(model.cluster_sizes().iter().sum::<usize>(), points.len());
                model.check_invariants(points).unwrap();
            }
        }
    }
}

#[test]
fn one_cluster_per_point_has_zero_wcss() {
    for points in all_fixtures() {
        let model = kmeans(&points, &KMeansConfig::new(points.len(), 9)).unwrap();
        assert_eq!(model.wcss, 0.0);
        assert!(model.cluster_sizes().iter().all(|&s| s == 1));
    }
}

#[test]
fn single_cluster_is_mean() {
    let (points, _) = three_clouds(11);
    let model = kmeans(&points, &KMeansConfig::new(1, 0)).unwrap();
    let dense: Vec<Vec<f64>> = points.iter().map(|p| p.to_dense()).collect();
    let n = dense.len() as f64;
    let mean: Vec<f64> = (0..3).map(|j| dense.iter().map(|x| x[j]).sum::<f64>() / n).collect();
    for (a, b) in model.centroids[0].iter().zip(&mean) {
        assert!((a - b).abs() < 1e-12);
    }
    let total: f64 = dense.iter().map(|x| x.iter().zip(&mean).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()).sum();
    assert!((model.wcss - total).abs() < 1e-9 * total);
}

#[test]
fn two_clouds_split_perfectly() {
    let (points, truth) = clouds(&[vec![0.0; 5], vec![10.0; 5]], 20, 0.5, 4);
    let model = kmeans(&points, &KMeansConfig::new(2, 1)).unwrap();
    assert_eq!(adjusted_rand_index(&model.assignments, &truth), 1.0);
    assert!(silhouette(&points, &model).unwrap() > 0.8);
}

#[test]
fn input_order_does_not_matter() {
    let points = sparse_counts(150, 25, 8);
    let model = kmeans(&points, &KMeansConfig::new(4, 3)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut perm: Vec<usize> = (0..points.len()).collect();
    perm.shuffle(&mut rng);
    let shuffled: Vec<_> = perm.iter().map(|&i| points[i].clone()).collect();
    let other = kmeans(&shuffled, &KMeansConfig::new(4, 3)).unwrap();
    assert_eq!(other.wcss, model.wcss);
    assert_eq!(other.centroids, model.centroids);
    for (pos, &i) in perm.iter().enumerate() {
        assert_eq!(other.assignments[pos], model.assignments[i]);
    }
}

#[test]
fn silhouette_is_bounded_and_peaks_at_planted_k() {
    let (points, truth) = three_clouds(21);
    let rows = scan_k(&points, 2..=6, &KMeansConfig::new(0, 5)).unwrap();
    assert_eq!(rows.iter().map(|r| r.k).collect::<Vec<_>>(), vec![2, 3, 4, 5, 6]);
    for r in &rows {
        let s = r.silhouette.unwrap();
        assert!((-1.0..=1.0).contains(&s));
    }
    let best = rows.iter().max_by(|a, b| a.silhouette.partial_cmp(&b.silhouette).unwrap()).unwrap();
    assert_eq!(best.k, 3);

    let seeds: Vec<Vec<usize>> = (0..5).map(|s| kmeans(&points, &KMeansConfig::new(3, s)).unwrap().assignments).collect();
    for a in &seeds {
        assert!(adjusted_rand_index(a, &truth) >= 0.95);
        for b in &seeds {
            assert!(adjusted_rand_index(a, b) >= 0.95);
        }
    }

    let noise = uniform(90, 3, 6);
    for points in [&noise, &points] {
        for k in 2..=6 {
            let s = silhouette(points, &kmeans(points, &KMeansConfig::new(k, 0)).unwrap()).unwrap();
            assert!((-1.0..=1.0).contains(&s));
        }
    }
}

#[test]
fn planted_k_beats_two_on_structured_data() {
    let (points, _) = three_clouds(5);
    let s2 = silhouette(&points, &kmeans(&points, &KMeansConfig::new(2, 0)).unwrap()).unwrap();
    let s3 = silhouette(&points, &kmeans(&points, &KMeansConfig::new(3, 0)).unwrap()).unwrap();
    assert!(s3 > s2);
}

#[test]
fn scan_single_row() {
    let (points, _) = three_clouds(1);
    assert_eq!(scan_k(&points, 2..=2, &KMeansConfig::new(0, 0)).unwrap().len(), 1);
}

#[test]
fn seeded_runs_repeat() {
    let points = sparse_counts(300, 40, 12);
    let a = kmeans(&points, &KMeansConfig::new(5, 77)).unwrap();
    let b = kmeans(&points, &KMeansConfig::new(5, 77)).unwrap();
    assert_eq!(a, b);
}
