//! Seeded k-means with k-means++ initialization, shared by the
//! synthesizer (user clustering) and the cluster anonymizer.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::{Error, Result};

pub struct KMeans {
    pub centroids: Vec<Vec<f64>>,
    /// Index of the centroid owning each input point. Ties break to
    /// the lowest centroid index.
    pub assignment: Vec<usize>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(point, centroid);
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

/// Samples an index proportionally to `weights`. Falls back to index 0
/// when all weights vanish.
fn weighted_index(weights: &[f64], rng: &mut StdRng) -> usize {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return 0;
    }
    let mut u = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        u -= w;
        if u <= 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

pub fn kmeans(points: &[Vec<f64>], k: usize, max_iters: usize, seed: u64) -> Result<KMeans> {
    if k == 0 {
        return Err(Error::Config("k-means requires k >= 1".to_string()));
    }
    if points.len() < k {
        return Err(Error::Config(format!(
            "k-means requires at least k = {k} points, got {}",
            points.len()
        )));
    }
    let mut rng = StdRng::seed_from_u64(seed);

    // k-means++: first centroid uniform, the rest D^2-weighted.
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    centroids.push(points[rng.random_range(0..points.len())].clone());
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let pick = weighted_index(&d2, &mut rng);
        centroids.push(points[pick].clone());
        let new = centroids.last().unwrap();
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, new));
        }
    }

    let dim = points[0].len();
    let mut assignment: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
    for _ in 0..max_iters {
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &a) in points.iter().zip(&assignment) {
            counts[a] += 1;
            for (s, v) in sums[a].iter_mut().zip(p) {
                *s += v;
            }
        }
        for c in 0..k {
            // An emptied cluster keeps its previous centroid.
            if counts[c] > 0 {
                for s in sums[c].iter_mut() {
                    *s /= counts[c] as f64;
                }
                centroids[c] = std::mem::take(&mut sums[c]);
            }
        }
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
        if next == assignment {
            break;
        }
        assignment = next;
    }
    Ok(KMeans {
        centroids,
        assignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separates_two_obvious_blobs() {
        let mut points = Vec::new();
        for i in 0..10 {
            points.push(vec![0.0 + 0.01 * i as f64, 0.0]);
            points.push(vec![10.0 + 0.01 * i as f64, 10.0]);
        }
        let r = kmeans(&points, 2, 100, 42).unwrap();
        let a0 = r.assignment[0];
        for i in 0..points.len() {
            if i % 2 == 0 {
                assert_eq!(r.assignment[i], a0);
            } else {
                assert_ne!(r.assignment[i], a0);
            }
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let points: Vec<Vec<f64>> = (0..50)
            .map(|i| vec![(i % 7) as f64, (i % 11) as f64])
            .collect();
        let a = kmeans(&points, 4, 100, 9).unwrap();
        let b = kmeans(&points, 4, 100, 9).unwrap();
        assert_eq!(a.assignment, b.assignment);
        assert_eq!(a.centroids, b.centroids);
    }

    #[test]
    fn k_larger_than_points_rejected() {
        let points = vec![vec![0.0], vec![1.0]];
        assert!(kmeans(&points, 3, 10, 1).is_err());
    }
}
