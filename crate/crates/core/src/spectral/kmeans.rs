//! k-means++ seeding followed by Lloyd iterations, best of several restarts.

use log::debug;
use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

#[derive(Clone, Debug, PartialEq)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    /// `k × d`.
    pub centers: DMatrix<f64>,
    pub inertia: f64,
    pub iterations: usize,
}

fn sq_dist(points: &DMatrix<f64>, i: usize, centers: &DMatrix<f64>, c: usize) -> f64 {
    (0..points.ncols()).map(|d| (points[(i, d)] - centers[(c, d)]).powi(2)).sum()
}

/// Nearest center for every point; ties go to the lowest index.
fn assign(points: &DMatrix<f64>, centers: &DMatrix<f64>) -> (Vec<usize>, Vec<f64>) {
    (0..points.nrows())
        .map(|i| {
            let mut best = (0, f64::INFINITY);
            for c in 0..centers.nrows() {
                let d = sq_dist(points, i, centers, c);
                if d < best.1 {
                    best = (c, d);
                }
            }
            best
        })
        .unzip()
}

fn seed_plus_plus(points: &DMatrix<f64>, k: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let (n, d) = points.shape();
    let mut centers = DMatrix::zeros(k, d);
    let first = rng.random_range(0..n);
    centers.row_mut(0).copy_from(&points.row(first));
    let mut dist: Vec<f64> = (0..n).map(|i| sq_dist(points, i, &centers, 0)).collect();
    for c in 1..k {
        let total: f64 = dist.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &w) in dist.iter().enumerate() {
                if target < w {
                    chosen = i;
                    break;
                }
                target -= w;
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centers.row_mut(c).copy_from(&points.row(pick));
        for (i, slot) in dist.iter_mut().enumerate() {
            *slot = slot.min(sq_dist(points, i, &centers, c));
        }
    }
    centers
}

fn lloyd(points: &DMatrix<f64>, mut centers: DMatrix<f64>, max_iter: usize) -> KMeansResult {
    let (n, d) = points.shape();
    let k = centers.nrows();
    let (mut labels, mut dist) = assign(points, &centers);
    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        let mut sums = DMatrix::<f64>::zeros(k, d);
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[labels[i]] += 1;
            for c in 0..d {
                sums[(labels[i], c)] += points[(i, c)];
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                for e in 0..d {
                    centers[(c, e)] = sums[(c, e)] / counts[c] as f64;
                }
            } else {
                // move the empty center onto the point worst served by its own center
                let far = (0..n)
                    .filter(|&i| counts[labels[i]] > 1)
                    .max_by(|&x, &y| dist[x].total_cmp(&dist[y]).then(y.cmp(&x)));
                if let Some(i) = far {
                    debug!("k-means: re-seeding empty cluster {c} at point {i}");
                    counts[labels[i]] -= 1;
                    counts[c] = 1;
                    labels[i] = c;
                    dist[i] = 0.0;
                    centers.row_mut(c).copy_from(&points.row(i));
                }
            }
        }
        let (next, next_dist) = assign(points, &centers);
        dist = next_dist;
        if next == labels {
            break;
        }
        labels = next;
    }
    KMeansResult {
        inertia: dist.iter().sum(),
        labels,
        centers,
        iterations,
    }
}

/// Clusters the rows of `points` into `k` groups.
///
/// Restarts run in parallel, each on its own random stream; the lowest
/// inertia wins, ties going to the earliest restart.
pub fn kmeans(points: &DMatrix<f64>, k: usize, restarts: usize, max_iter: usize, seed: u64) -> Result<KMeansResult> {
    let n = points.nrows();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("cannot form {k} clusters from {n} points")));
    }
    if restarts == 0 {
        return Err(Error::InvalidParameter("kmeans needs at least one restart".into()));
    }
    let runs: Vec<KMeansResult> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng::stream(seed, Purpose::KMeans, r as u64);
            let centers = seed_plus_plus(points, k, &mut rng);
            lloyd(points, centers, max_iter.max(1))
        })
        .collect();
    let mut best = 0;
    for (r, run) in runs.iter().enumerate() {
        if run.inertia < runs[best].inertia {
            best = r;
        }
    }
    Ok(runs.into_iter().nth(best).expect("restarts >= 1"))
}
