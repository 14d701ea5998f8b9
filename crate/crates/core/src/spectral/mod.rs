//! Spectral initialization: degree regularization, truncated SVD, then
//! k-means on the rows of `U Σ`.

mod kmeans;
mod svd;

pub use kmeans::{kmeans, KMeansResult};
pub use svd::{truncated_svd, truncated_svd_with, SvdOptions, TruncatedSvd};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Entry, SparseBi, WeightedBiAdjacency};
use crate::labels::HardLabels;
use crate::rng::{self, Purpose};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpectralConfig {
    /// Embedding rank; `None` means `min(K, L)`.
    pub rank: Option<usize>,
    /// Degree quantile entering the regularization threshold.
    pub regularization_quantile: f64,
    pub regularize: bool,
    pub kmeans_restarts: usize,
    pub kmeans_max_iter: usize,
    /// Informational only: the k-means approximation factor aimed for.
    pub kappa_target: Option<f64>,
    pub svd_tol: f64,
    pub svd_max_iter: usize,
    pub seed: u64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            rank: None,
            regularization_quantile: 0.9,
            regularize: true,
            kmeans_restarts: 10,
            kmeans_max_iter: 100,
            kappa_target: None,
            svd_tol: 1e-8,
            svd_max_iter: 1000,
            seed: 0,
        }
    }
}

impl SpectralConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.regularization_quantile > 0.0 && self.regularization_quantile <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "regularization_quantile {} must lie in (0, 1]",
                self.regularization_quantile
            )));
        }
        if self.kmeans_restarts == 0 {
            return Err(Error::InvalidParameter("kmeans_restarts must be at least 1".into()));
        }
        if self.rank == Some(0) {
            return Err(Error::InvalidParameter("rank must be at least 1".into()));
        }
        Ok(())
    }
}

/// Nearest-rank quantile of `values` (`q ∈ (0, 1]`).
fn quantile(values: &[f64], q: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

/// `τ = max(q-quantile, 2 · mean)` of the given degrees.
pub fn degree_threshold(degrees: &[f64], q: f64) -> f64 {
    let mean = degrees.iter().sum::<f64>() / degrees.len().max(1) as f64;
    quantile(degrees, q).max(2.0 * mean)
}

fn shrink_factors(degrees: &[f64], tau: f64) -> Vec<f64> {
    degrees
        .iter()
        .map(|&d| if d > tau { tau / d } else { 1.0 })
        .collect()
}

/// Scales every row whose mass exceeds the row threshold down to that
/// threshold, then does the same for columns of the row-scaled matrix.
pub fn regularize_degrees<T: Entry>(a: &SparseBi<T>, cfg: &SpectralConfig) -> WeightedBiAdjacency {
    let q = cfg.regularization_quantile;
    let rows = a.row_sums();
    let row_f = shrink_factors(&rows, degree_threshold(&rows, q));
    let row_scaled = a.scaled(Some(&row_f), None);
    let cols = row_scaled.col_sums();
    let col_f = shrink_factors(&cols, degree_threshold(&cols, q));
    if col_f.iter().all(|&f| f == 1.0) {
        return row_scaled;
    }
    row_scaled.scaled(None, Some(&col_f))
}

/// The `n × r` row embedding `U Σ` used for clustering.
pub fn row_embedding<T: Entry>(a: &SparseBi<T>, rank: usize, cfg: &SpectralConfig) -> Result<nalgebra::DMatrix<f64>> {
    let svd_seed = rng::derive_seed(cfg.seed, Purpose::Svd, 0);
    let opts = SvdOptions {
        tol: cfg.svd_tol,
        max_iter: cfg.svd_max_iter,
    };
    let svd = if cfg.regularize {
        truncated_svd_with(&regularize_degrees(a, cfg), rank, svd_seed, opts)?
    } else {
        truncated_svd_with(a, rank, svd_seed, opts)?
    };
    let mut emb = svd.u;
    for (c, s) in svd.s.iter().enumerate() {
        emb.column_mut(c).scale_mut(*s);
    }
    Ok(emb)
}

/// Row clusters from the spectral embedding of `a` (`k` row classes,
/// `l` column classes).
pub fn spectral_cluster_rows<T: Entry>(a: &SparseBi<T>, k: usize, l: usize, cfg: &SpectralConfig) -> Result<HardLabels> {
    cfg.validate()?;
    if k == 0 || l == 0 {
        return Err(Error::InvalidParameter("class counts must be at least 1".into()));
    }
    let (n, m) = a.shape();
    if k > n {
        return Err(Error::InvalidParameter(format!("cannot form {k} row clusters from {n} rows")));
    }
    let rank = cfg.rank.unwrap_or(k.min(l)).min(n.min(m));
    if rank == 0 {
        return Err(Error::InvalidParameter("matrix has no rows or columns".into()));
    }
    let emb = row_embedding(a, rank, cfg)?;
    let km_seed = rng::derive_seed(cfg.seed, Purpose::KMeans, 0);
    let res = kmeans(&emb, k, cfg.kmeans_restarts, cfg.kmeans_max_iter, km_seed)?;
    HardLabels::new(res.labels, k)
}

/// Column clusters: row clustering of `Aᵀ`.
pub fn spectral_cluster_cols<T: Entry>(a: &SparseBi<T>, k: usize, l: usize, cfg: &SpectralConfig) -> Result<HardLabels> {
    spectral_cluster_rows(&a.transpose(), l, k, cfg)
}
