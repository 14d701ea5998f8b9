//! The bipartite stochastic block model.
//!
//! Row node `i` in class `y_i ∈ [K]` and column node `j` in class `z_j ∈ [L]`
//! connect independently with probability `P[y_i, z_j]`. The block-compressed
//! row counts of node `i` are then approximately product-Poisson with means
//! `Λ[y_i, ·]`, where `Λ = P · diag(n(z))`; the column dual uses
//! `Γᵀ = diag(n(y)) · P`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BiAdjacency, SparseBi, WeightedBiAdjacency};
use crate::info::InfoMatrix;
use crate::labels::HardLabels;
use crate::rng::{self, Purpose};

/// `K × L` matrix of edge probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct Connectivity {
    p: DMatrix<f64>,
}

impl Connectivity {
    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        if p.nrows() == 0 || p.ncols() == 0 {
            return Err(Error::InvalidParameter("connectivity needs K, L >= 1".into()));
        }
        if let Some(v) = p.iter().find(|&&v| !(0.0..=1.0).contains(&v)) {
            return Err(Error::InvalidParameter(format!(
                "connectivity entry {v} is outside [0, 1]"
            )));
        }
        Ok(Self { p })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        let l = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != l) {
            return Err(Error::InvalidParameter("ragged connectivity rows".into()));
        }
        Self::new(DMatrix::from_fn(k, l, |a, b| rows[a][b]))
    }

    /// Planted partition: `a/n` on the diagonal and `b/n` elsewhere.
    pub fn planted_partition(k: usize, a: f64, b: f64, n: usize) -> Result<Self> {
        let n = n as f64;
        Self::new(DMatrix::from_fn(k, k, |r, c| if r == c { a / n } else { b / n }))
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.p.nrows()
    }

    #[inline]
    pub fn l(&self) -> usize {
        self.p.ncols()
    }

    #[inline]
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn transpose(&self) -> Self {
        Self {
            p: self.p.transpose(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.p.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}

/// Nonnegative `K × L` Poisson mean parameters (`Λ`, `Γ`, or a local estimate).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct MeanParams {
    lambda: DMatrix<f64>,
}

impl MeanParams {
    pub fn new(lambda: DMatrix<f64>) -> Result<Self> {
        if lambda.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter("mean parameters must be finite and >= 0".into()));
        }
        Ok(Self { lambda })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        let l = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != l) {
            return Err(Error::InvalidParameter("ragged mean-parameter rows".into()));
        }
        Self::new(DMatrix::from_fn(k, l, |a, b| rows[a][b]))
    }

    pub(crate) fn from_matrix_unchecked(lambda: DMatrix<f64>) -> Self {
        Self { lambda }
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.lambda.nrows()
    }

    #[inline]
    pub fn l(&self) -> usize {
        self.lambda.ncols()
    }

    #[inline]
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.lambda
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.lambda[(k, l)]
    }

    /// `‖Λ‖∞`, the largest entry.
    pub fn max_entry(&self) -> f64 {
        self.lambda.iter().copied().fold(0.0, f64::max)
    }

    /// `Λ_min`, the smallest entry.
    pub fn min_entry(&self) -> f64 {
        self.lambda.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Copy with every entry raised to at least `floor`.
    pub fn clamped(&self, floor: f64) -> Self {
        Self {
            lambda: self.lambda.map(|v| v.max(floor)),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            lambda: &self.lambda * c,
        }
    }

    /// Entrywise sum; used to aggregate local estimates.
    pub fn sum<'a, I: IntoIterator<Item = &'a MeanParams>>(parts: I) -> Option<Self> {
        let mut iter = parts.into_iter();
        let first = iter.next()?.lambda.clone();
        let total = iter.fold(first, |acc, p| acc + &p.lambda);
        Some(Self { lambda: total })
    }

    /// Rows reordered by class permutation: row `perm[k]` of the result is row `k` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let mut out = self.lambda.clone();
        for (k, &pk) in perm.iter().enumerate() {
            out.set_row(pk, &self.lambda.row(k));
        }
        Self { lambda: out }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.lambda.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}

impl TryFrom<Vec<Vec<f64>>> for MeanParams {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        MeanParams::from_rows(&rows)
    }
}

impl From<MeanParams> for Vec<Vec<f64>> {
    fn from(p: MeanParams) -> Self {
        p.to_rows()
    }
}

/// Edge distribution used when sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SampleMode {
    /// `A_ij ~ Bernoulli(P[y_i, z_j])`.
    #[default]
    Bernoulli,
    /// `A_ij ~ Poisson(P[y_i, z_j])`, stored as counts.
    Poisson,
}

/// `Λ = (P_kℓ n_ℓ(z))`, the true row mean parameters. Pass `Pᵀ` and `y` to
/// get `Γ`.
pub fn true_mean_params(p: &Connectivity, z: &HardLabels) -> Result<MeanParams> {
    Error::check_dim("true_mean_params: column classes", p.l(), z.num_classes())?;
    let counts = z.counts();
    let lambda = DMatrix::from_fn(p.k(), p.l(), |k, l| p.matrix()[(k, l)] * counts[l] as f64);
    Ok(MeanParams { lambda })
}

/// `Γ`, the true column mean parameters (`L × K`).
pub fn true_col_mean_params(p: &Connectivity, y: &HardLabels) -> Result<MeanParams> {
    true_mean_params(&p.transpose(), y)
}

/// Draws one network. Rows are sampled in parallel, each from its own
/// counter-based stream, so the output depends only on the arguments.
pub fn sample_sbm(
    p: &Connectivity,
    y: &HardLabels,
    z: &HardLabels,
    seed: u64,
    mode: SampleMode,
) -> Result<BiAdjacency> {
    Error::check_dim("sample_sbm: row classes", p.k(), y.num_classes())?;
    Error::check_dim("sample_sbm: column classes", p.l(), z.num_classes())?;
    let (n, m) = (y.len(), z.len());
    let members = z.members();
    let rows: Vec<Vec<(usize, u32)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(seed, Purpose::SampleRows, i as u64);
            let mut row = Vec::new();
            let k = y.get(i);
            for (l, cols) in members.iter().enumerate() {
                let prob = p.matrix()[(k, l)];
                match mode {
                    SampleMode::Bernoulli => sample_bernoulli_block(&mut rng, prob, cols, &mut row),
                    SampleMode::Poisson => sample_poisson_block(&mut rng, prob, cols, &mut row),
                }
            }
            row
        })
        .collect();
    Ok(SparseBi::from_rows(n, m, rows))
}

/// Geometric skipping over one row/column-class block.
fn sample_bernoulli_block<R: Rng>(rng: &mut R, prob: f64, cols: &[usize], row: &mut Vec<(usize, u32)>) {
    if prob <= 0.0 {
        return;
    }
    if prob >= 1.0 {
        row.extend(cols.iter().map(|&j| (j, 1)));
        return;
    }
    let log_q = (-prob).ln_1p();
    let mut pos: usize = 0;
    loop {
        let u: f64 = 1.0 - rng.random::<f64>(); // (0, 1]
        let skip = (u.ln() / log_q).floor();
        if !skip.is_finite() || skip >= (cols.len() - pos) as f64 {
            break;
        }
        pos += skip as usize;
        row.push((cols[pos], 1));
        pos += 1;
        if pos >= cols.len() {
            break;
        }
    }
}

/// Independent Poisson entries: a Poisson total for the block, spread
/// uniformly over its columns.
fn sample_poisson_block<R: Rng>(rng: &mut R, prob: f64, cols: &[usize], row: &mut Vec<(usize, u32)>) {
    if prob <= 0.0 || cols.is_empty() {
        return;
    }
    let mean = prob * cols.len() as f64;
    let total = Poisson::new(mean).expect("positive finite mean").sample(rng) as u64;
    for _ in 0..total {
        let j = cols[rng.random_range(0..cols.len())];
        row.push((j, 1));
    }
}

/// `E[A]` as a (dense-valued) sparse matrix.
pub fn expected_adjacency(p: &Connectivity, y: &HardLabels, z: &HardLabels) -> Result<WeightedBiAdjacency> {
    Error::check_dim("expected_adjacency: row classes", p.k(), y.num_classes())?;
    Error::check_dim("expected_adjacency: column classes", p.l(), z.num_classes())?;
    let rows = (0..y.len())
        .map(|i| {
            (0..z.len())
                .map(|j| (j, p.matrix()[(y.get(i), z.get(j))]))
                .collect()
        })
        .collect();
    Ok(SparseBi::from_rows(y.len(), z.len(), rows))
}

/// Scalar summaries of how hard a model instance is.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelDiagnostics {
    /// `‖Λ‖∞/Λ_min ∨ ‖Γ‖∞/Γ_min`; infinite when a mean parameter is zero.
    pub omega: f64,
    /// Smallest `β` with `1/(βK) ≤ π_k(y) ≤ β/K` and the column analogue.
    pub beta: f64,
    /// Aspect ratio `m / n`.
    pub alpha: f64,
    /// `J_kr = L‖Λ‖∞ / I_kr`; infinite where `I_kr = 0`.
    pub j_kr: Vec<Vec<f64>>,
}

pub fn diagnostics(
    lambda: &MeanParams,
    gamma: &MeanParams,
    y: &HardLabels,
    z: &HardLabels,
    info: &InfoMatrix,
) -> ModelDiagnostics {
    let spread = |p: &MeanParams| {
        let (max, min) = (p.max_entry(), p.min_entry());
        if min > 0.0 {
            max / min
        } else {
            f64::INFINITY
        }
    };
    let balance = |labels: &HardLabels| {
        let k = labels.num_classes() as f64;
        labels
            .proportions()
            .into_iter()
            .map(|pi| if pi > 0.0 { (k * pi).max(1.0 / (k * pi)) } else { f64::INFINITY })
            .fold(1.0, f64::max)
    };
    let l = lambda.l() as f64;
    let lmax = lambda.max_entry();
    let k = info.len();
    let j_kr = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    let i = info.value(a, b);
                    if i > 0.0 {
                        l * lmax / i
                    } else {
                        f64::INFINITY
                    }
                })
                .collect()
        })
        .collect();
    ModelDiagnostics {
        omega: spread(lambda).max(spread(gamma)),
        beta: balance(y).max(balance(z)),
        alpha: z.len() as f64 / y.len().max(1) as f64,
        j_kr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::chernoff_info;

    fn pp() -> Connectivity {
        Connectivity::from_rows(&[vec![0.5, 0.1], vec![0.1, 0.5]]).unwrap()
    }

    #[test]
    fn connectivity_range_checked() {
        assert!(Connectivity::from_rows(&[vec![1.5]]).is_err());
        assert!(Connectivity::from_rows(&[vec![-0.1]]).is_err());
        assert!(Connectivity::new(DMatrix::zeros(0, 2)).is_err());
    }

    #[test]
    fn mean_params_from_connectivity() {
        let z = HardLabels::from_one_indexed(&[1, 1, 2, 2], 2).unwrap();
        let lambda = true_mean_params(&pp(), &z).unwrap();
        assert_eq!(lambda.to_rows(), vec![vec![1.0, 0.2], vec![0.2, 1.0]]);

        let zero = Connectivity::new(DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(true_mean_params(&zero, &z).unwrap().max_entry(), 0.0);

        let bad = HardLabels::balanced(4, 3).unwrap();
        assert!(matches!(
            true_mean_params(&pp(), &bad),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn planted_partition_example_values() {
        let p = Connectivity::planted_partition(2, 4.0, 1.0, 20).unwrap();
        let z = HardLabels::balanced(20, 2).unwrap();
        let lambda = true_mean_params(&p, &z).unwrap();
        assert!((lambda.get(0, 0) - 2.0).abs() < 1e-12);
        assert!((lambda.get(0, 1) - 0.5).abs() < 1e-12);
        let gamma = true_col_mean_params(&p, &z).unwrap();
        let info = chernoff_info(&lambda);
        let d = diagnostics(&lambda, &gamma, &z, &z, &info);
        assert!((d.omega - 4.0).abs() < 1e-12);
        assert_eq!(d.beta, 1.0);
        assert_eq!(d.alpha, 1.0);
        assert!(d.j_kr[0][1] >= 0.5);
        assert!(d.j_kr[0][0].is_infinite());
    }

    #[test]
    fn diagnostics_degenerate_values() {
        let y = HardLabels::new(vec![0, 0, 0], 2).unwrap();
        let lambda = MeanParams::from_rows(&[vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let constant = MeanParams::from_rows(&[vec![3.0, 3.0], vec![3.0, 3.0]]).unwrap();
        let info = chernoff_info(&constant);
        let d = diagnostics(&constant, &constant, &HardLabels::balanced(4, 2).unwrap(), &HardLabels::balanced(4, 2).unwrap(), &info);
        assert_eq!(d.omega, 1.0);
        let d = diagnostics(&lambda, &constant, &y, &y, &info);
        assert!(d.omega.is_infinite());
        assert!(d.beta.is_infinite());
    }

    #[test]
    fn trivial_sampling_cases() {
        let y = HardLabels::balanced(6, 2).unwrap();
        let z = HardLabels::balanced(5, 2).unwrap();
        let zero = Connectivity::new(DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(sample_sbm(&zero, &y, &z, 1, SampleMode::Bernoulli).unwrap().nnz(), 0);
        let ones = Connectivity::new(DMatrix::from_element(2, 2, 1.0)).unwrap();
        let full = sample_sbm(&ones, &y, &z, 1, SampleMode::Bernoulli).unwrap();
        assert_eq!(full.nnz(), 30);
        assert!(full.is_binary());
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = Connectivity::planted_partition(2, 20.0, 4.0, 200).unwrap();
        let y = HardLabels::balanced(200, 2).unwrap();
        for mode in [SampleMode::Bernoulli, SampleMode::Poisson] {
            let a = sample_sbm(&p, &y, &y, 9, mode).unwrap();
            let b = sample_sbm(&p, &y, &y, 9, mode).unwrap();
            let c = sample_sbm(&p, &y, &y, 10, mode).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }

    #[test]
    fn expected_adjacency_recovers_lambda_row_sums() {
        let y = HardLabels::balanced(4, 2).unwrap();
        let e = expected_adjacency(&pp(), &y, &y).unwrap();
        assert_eq!(e.nnz(), 16);
        assert!((e.row_sums()[0] - 1.2).abs() < 1e-12);
    }
}
