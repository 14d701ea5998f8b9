//! Pseudo-likelihood operators and the algorithms built from them.
//!
//! * `B(A; z̃)`, [`block_compress`]: column compression `b_iℓ = Σ_j A_ij 1{z̃_j = ℓ}`.
//! * `L(b; ỹ)`, [`estimate_means`]: per-class averages of compressed rows.
//! * `F(b, Λ̂, π̃)`, [`class_posterior`]: row posteriors under the
//!   product-Poisson mixture `Σ_k π̃_k Π_ℓ Poi(λ̂_kℓ)`.
//! * `LR(A, Λ̃, z̃)`, [`lr_classify`]: the MAP/likelihood-ratio classifier.
//!
//! [`pl_meta`] alternates these over rows and columns; [`pl_simplified`] is a
//! single row pass with fixed parameters.

use log::warn;
use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Entry, SparseBi};
use crate::info::LAMBDA_FLOOR;
use crate::labels::{HardLabels, LabelsRef, SoftLabels};
use crate::model::MeanParams;
use crate::rng::{self, Purpose};

/// Relative tolerance under which two classification scores count as tied.
pub const TIE_REL_TOL: f64 = 1e-12;

/// Class mass below which a class is treated as empty.
const EMPTY_CLASS_MASS: f64 = 1e-12;

/// `n × L` compressed counts (real-valued when built from soft labels).
#[derive(Clone, Debug, PartialEq)]
pub struct BlockCompression {
    b: DMatrix<f64>,
}

impl BlockCompression {
    pub fn new(b: DMatrix<f64>) -> Result<Self> {
        if b.iter().any(|&v| !(v >= 0.0)) {
            return Err(Error::InvalidParameter("compressed counts must be >= 0".into()));
        }
        Ok(Self { b })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn nrows(&self) -> usize {
        self.b.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.b.ncols()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.b.row_iter().map(|r| r.iter().sum()).collect()
    }
}

/// `B(A; z̃)`.
pub fn block_compress<'a, T: Entry>(a: &SparseBi<T>, z: impl Into<LabelsRef<'a>>) -> Result<BlockCompression> {
    let z = z.into();
    Error::check_dim("block_compress: column labels", a.ncols(), z.len())?;
    let l = z.num_classes();
    let rows: Vec<Vec<f64>> = (0..a.nrows())
        .into_par_iter()
        .with_min_len(128)
        .map(|i| {
            let mut acc = vec![0.0; l];
            match z {
                LabelsRef::Hard(h) => {
                    for (j, v) in a.row(i) {
                        acc[h.get(j)] += v.to_f64();
                    }
                }
                LabelsRef::Soft(s) => {
                    let w = s.weights();
                    for (j, v) in a.row(i) {
                        let v = v.to_f64();
                        for (c, slot) in acc.iter_mut().enumerate() {
                            *slot += v * w[(j, c)];
                        }
                    }
                }
            }
            acc
        })
        .collect();
    Ok(BlockCompression {
        b: DMatrix::from_fn(a.nrows(), l, |i, c| rows[i][c]),
    })
}

/// Class prior `π̃`. The flat prior is the all-ones vector, kept
/// unnormalized and flagged.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassPrior {
    pi: Vec<f64>,
    flat: bool,
}

impl ClassPrior {
    pub fn flat(k: usize) -> Self {
        Self {
            pi: vec![1.0; k],
            flat: true,
        }
    }

    /// A probability vector (normalized on construction).
    pub fn new(pi: Vec<f64>) -> Result<Self> {
        let total: f64 = pi.iter().sum();
        if pi.is_empty() || pi.iter().any(|&p| !(p >= 0.0)) || !(total > 0.0) {
            return Err(Error::InvalidParameter("prior must be nonnegative with positive mass".into()));
        }
        Ok(Self {
            pi: pi.into_iter().map(|p| p / total).collect(),
            flat: false,
        })
    }

    /// `π(ỹ)`, the empirical class proportions of (soft or hard) labels.
    pub fn empirical<'a>(y: impl Into<LabelsRef<'a>>) -> Self {
        let y = y.into();
        let mass = match y {
            LabelsRef::Hard(h) => h.counts().into_iter().map(|c| c as f64).collect(),
            LabelsRef::Soft(s) => s.class_mass(),
        };
        let total: f64 = mass.iter().sum::<f64>().max(f64::MIN_POSITIVE);
        Self {
            pi: mass.into_iter().map(|c| c / total).collect(),
            flat: false,
        }
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    pub fn is_flat(&self) -> bool {
        self.flat
    }

    pub fn weights(&self) -> &[f64] {
        &self.pi
    }

    fn log_weights(&self) -> Vec<f64> {
        self.pi.iter().map(|p| p.ln()).collect()
    }
}

/// Result of `L(b; ỹ)` with any classes that had to be re-seeded.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanEstimate {
    pub lambda: MeanParams,
    pub empty_classes: Vec<usize>,
}

/// `L(b; ỹ)`: `λ̂_kℓ = Σ_i b_iℓ ỹ_ik / Σ_i ỹ_ik`.
///
/// An empty class gets the global column mean of `b` with a small
/// deterministic jitter, so `K` stays fixed; the event is logged.
pub fn estimate_means<'a>(b: &BlockCompression, y: impl Into<LabelsRef<'a>>) -> Result<MeanParams> {
    let est = estimate_means_detailed(b, y)?;
    if !est.empty_classes.is_empty() {
        warn!("empty classes {:?} re-seeded from the global column mean", est.empty_classes);
    }
    Ok(est.lambda)
}

pub fn estimate_means_detailed<'a>(b: &BlockCompression, y: impl Into<LabelsRef<'a>>) -> Result<MeanEstimate> {
    let y = y.into();
    Error::check_dim("estimate_means: row labels", b.nrows(), y.len())?;
    let (k, l) = (y.num_classes(), b.ncols());
    let mut sums = DMatrix::zeros(k, l);
    let mut mass = vec![0.0; k];
    match y {
        LabelsRef::Hard(h) => {
            for i in 0..b.nrows() {
                let c = h.get(i);
                mass[c] += 1.0;
                for ell in 0..l {
                    sums[(c, ell)] += b.b[(i, ell)];
                }
            }
        }
        LabelsRef::Soft(s) => {
            let w = s.weights();
            for i in 0..b.nrows() {
                for c in 0..k {
                    let wic = w[(i, c)];
                    if wic == 0.0 {
                        continue;
                    }
                    mass[c] += wic;
                    for ell in 0..l {
                        sums[(c, ell)] += wic * b.b[(i, ell)];
                    }
                }
            }
        }
    }
    let n = b.nrows().max(1) as f64;
    let global: Vec<f64> = (0..l).map(|ell| b.b.column(ell).iter().sum::<f64>() / n).collect();
    let mut empty = Vec::new();
    for c in 0..k {
        if mass[c] > EMPTY_CLASS_MASS {
            for ell in 0..l {
                sums[(c, ell)] /= mass[c];
            }
        } else {
            empty.push(c);
            for ell in 0..l {
                sums[(c, ell)] = global[ell] * (1.0 + jitter(c, ell));
            }
        }
    }
    Ok(MeanEstimate {
        lambda: MeanParams::from_matrix_unchecked(sums),
        empty_classes: empty,
    })
}

/// Deterministic multiplicative jitter in `[-1%, 1%)`.
fn jitter(k: usize, l: usize) -> f64 {
    let bits = rng::derive_seed(k as u64, Purpose::Jitter, l as u64);
    ((bits >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 0.02
}

/// Unnormalized log posterior scores `log π̃_k + Σ_ℓ b_iℓ log λ̂_kℓ − λ̂_kℓ`.
fn log_scores(b: &BlockCompression, lambda: &MeanParams, log_prior: Option<&[f64]>) -> DMatrix<f64> {
    let lam = lambda.clamped(LAMBDA_FLOOR);
    let k = lam.k();
    let log_lam = lam.matrix().map(f64::ln);
    let row_tot: Vec<f64> = (0..k).map(|c| lam.matrix().row(c).iter().sum()).collect();
    let rows: Vec<Vec<f64>> = (0..b.nrows())
        .into_par_iter()
        .with_min_len(128)
        .map(|i| {
            (0..k)
                .map(|c| {
                    let mut s = log_prior.map_or(0.0, |p| p[c]) - row_tot[c];
                    for ell in 0..b.ncols() {
                        let x = b.b[(i, ell)];
                        if x != 0.0 {
                            s += x * log_lam[(c, ell)];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    DMatrix::from_fn(b.nrows(), k, |i, c| rows[i][c])
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// `F(b, Λ̂, π̃)`: posterior class probabilities per row, computed in log
/// space. `Λ̂` is floored at [`LAMBDA_FLOOR`].
pub fn class_posterior(b: &BlockCompression, lambda_hat: &MeanParams, prior: &ClassPrior) -> Result<SoftLabels> {
    Error::check_dim("class_posterior: mean columns", b.ncols(), lambda_hat.l())?;
    Error::check_dim("class_posterior: prior length", lambda_hat.k(), prior.len())?;
    let log_prior = (!prior.is_flat()).then(|| prior.log_weights());
    let scores = log_scores(b, lambda_hat, log_prior.as_deref());
    Ok(normalize_scores(scores))
}

fn normalize_scores(mut scores: DMatrix<f64>) -> SoftLabels {
    for mut row in scores.row_iter_mut() {
        let lse = log_sum_exp(&row.iter().copied().collect::<Vec<_>>());
        for v in row.iter_mut() {
            *v = (*v - lse).exp();
        }
        // exact renormalization after exponentiation
        let s: f64 = row.iter().sum();
        for v in row.iter_mut() {
            *v /= s;
        }
    }
    SoftLabels::from_normalized(scores)
}

/// Mixture log-likelihood `Σ_i log Σ_k π̃_k Φ(b_i, λ̂_k)` (up to constants).
pub fn log_pseudo_likelihood(b: &BlockCompression, lambda_hat: &MeanParams, prior: &ClassPrior) -> f64 {
    let log_prior = (!prior.is_flat()).then(|| prior.log_weights());
    let scores = log_scores(b, lambda_hat, log_prior.as_deref());
    scores
        .row_iter()
        .map(|r| log_sum_exp(&r.iter().copied().collect::<Vec<_>>()))
        .sum()
}

/// `log Φ(x, λ) − log Φ(x, λ′) = Σ_ℓ x_ℓ log(λ_ℓ/λ′_ℓ) + λ′_ℓ − λ_ℓ`.
pub fn poisson_llr(x: &[f64], lambda: &[f64], lambda_prime: &[f64]) -> f64 {
    assert!(x.len() == lambda.len() && x.len() == lambda_prime.len(), "length mismatch");
    x.iter()
        .zip(lambda.iter().zip(lambda_prime))
        .map(|(&xl, (&a, &b))| {
            let (a, b) = (a.max(LAMBDA_FLOOR), b.max(LAMBDA_FLOOR));
            xl * (a / b).ln() + b - a
        })
        .sum()
}

/// Picks uniformly from `candidates` using the stream for `(seed, node)`.
pub fn break_tie(seed: u64, node: usize, candidates: &[usize]) -> usize {
    match candidates {
        [] => panic!("break_tie needs at least one candidate"),
        [only] => *only,
        _ => {
            let mut rng = rng::stream(seed, Purpose::TieBreak, node as u64);
            candidates[rng.random_range(0..candidates.len())]
        }
    }
}

/// Indices within [`TIE_REL_TOL`] of the maximum score.
pub fn argmax_set(scores: &[f64]) -> Vec<usize> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = TIE_REL_TOL * max.abs().max(1.0);
    scores
        .iter()
        .enumerate()
        .filter(|(_, &s)| max - s <= tol)
        .map(|(c, _)| c)
        .collect()
}

fn map_assign(scores: &DMatrix<f64>, seed: u64) -> HardLabels {
    let k = scores.ncols();
    let labels: Vec<usize> = (0..scores.nrows())
        .into_par_iter()
        .with_min_len(256)
        .map(|i| {
            let row: Vec<f64> = scores.row(i).iter().copied().collect();
            break_tie(seed, i, &argmax_set(&row))
        })
        .collect();
    HardLabels::new(labels, k).expect("argmax within range")
}

/// `LR(A, Λ̃, z̃)`: each row goes to a class maximizing `log Φ(b_i(z̃), λ̃_r)`;
/// ties are broken uniformly from the argmax set with a per-node stream.
pub fn lr_classify<T: Entry>(a: &SparseBi<T>, lambda_tilde: &MeanParams, z: &HardLabels, seed: u64) -> Result<HardLabels> {
    let b = block_compress(a, z)?;
    lr_classify_compressed(&b, lambda_tilde, seed)
}

/// [`lr_classify`] on precomputed compressed counts.
pub fn lr_classify_compressed(b: &BlockCompression, lambda_tilde: &MeanParams, seed: u64) -> Result<HardLabels> {
    Error::check_dim("lr_classify: mean columns", b.ncols(), lambda_tilde.l())?;
    Ok(map_assign(&log_scores(b, lambda_tilde, None), seed))
}

/// The simplified single pass: compress with `z̃`, take the flat-prior
/// posterior under `Λ̃`, and harden by MAP. Identical to [`lr_classify`]
/// for the same seed.
pub fn pl_simplified<T: Entry>(a: &SparseBi<T>, z0: &HardLabels, lambda_tilde: &MeanParams, seed: u64) -> Result<HardLabels> {
    let b = block_compress(a, z0)?;
    Error::check_dim("pl_simplified: mean columns", b.ncols(), lambda_tilde.l())?;
    // log posterior differs from the flat-prior scores by a per-row constant
    let scores = log_scores(&b, lambda_tilde, None);
    Ok(map_assign(&scores, seed))
}

/// Prior used in the posterior step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorOption {
    Flat,
    Empirical,
}

/// How often the `L`/`F` inner loop runs per outer iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerLoop {
    Once,
    ToConvergence,
}

/// When soft labels are converted to hard ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hardening {
    KeepSoft,
    /// After every posterior computation.
    HardenEachStep,
    /// Once per outer iteration, after both sides are updated.
    HardenAtEnd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlOptions {
    pub prior: PriorOption,
    pub inner: InnerLoop,
    pub hardening: Hardening,
    pub max_outer: usize,
    pub max_inner: usize,
    /// Max-abs movement of soft labels treated as convergence.
    pub tol: f64,
}

impl Default for PlOptions {
    fn default() -> Self {
        Self::soft()
    }
}

impl PlOptions {
    /// Flat prior, one inner pass, soft labels throughout.
    pub fn soft() -> Self {
        Self {
            prior: PriorOption::Flat,
            inner: InnerLoop::Once,
            hardening: Hardening::KeepSoft,
            max_outer: 50,
            max_inner: 50,
            tol: 1e-6,
        }
    }

    /// Flat prior, one inner pass, hard labels after every posterior.
    pub fn hard() -> Self {
        Self {
            hardening: Hardening::HardenEachStep,
            ..Self::soft()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlIteration {
    pub iteration: usize,
    pub row_changes: usize,
    pub col_changes: usize,
    pub log_pl: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlFit {
    pub rows: SoftLabels,
    pub cols: SoftLabels,
    pub trace: Vec<PlIteration>,
    pub converged: bool,
}

impl PlFit {
    pub fn row_labels(&self) -> HardLabels {
        self.rows.harden()
    }

    pub fn col_labels(&self) -> HardLabels {
        self.cols.harden()
    }

    pub fn iterations(&self) -> usize {
        self.trace.len()
    }
}

fn to_soft(labels: LabelsRef<'_>) -> SoftLabels {
    match labels {
        LabelsRef::Hard(h) => h.to_soft(),
        LabelsRef::Soft(s) => s.clone(),
    }
}

/// One side of the alternating update (lines 3–9): returns new labels for
/// the rows of `a` and the log pseudo-likelihood at the final parameters.
fn update_side<T: Entry>(a: &SparseBi<T>, own: &SoftLabels, other: &SoftLabels, opts: &PlOptions) -> Result<(SoftLabels, f64)> {
    let b = block_compress(a, other)?;
    let mut current = own.clone();
    let passes = match opts.inner {
        InnerLoop::Once => 1,
        InnerLoop::ToConvergence => opts.max_inner.max(1),
    };
    let mut log_pl = f64::NEG_INFINITY;
    for _ in 0..passes {
        let lambda = estimate_means(&b, &current)?;
        let prior = match opts.prior {
            PriorOption::Flat => ClassPrior::flat(current.num_classes()),
            PriorOption::Empirical => ClassPrior::empirical(&current),
        };
        let mut next = class_posterior(&b, &lambda, &prior)?;
        log_pl = log_pseudo_likelihood(&b, &lambda, &prior);
        if opts.hardening == Hardening::HardenEachStep {
            next = next.harden().to_soft();
        }
        let moved = next.max_abs_diff(&current);
        current = next;
        if moved < opts.tol {
            break;
        }
    }
    Ok((current, log_pl))
}

/// Alternating pseudo-likelihood biclustering.
///
/// Each outer iteration updates the row labels from `B(A; z̃)`, then the
/// column labels from `B(Aᵀ; ỹ)`. It stops when neither hardened label
/// vector changes, when soft labels move less than `opts.tol`, or after
/// `opts.max_outer` iterations; in the last case the iterate with the best
/// pseudo-likelihood is returned with `converged = false`.
pub fn pl_meta<'a, 'b, T: Entry>(
    a: &SparseBi<T>,
    y0: impl Into<LabelsRef<'a>>,
    z0: impl Into<LabelsRef<'b>>,
    opts: &PlOptions,
) -> Result<PlFit> {
    let (y0, z0) = (y0.into(), z0.into());
    Error::check_dim("pl_meta: row labels", a.nrows(), y0.len())?;
    Error::check_dim("pl_meta: column labels", a.ncols(), z0.len())?;
    if opts.max_outer == 0 {
        return Err(Error::InvalidParameter("max_outer must be at least 1".into()));
    }
    let at = a.transpose();
    let mut y = to_soft(y0);
    let mut z = to_soft(z0);
    let mut trace = Vec::new();
    let mut best: Option<(f64, SoftLabels, SoftLabels)> = None;
    let mut converged = false;

    for iteration in 1..=opts.max_outer {
        let (y_prev_hard, z_prev_hard) = (y.harden(), z.harden());
        let (y_prev, z_prev) = (y.clone(), z.clone());

        let (y_new, row_pl) = update_side(a, &y, &z, opts)?;
        let (z_new, col_pl) = update_side(&at, &z, &y_new, opts)?;
        y = y_new;
        z = z_new;
        if opts.hardening == Hardening::HardenAtEnd {
            y = y.harden().to_soft();
            z = z.harden().to_soft();
        }

        let row_changes = y.harden().hamming(&y_prev_hard);
        let col_changes = z.harden().hamming(&z_prev_hard);
        let log_pl = row_pl + col_pl;
        trace.push(PlIteration {
            iteration,
            row_changes,
            col_changes,
            log_pl,
        });
        if best.as_ref().is_none_or(|(v, _, _)| log_pl > *v) {
            best = Some((log_pl, y.clone(), z.clone()));
        }

        let moved = y.max_abs_diff(&y_prev).max(z.max_abs_diff(&z_prev));
        if (row_changes == 0 && col_changes == 0) || moved < opts.tol {
            converged = true;
            break;
        }
    }

    if !converged {
        warn!("pl_meta stopped after {} iterations without converging", opts.max_outer);
        if let Some((_, by, bz)) = best {
            y = by;
            z = bz;
        }
    }
    Ok(PlFit {
        rows: y,
        cols: z,
        trace,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BiAdjacency;

    fn small() -> BiAdjacency {
        BiAdjacency::from_triplets(2, 3, [(0, 0, 1), (0, 2, 1), (1, 1, 1), (1, 2, 1)]).unwrap()
    }

    fn mp(rows: &[Vec<f64>]) -> MeanParams {
        MeanParams::from_rows(rows).unwrap()
    }

    #[test]
    fn compress_examples() {
        let a = small();
        let z = HardLabels::from_one_indexed(&[1, 2, 1], 2).unwrap();
        let b = block_compress(&a, &z).unwrap();
        assert_eq!(b.matrix(), &DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 1.0, 1.0]));

        let one = HardLabels::new(vec![0, 0, 0], 2).unwrap();
        let b = block_compress(&a, &one).unwrap();
        assert_eq!(b.matrix(), &DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 2.0, 0.0]));

        let half = SoftLabels::uniform(3, 2);
        let b = block_compress(&a, &half).unwrap();
        assert_eq!(b.matrix(), &DMatrix::from_element(2, 2, 1.0));

        assert!(block_compress(&a, &HardLabels::balanced(4, 2).unwrap()).is_err());
    }

    #[test]
    fn means_examples() {
        let b = BlockCompression::new(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 1.0, 1.0])).unwrap();
        let y = HardLabels::new(vec![0, 1], 2).unwrap();
        assert_eq!(estimate_means(&b, &y).unwrap().to_rows(), vec![vec![2.0, 0.0], vec![1.0, 1.0]]);
        let single = HardLabels::new(vec![0, 0], 1).unwrap();
        assert_eq!(estimate_means(&b, &single).unwrap().to_rows(), vec![vec![1.5, 0.5]]);
    }

    #[test]
    fn empty_class_is_reseeded() {
        let b = BlockCompression::new(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 4.0, 2.0])).unwrap();
        let y = HardLabels::new(vec![0, 0], 2).unwrap();
        let est = estimate_means_detailed(&b, &y).unwrap();
        assert_eq!(est.empty_classes, vec![1]);
        let row: Vec<f64> = est.lambda.to_rows()[1].clone();
        assert!((row[0] - 3.0).abs() <= 0.03 && (row[1] - 1.0).abs() <= 0.01);
        assert_ne!(row, vec![3.0, 1.0]);
    }

    #[test]
    fn posterior_examples() {
        let b = BlockCompression::new(DMatrix::from_row_slice(2, 2, &[5.0, 0.0, 1.0, 3.0])).unwrap();
        let same = mp(&[vec![2.0, 2.0], vec![2.0, 2.0], vec![2.0, 2.0]]);
        let post = class_posterior(&b, &same, &ClassPrior::flat(3)).unwrap();
        for v in post.weights().iter() {
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
        let sep = mp(&[vec![5.0, 1.0], vec![1.0, 5.0]]);
        let post = class_posterior(&b, &sep, &ClassPrior::flat(2)).unwrap();
        assert_eq!(post.harden().get(0), 0);
        // log-ratio for row 0 is 5 log 5 > 0
        let r = poisson_llr(&[5.0, 0.0], &[5.0, 1.0], &[1.0, 5.0]);
        assert!((r - 5.0 * 5f64.ln()).abs() < 1e-12);
        assert!(class_posterior(&b, &sep, &ClassPrior::flat(3)).is_err());
    }

    #[test]
    fn prior_scaling_does_not_change_posterior() {
        let b = BlockCompression::new(DMatrix::from_row_slice(1, 2, &[3.0, 1.0])).unwrap();
        let lam = mp(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let p1 = class_posterior(&b, &lam, &ClassPrior::new(vec![0.3, 0.7]).unwrap()).unwrap();
        let p2 = class_posterior(&b, &lam, &ClassPrior::new(vec![3.0, 7.0]).unwrap()).unwrap();
        assert!(p1.max_abs_diff(&p2) < 1e-15);
    }

    #[test]
    fn llr_examples() {
        assert_eq!(poisson_llr(&[3.0, 1.0], &[2.0, 1.0], &[2.0, 1.0]), 0.0);
        assert!((poisson_llr(&[0.0, 0.0], &[2.0, 1.0], &[1.0, 4.0]) - 2.0).abs() < 1e-15);
        assert!((poisson_llr(&[2.0, 1.0], &[2.0, 1.0], &[1.0, 2.0]) - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn lr_dominant_row() {
        let a = BiAdjacency::from_triplets(3, 2, [(0, 0, 1), (1, 1, 1), (2, 0, 2)]).unwrap();
        let z = HardLabels::new(vec![0, 1], 2).unwrap();
        let lam = mp(&[vec![1.0, 1.0], vec![1e-3, 1e-3]]);
        let y = lr_classify(&a, &lam, &z, 0).unwrap();
        assert_eq!(y.as_slice(), &[0, 0, 0]);
    }

    #[test]
    fn tie_break_is_seeded() {
        let picks: Vec<usize> = (0..200).map(|i| break_tie(3, i, &[0, 1, 2])).collect();
        let again: Vec<usize> = (0..200).map(|i| break_tie(3, i, &[0, 1, 2])).collect();
        assert_eq!(picks, again);
        for c in 0..3 {
            assert!(picks.contains(&c));
        }
        assert_eq!(break_tie(3, 0, &[2]), 2);
    }

    #[test]
    fn argmax_set_respects_tolerance() {
        assert_eq!(argmax_set(&[1.0, 3.0, 3.0, 2.0]), vec![1, 2]);
        assert_eq!(argmax_set(&[-5.0, -5.0 - 1e-3]), vec![0]);
    }

    #[test]
    fn pl_meta_rejects_bad_input() {
        let a = small();
        let y = HardLabels::balanced(3, 2).unwrap();
        let z = HardLabels::balanced(3, 2).unwrap();
        assert!(pl_meta(&a, &y, &z, &PlOptions::soft()).is_err());
        let y = HardLabels::balanced(2, 2).unwrap();
        let opts = PlOptions {
            max_outer: 0,
            ..PlOptions::soft()
        };
        assert!(pl_meta(&a, &y, &z, &opts).is_err());
    }
}
