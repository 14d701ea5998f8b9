//! Misclassification rates and normalized mutual information.
//!
//! `Mis(ŷ, y)` minimizes the Hamming rate over relabelings of `ŷ`; the
//! optimal relabeling is a linear assignment on the confusion matrix.
//! `Mis_k` reuses that same permutation, and `dMis` uses the identity.

use serde::Serialize;

use crate::assignment::max_weight_assignment_lex;
use crate::error::{Error, Result};
use crate::labels::HardLabels;

/// `N[k][k'] = |{i : y_i = k, ŷ_i = k'}|`, padded to a square of side
/// `max(K(ŷ), K(y))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn new(y_hat: &HardLabels, y: &HardLabels) -> Result<Self> {
        Error::check_dim("confusion matrix: label lengths", y.len(), y_hat.len())?;
        let d = y.num_classes().max(y_hat.num_classes());
        let mut counts = vec![vec![0usize; d]; d];
        for (&t, &p) in y.as_slice().iter().zip(y_hat.as_slice()) {
            counts[t][p] += 1;
        }
        Ok(Self { counts })
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }
}

/// `σ*(ŷ → y)`: `perm[c]` is the true class matched to estimated class `c`.
/// Among optimal permutations the lexicographically smallest is returned.
pub fn optimal_permutation(y_hat: &HardLabels, y: &HardLabels) -> Result<Vec<usize>> {
    let conf = ConfusionMatrix::new(y_hat, y)?;
    Ok(permutation_from_confusion(&conf))
}

fn permutation_from_confusion(conf: &ConfusionMatrix) -> Vec<usize> {
    let d = conf.dim();
    // weight[estimated][true]
    let weight: Vec<Vec<i64>> = (0..d)
        .map(|p| (0..d).map(|t| conf.counts[t][p] as i64).collect())
        .collect();
    max_weight_assignment_lex(&weight).0
}

/// Full misclassification summary for one pair of labelings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Misclassification {
    pub mis: f64,
    /// Per true class; 0 for classes absent from `y`.
    pub mis_k: Vec<f64>,
    pub dmis: f64,
    pub permutation: Vec<usize>,
}

pub fn misclassification(y_hat: &HardLabels, y: &HardLabels) -> Result<Misclassification> {
    let conf = ConfusionMatrix::new(y_hat, y)?;
    let perm = permutation_from_confusion(&conf);
    let n = y.len();
    let d = conf.dim();
    let mut wrong_per_class = vec![0usize; d];
    let mut direct_wrong = 0usize;
    for (&t, &p) in y.as_slice().iter().zip(y_hat.as_slice()) {
        if perm[p] != t {
            wrong_per_class[t] += 1;
        }
        if p != t {
            direct_wrong += 1;
        }
    }
    let class_sizes = y.counts();
    let mis_k = (0..y.num_classes())
        .map(|k| {
            if class_sizes[k] == 0 {
                0.0
            } else {
                wrong_per_class[k] as f64 / class_sizes[k] as f64
            }
        })
        .collect();
    let total_wrong: usize = wrong_per_class.iter().sum();
    let denom = n.max(1) as f64;
    Ok(Misclassification {
        mis: total_wrong as f64 / denom,
        mis_k,
        dmis: direct_wrong as f64 / denom,
        permutation: perm,
    })
}

pub fn mis(y_hat: &HardLabels, y: &HardLabels) -> Result<f64> {
    Ok(misclassification(y_hat, y)?.mis)
}

/// Error rate within true class `k` under the optimal permutation.
pub fn mis_k(y_hat: &HardLabels, y: &HardLabels, k: usize) -> Result<f64> {
    misclassification(y_hat, y)?
        .mis_k
        .get(k)
        .copied()
        .ok_or_else(|| Error::InvalidParameter(format!("class {k} out of range")))
}

/// Normalized Hamming distance (identity permutation).
pub fn dmis(y_hat: &HardLabels, y: &HardLabels) -> Result<f64> {
    Error::check_dim("dmis: label lengths", y.len(), y_hat.len())?;
    Ok(y_hat.hamming(y) as f64 / y.len().max(1) as f64)
}

/// `I(ŷ; y) / sqrt(H(ŷ) H(y))` with natural logs. Two constant labelings
/// score 1; exactly one constant labeling scores 0.
pub fn nmi(y_hat: &HardLabels, y: &HardLabels) -> Result<f64> {
    let conf = ConfusionMatrix::new(y_hat, y)?;
    let n = conf.total();
    if n == 0 {
        return Ok(1.0);
    }
    let nf = n as f64;
    let d = conf.dim();
    let row: Vec<f64> = (0..d).map(|t| conf.counts[t].iter().sum::<usize>() as f64).collect();
    let col: Vec<f64> = (0..d).map(|p| (0..d).map(|t| conf.counts[t][p]).sum::<usize>() as f64).collect();
    let entropy = |marg: &[f64]| -> f64 {
        marg.iter()
            .filter(|&&c| c > 0.0)
            .map(|&c| {
                let q = c / nf;
                -q * q.ln()
            })
            .sum()
    };
    let (h_true, h_pred) = (entropy(&row), entropy(&col));
    if h_true == 0.0 && h_pred == 0.0 {
        return Ok(1.0);
    }
    if h_true == 0.0 || h_pred == 0.0 {
        return Ok(0.0);
    }
    let mut mi = 0.0;
    for t in 0..d {
        for p in 0..d {
            let c = conf.counts[t][p] as f64;
            if c > 0.0 {
                mi += c / nf * (c * nf / (row[t] * col[p])).ln();
            }
        }
    }
    Ok((mi / (h_true * h_pred).sqrt()).clamp(0.0, 1.0))
}

/// Inverse of a permutation vector.
pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (a, &b) in perm.iter().enumerate() {
        inv[b] = a;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hl(v: &[usize], k: usize) -> HardLabels {
        HardLabels::new(v.to_vec(), k).unwrap()
    }

    #[test]
    fn identical_labels() {
        let y = hl(&[0, 1, 2, 1, 0], 3);
        let m = misclassification(&y, &y).unwrap();
        assert_eq!((m.mis, m.dmis), (0.0, 0.0));
        assert_eq!(m.permutation, vec![0, 1, 2]);
        assert_eq!(nmi(&y, &y).unwrap(), 1.0);
    }

    #[test]
    fn permuted_labels_recover_inverse() {
        let y = hl(&[0, 0, 1, 1, 2, 2], 3);
        let tau = [2, 0, 1];
        let y_hat = y.permuted(&tau);
        let perm = optimal_permutation(&y_hat, &y).unwrap();
        assert_eq!(perm, invert_permutation(&tau));
        assert_eq!(mis(&y_hat, &y).unwrap(), 0.0);
        assert_eq!(dmis(&y_hat, &y).unwrap(), 1.0);
    }

    #[test]
    fn one_flip_in_four() {
        let y = hl(&[0, 0, 1, 1], 2);
        let y_hat = hl(&[0, 1, 1, 1], 2);
        let m = misclassification(&y_hat, &y).unwrap();
        assert_eq!(m.mis, 0.25);
        assert_eq!(m.dmis, 0.25);
        assert_eq!(m.mis_k, vec![0.5, 0.0]);
    }

    #[test]
    fn nmi_degenerate_cases() {
        let y = hl(&[0, 0, 1, 1], 2);
        let constant = hl(&[0, 0, 0, 0], 2);
        assert_eq!(nmi(&constant, &y).unwrap(), 0.0);
        assert_eq!(nmi(&constant, &constant).unwrap(), 1.0);
    }

    #[test]
    fn mismatched_class_counts_are_padded() {
        let y = hl(&[0, 0, 1, 1], 2);
        let y_hat = hl(&[0, 0, 1, 2], 3);
        let m = misclassification(&y_hat, &y).unwrap();
        assert_eq!(m.permutation.len(), 3);
        assert_eq!(m.mis, 0.25);
    }

    #[test]
    fn length_mismatch_errors() {
        assert!(mis(&hl(&[0], 1), &hl(&[0, 0], 1)).is_err());
    }
}
