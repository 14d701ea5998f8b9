//! Chernoff exponents between product-Poisson class distributions.
//!
//! For rows `λ_k, λ_r` of a mean matrix,
//!
//! ```text
//! I_kr = sup_{s∈(0,1)} Σ_ℓ (1−s)λ_kℓ + sλ_rℓ − λ_kℓ^{1−s} λ_rℓ^s
//! ```
//!
//! The map `s ↦ I_s` is strictly concave when the rows differ and vanishes at
//! both ends, so its derivative has exactly one root in `(0, 1)` and plain
//! bisection on the derivative finds it.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::model::MeanParams;

/// Floor applied to mean parameters before taking logs.
pub const LAMBDA_FLOOR: f64 = 1e-8;

/// Bracket width at which the optimizer stops.
pub const S_TOL: f64 = 1e-10;

const IDENTICAL_REL_TOL: f64 = 1e-12;

/// Pairwise Chernoff exponents and their optimizers.
#[derive(Clone, Debug, PartialEq)]
pub struct InfoMatrix {
    i_kr: DMatrix<f64>,
    s_star: DMatrix<f64>,
}

impl InfoMatrix {
    /// Wraps precomputed exponents; optimizers are set to 1/2.
    pub fn from_values(i_kr: DMatrix<f64>) -> Self {
        let s_star = DMatrix::from_element(i_kr.nrows(), i_kr.ncols(), 0.5);
        Self { i_kr, s_star }
    }

    pub fn len(&self) -> usize {
        self.i_kr.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.i_kr.nrows() == 0
    }

    #[inline]
    pub fn value(&self, k: usize, r: usize) -> f64 {
        self.i_kr[(k, r)]
    }

    #[inline]
    pub fn s_star(&self, k: usize, r: usize) -> f64 {
        self.s_star[(k, r)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.i_kr
    }

    /// `I_min = min_{k≠r} I_kr`; infinite for a single class.
    pub fn i_min(&self) -> f64 {
        let k = self.len();
        let mut best = f64::INFINITY;
        for a in 0..k {
            for b in 0..k {
                if a != b {
                    best = best.min(self.i_kr[(a, b)]);
                }
            }
        }
        best
    }
}

/// `I_s` for a single pair of rows.
pub fn chernoff_objective(lk: &[f64], lr: &[f64], s: f64) -> f64 {
    lk.iter()
        .zip(lr)
        .map(|(&a, &b)| (1.0 - s) * a + s * b - a.powf(1.0 - s) * b.powf(s))
        .sum()
}

fn chernoff_derivative(lk: &[f64], lr: &[f64], s: f64) -> f64 {
    lk.iter()
        .zip(lr)
        .map(|(&a, &b)| {
            let log_ratio = (b / a).ln();
            b - a - a * (s * log_ratio).exp() * log_ratio
        })
        .sum()
}

/// Maximizes `I_s` over `(0, 1)` for one pair, returning `(I, s*)`.
/// Both rows are floored at [`LAMBDA_FLOOR`].
pub fn chernoff_pair(lk: &[f64], lr: &[f64]) -> (f64, f64) {
    assert_eq!(lk.len(), lr.len(), "rows of different length");
    let lk: Vec<f64> = lk.iter().map(|v| v.max(LAMBDA_FLOOR)).collect();
    let lr: Vec<f64> = lr.iter().map(|v| v.max(LAMBDA_FLOOR)).collect();
    let identical = lk
        .iter()
        .zip(&lr)
        .all(|(a, b)| (a - b).abs() <= IDENTICAL_REL_TOL * a.abs().max(b.abs()));
    if identical {
        return (0.0, 0.5);
    }

    let (d0, d1) = (chernoff_derivative(&lk, &lr, 0.0), chernoff_derivative(&lk, &lr, 1.0));
    let s = if d0 > 0.0 && d1 < 0.0 {
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        while hi - lo > S_TOL {
            let mid = 0.5 * (lo + hi);
            if chernoff_derivative(&lk, &lr, mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    } else {
        // derivative lost sign information to rounding
        golden_section_max(|s| chernoff_objective(&lk, &lr, s), 0.0, 1.0, S_TOL)
    };
    (chernoff_objective(&lk, &lr, s).max(0.0), s)
}

fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// `I(Λ)`: the `K × K` Chernoff-exponent matrix of the rows of `Λ`.
pub fn chernoff_info(lambda: &MeanParams) -> InfoMatrix {
    let k = lambda.k();
    let rows: Vec<Vec<f64>> = lambda.to_rows();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| ((a + 1)..k).map(move |b| (a, b))).collect();
    let solved: Vec<(f64, f64)> = pairs
        .par_iter()
        .map(|&(a, b)| chernoff_pair(&rows[a], &rows[b]))
        .collect();
    let mut i_kr = DMatrix::zeros(k, k);
    let mut s_star = DMatrix::from_element(k, k, 0.5);
    for (&(a, b), &(i, s)) in pairs.iter().zip(&solved) {
        i_kr[(a, b)] = i;
        i_kr[(b, a)] = i;
        s_star[(a, b)] = s;
        s_star[(b, a)] = 1.0 - s;
    }
    InfoMatrix { i_kr, s_star }
}

/// `I^col = I(Γ)`, the `L × L` column analogue.
pub fn column_info(gamma: &MeanParams) -> InfoMatrix {
    chernoff_info(gamma)
}

/// Worst-coordinate ratio gaps `ε_kr = max_ℓ (λ_kℓ/λ_rℓ ∨ λ_rℓ/λ_kℓ) − 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationMatrix {
    pub eps_kr: Vec<Vec<f64>>,
    /// `min_{r≠k} ε_kr`.
    pub eps_k: Vec<f64>,
    pub eps: f64,
}

pub fn separation(lambda: &MeanParams) -> SeparationMatrix {
    let lambda = lambda.clamped(LAMBDA_FLOOR);
    let (k, l) = (lambda.k(), lambda.l());
    let eps_kr: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    (0..l)
                        .map(|c| {
                            let (x, y) = (lambda.get(a, c), lambda.get(b, c));
                            (x / y).max(y / x)
                        })
                        .fold(1.0, f64::max)
                        - 1.0
                })
                .collect()
        })
        .collect();
    let eps_k: Vec<f64> = (0..k)
        .map(|a| {
            (0..k)
                .filter(|&b| b != a)
                .map(|b| eps_kr[a][b])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let eps = eps_k.iter().copied().fold(f64::INFINITY, f64::min);
    SeparationMatrix { eps_kr, eps_k, eps }
}

/// Oracle-rate overlay for class `k`: `Σ_{r≠k} exp(−I_kr − ½ log Λ_min)`.
///
/// Constants are dropped; this is an order-of-magnitude guide for plots and
/// not a bound.
pub fn rate_prediction(info: &InfoMatrix, lambda_min: f64, k: usize) -> f64 {
    rate_terms(info, lambda_min, k, |_| 1.0)
}

/// As [`rate_prediction`], with each term multiplied by `1 + 1/ε_kr`.
pub fn rate_prediction_with_separation(
    info: &InfoMatrix,
    sep: &SeparationMatrix,
    lambda_min: f64,
    k: usize,
) -> f64 {
    rate_terms(info, lambda_min, k, |r| 1.0 + 1.0 / sep.eps_kr[k][r])
}

fn rate_terms(info: &InfoMatrix, lambda_min: f64, k: usize, factor: impl Fn(usize) -> f64) -> f64 {
    let half_log = 0.5 * lambda_min.max(LAMBDA_FLOOR).ln();
    (0..info.len())
        .filter(|&r| r != k)
        .map(|r| {
            let i = info.value(k, r);
            if i.is_infinite() {
                0.0
            } else {
                factor(r) * (-i - half_log).exp()
            }
        })
        .sum()
}

/// Overlay averaged over classes with weights `π_k`.
pub fn overall_rate_prediction(info: &InfoMatrix, lambda_min: f64, pi: &[f64]) -> f64 {
    pi.iter()
        .enumerate()
        .map(|(k, w)| w * rate_prediction(info, lambda_min, k))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(rows: &[Vec<f64>]) -> MeanParams {
        MeanParams::from_rows(rows).unwrap()
    }

    #[test]
    fn identical_rows_have_zero_information() {
        let info = chernoff_info(&mp(&[vec![2.0, 3.0], vec![2.0, 3.0]]));
        assert_eq!(info.value(0, 1), 0.0);
        assert_eq!(info.s_star(0, 1), 0.5);
    }

    #[test]
    fn symmetric_pair_closed_form() {
        let info = chernoff_info(&mp(&[vec![4.0, 1.0], vec![1.0, 4.0]]));
        assert!((info.value(0, 1) - 1.0).abs() < 1e-12);
        assert!((info.s_star(0, 1) - 0.5).abs() < 1e-9);
        assert_eq!(info.i_min(), info.value(1, 0));
    }

    #[test]
    fn separation_examples() {
        let sep = separation(&mp(&[vec![4.0, 1.0], vec![1.0, 4.0]]));
        assert!((sep.eps - 3.0).abs() < 1e-12);
        let same = separation(&mp(&[vec![2.0, 3.0], vec![2.0, 3.0]]));
        assert_eq!(same.eps_kr[0][1], 0.0);
    }

    #[test]
    fn rate_prediction_examples() {
        let info = InfoMatrix::from_values(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        assert!((rate_prediction(&info, 1.0, 0) - (-1.0f64).exp()).abs() < 1e-15);
        let inf = InfoMatrix::from_values(DMatrix::from_row_slice(
            2,
            2,
            &[0.0, f64::INFINITY, f64::INFINITY, 0.0],
        ));
        assert_eq!(rate_prediction(&inf, 1.0, 1), 0.0);
        let sep = separation(&mp(&[vec![4.0, 1.0], vec![1.0, 4.0]]));
        let with = rate_prediction_with_separation(&info, &sep, 1.0, 0);
        assert!((with - (1.0 + 1.0 / 3.0) * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let s = golden_section_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10);
        assert!((s - 0.3).abs() < 1e-8);
    }
}
