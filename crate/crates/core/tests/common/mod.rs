//! Helpers shared by the integration tests. Everything here is written from
//! the definitions, independently of the library code it checks.
#![allow(dead_code)]

use bisbm::HardLabels;
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random labels in which every one of the `k` classes occurs (`n ≥ k`).
pub fn covering_labels<R: Rng>(rng: &mut R, n: usize, k: usize) -> HardLabels {
    assert!(n >= k);
    let mut v: Vec<usize> = (0..k).chain((k..n).map(|_| rng.random_range(0..k))).collect();
    v.shuffle(rng);
    HardLabels::new(v, k).unwrap()
}

/// Labels with exactly `sizes[c]` members of class `c`, in random order.
pub fn shuffled_sizes<R: Rng>(rng: &mut R, sizes: &[usize]) -> HardLabels {
    let mut v: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &s)| std::iter::repeat_n(c, s)).collect();
    v.shuffle(rng);
    HardLabels::new(v, sizes.len()).unwrap()
}

/// Row-stochastic `n × k` matrix with strictly positive entries.
pub fn random_soft<R: Rng>(rng: &mut R, n: usize, k: usize) -> DMatrix<f64> {
    let mut w = DMatrix::from_fn(n, k, |_, _| -(1.0 - rng.random::<f64>()).ln());
    for mut row in w.row_iter_mut() {
        let s = row.sum();
        row /= s;
    }
    w
}

pub fn one_hot(labels: &HardLabels) -> DMatrix<f64> {
    DMatrix::from_fn(labels.len(), labels.num_classes(), |i, c| f64::from(u8::from(labels.get(i) == c)))
}

/// Changes exactly `count` distinct entries to a different class.
pub fn flip<R: Rng>(rng: &mut R, labels: &HardLabels, count: usize) -> HardLabels {
    let k = labels.num_classes();
    let mut v = labels.as_slice().to_vec();
    if k < 2 {
        return labels.clone();
    }
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.shuffle(rng);
    for &i in idx.iter().take(count) {
        let shift = rng.random_range(1..k);
        v[i] = (v[i] + shift) % k;
    }
    HardLabels::new(v, k).unwrap()
}

/// Applies `perm` to the class indices.
pub fn relabel(labels: &HardLabels, perm: &[usize]) -> HardLabels {
    HardLabels::new(labels.as_slice().iter().map(|&c| perm[c]).collect(), perm.len()).unwrap()
}

pub fn random_perm<R: Rng>(rng: &mut R, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    p.shuffle(rng);
    p
}

/// All permutations of `0..k` in lexicographic order.
pub fn all_perms(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                prefix.push(c);
                rec(prefix, used, out);
                prefix.pop();
                used[c] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// `|{i : perm[est_i] = truth_i}|`.
pub fn agreement(est: &HardLabels, truth: &HardLabels, perm: &[usize]) -> usize {
    est.as_slice()
        .iter()
        .zip(truth.as_slice())
        .filter(|(&e, &t)| perm[e] == t)
        .count()
}

/// Exhaustive matching: the lexicographically first permutation with the
/// largest agreement, and how many permutations attain it.
pub fn brute_force_matching(est: &HardLabels, truth: &HardLabels) -> (Vec<usize>, usize, usize) {
    let k = est.num_classes().max(truth.num_classes());
    let mut best = (Vec::new(), 0usize, 0usize);
    for perm in all_perms(k) {
        let a = agreement(est, truth, &perm);
        if best.0.is_empty() || a > best.1 {
            best = (perm, a, 1);
        } else if a == best.1 {
            best.2 += 1;
        }
    }
    best
}

/// Brute-force misclassification rate.
pub fn brute_force_mis(est: &HardLabels, truth: &HardLabels) -> f64 {
    let (_, a, _) = brute_force_matching(est, truth);
    1.0 - a as f64 / truth.len() as f64
}

/// Ordinary least-squares slope of `y` on `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
