//! Cluster assignments.
//!
//! Labels are 0-indexed in code and in every file format. A hard label vector
//! `y ∈ [K]^n` is identified with its one-hot `n × K` matrix; soft labels are
//! row-stochastic `n × K` matrices.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

/// Tolerance on soft-label row sums.
pub const SOFT_ROW_TOL: f64 = 1e-9;

/// Hard assignments with a fixed class count.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HardLabels {
    labels: Vec<usize>,
    num_classes: usize,
}

impl HardLabels {
    pub fn new(labels: Vec<usize>, num_classes: usize) -> Result<Self> {
        if num_classes == 0 {
            return Err(Error::InvalidLabels("class count must be at least 1".into()));
        }
        if let Some((i, &c)) = labels.iter().enumerate().find(|(_, &c)| c >= num_classes) {
            return Err(Error::InvalidLabels(format!(
                "label {c} at position {i} is out of range for {num_classes} classes"
            )));
        }
        Ok(Self {
            labels,
            num_classes,
        })
    }

    /// Infers the class count as `max + 1`.
    pub fn from_vec(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().max().map_or(1, |&c| c + 1);
        Self::new(labels, k)
    }

    /// Converts 1-indexed labels (as written in mathematical notation).
    pub fn from_one_indexed(labels: &[usize], num_classes: usize) -> Result<Self> {
        if labels.contains(&0) {
            return Err(Error::InvalidLabels("1-indexed labels cannot contain 0".into()));
        }
        Self::new(labels.iter().map(|&c| c - 1).collect(), num_classes)
    }

    /// Contiguous balanced blocks: the first `n/K` nodes in class 0, etc.
    /// Remainders go to the lowest classes.
    pub fn balanced(n: usize, num_classes: usize) -> Result<Self> {
        let sizes = split_sizes(n, num_classes);
        Self::from_sizes(&sizes)
    }

    /// Contiguous blocks of the given sizes.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let labels = sizes
            .iter()
            .enumerate()
            .flat_map(|(k, &s)| std::iter::repeat_n(k, s))
            .collect();
        Self::new(labels, sizes.len())
    }

    /// Block sizes proportional to `proportions`, rounded by largest remainder.
    pub fn from_proportions(n: usize, proportions: &[f64]) -> Result<Self> {
        let sizes = proportional_sizes(n, proportions)?;
        Self::from_sizes(&sizes)
    }

    /// Random labels with class proportions drawn from a symmetric Dirichlet
    /// prior, then i.i.d. categorical assignments. A simulation convenience.
    pub fn random_dirichlet(n: usize, num_classes: usize, concentration: f64, seed: u64) -> Result<Self> {
        if concentration <= 0.0 {
            return Err(Error::InvalidParameter("Dirichlet concentration must be positive".into()));
        }
        let mut rng = rng::stream(seed, Purpose::Labels, 0);
        let gamma = Gamma::new(concentration, 1.0)
            .map_err(|e| Error::InvalidParameter(format!("gamma: {e}")))?;
        let mut weights: Vec<f64> = (0..num_classes).map(|_| gamma.sample(&mut rng)).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let labels = (0..n)
            .map(|_| {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (k, w) in weights.iter().enumerate() {
                    acc += w;
                    if u < acc {
                        return k;
                    }
                }
                num_classes - 1
            })
            .collect();
        Self::new(labels, num_classes)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    #[inline]
    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.labels
    }

    /// `n_k(y)` for every class.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_classes];
        for &c in &self.labels {
            counts[c] += 1;
        }
        counts
    }

    /// `π(y)`: empirical class proportions.
    pub fn proportions(&self) -> Vec<f64> {
        let n = self.len().max(1) as f64;
        self.counts().into_iter().map(|c| c as f64 / n).collect()
    }

    /// Indices of the members of each class.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes];
        for (i, &c) in self.labels.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    /// Applies `perm` to every label: `y_i ↦ perm[y_i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert!(perm.len() >= self.num_classes, "permutation too short");
        Self {
            labels: self.labels.iter().map(|&c| perm[c]).collect(),
            num_classes: self.num_classes.max(perm.len()),
        }
    }

    /// Labels restricted to `indices`, in order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            num_classes: self.num_classes,
        }
    }

    /// Concatenates label vectors that share a class count.
    pub fn concat(parts: &[HardLabels]) -> Result<Self> {
        let k = parts.first().map_or(1, |p| p.num_classes);
        if parts.iter().any(|p| p.num_classes != k) {
            return Err(Error::InvalidLabels("concatenating labels with different class counts".into()));
        }
        Ok(Self {
            labels: parts.iter().flat_map(|p| p.labels.iter().copied()).collect(),
            num_classes: k,
        })
    }

    /// One-hot matrix view.
    pub fn to_soft(&self) -> SoftLabels {
        let mut w = DMatrix::zeros(self.len(), self.num_classes);
        for (i, &c) in self.labels.iter().enumerate() {
            w[(i, c)] = 1.0;
        }
        SoftLabels { weights: w }
    }

    /// Number of positions where the two vectors differ.
    pub fn hamming(&self, other: &HardLabels) -> usize {
        self.labels
            .iter()
            .zip(&other.labels)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Row-stochastic `n × K` assignment weights.
#[derive(Clone, Debug, PartialEq)]
pub struct SoftLabels {
    weights: DMatrix<f64>,
}

impl SoftLabels {
    pub fn new(weights: DMatrix<f64>) -> Result<Self> {
        if weights.ncols() == 0 {
            return Err(Error::InvalidLabels("soft labels need at least one class".into()));
        }
        for (i, row) in weights.row_iter().enumerate() {
            if row.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
                return Err(Error::InvalidLabels(format!("row {i} has a negative or non-finite weight")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > SOFT_ROW_TOL {
                return Err(Error::InvalidLabels(format!("row {i} sums to {s}, not 1")));
            }
        }
        Ok(Self { weights })
    }

    /// Rows uniform over `num_classes`.
    pub fn uniform(n: usize, num_classes: usize) -> Self {
        Self {
            weights: DMatrix::from_element(n, num_classes, 1.0 / num_classes as f64),
        }
    }

    pub(crate) fn from_normalized(weights: DMatrix<f64>) -> Self {
        Self { weights }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.weights.nrows()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.weights.nrows() == 0
    }

    #[inline]
    pub fn num_classes(&self) -> usize {
        self.weights.ncols()
    }

    #[inline]
    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    /// Effective class sizes `Σ_i w_ik`.
    pub fn class_mass(&self) -> Vec<f64> {
        (0..self.num_classes())
            .map(|k| self.weights.column(k).iter().sum())
            .collect()
    }

    /// MAP assignment per row; ties go to the lowest class index.
    pub fn harden(&self) -> HardLabels {
        let labels = self
            .weights
            .row_iter()
            .map(|row| {
                let mut best = 0;
                for k in 1..row.len() {
                    if row[k] > row[best] {
                        best = k;
                    }
                }
                best
            })
            .collect();
        HardLabels {
            labels,
            num_classes: self.num_classes(),
        }
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &SoftLabels) -> f64 {
        self.weights
            .iter()
            .zip(other.weights.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl From<&HardLabels> for SoftLabels {
    fn from(h: &HardLabels) -> Self {
        h.to_soft()
    }
}

/// Either kind of label vector, accepted by operators that support both.
#[derive(Clone, Copy, Debug)]
pub enum LabelsRef<'a> {
    Hard(&'a HardLabels),
    Soft(&'a SoftLabels),
}

impl LabelsRef<'_> {
    pub fn len(&self) -> usize {
        match self {
            LabelsRef::Hard(h) => h.len(),
            LabelsRef::Soft(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn num_classes(&self) -> usize {
        match self {
            LabelsRef::Hard(h) => h.num_classes(),
            LabelsRef::Soft(s) => s.num_classes(),
        }
    }
}

impl<'a> From<&'a HardLabels> for LabelsRef<'a> {
    fn from(h: &'a HardLabels) -> Self {
        LabelsRef::Hard(h)
    }
}

impl<'a> From<&'a SoftLabels> for LabelsRef<'a> {
    fn from(s: &'a SoftLabels) -> Self {
        LabelsRef::Soft(s)
    }
}

/// Sizes of `parts` contiguous groups covering `n` items; the first
/// `n % parts` groups get one extra item.
pub fn split_sizes(n: usize, parts: usize) -> Vec<usize> {
    let base = n / parts;
    let extra = n % parts;
    (0..parts).map(|g| base + usize::from(g < extra)).collect()
}

fn proportional_sizes(n: usize, proportions: &[f64]) -> Result<Vec<usize>> {
    if proportions.is_empty() || proportions.iter().any(|&p| !(p >= 0.0)) {
        return Err(Error::InvalidParameter("proportions must be nonnegative and nonempty".into()));
    }
    let total: f64 = proportions.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidParameter("proportions sum to zero".into()));
    }
    let exact: Vec<f64> = proportions.iter().map(|p| p / total * n as f64).collect();
    let mut sizes: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let mut short = n - sizes.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &k in order.iter().cycle() {
        if short == 0 {
            break;
        }
        sizes[k] += 1;
        short -= 1;
    }
    Ok(sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_checked() {
        assert!(HardLabels::new(vec![0, 2], 2).is_err());
        assert!(HardLabels::new(vec![0, 1], 0).is_err());
        let y = HardLabels::from_one_indexed(&[1, 1, 2, 2], 2).unwrap();
        assert_eq!(y.as_slice(), &[0, 0, 1, 1]);
        assert!(HardLabels::from_one_indexed(&[0, 1], 2).is_err());
    }

    #[test]
    fn one_hot_round_trip() {
        let y = HardLabels::new(vec![2, 0, 1, 2], 3).unwrap();
        let s = y.to_soft();
        assert_eq!(s.weights().row(0).iter().copied().collect::<Vec<_>>(), vec![0.0, 0.0, 1.0]);
        assert_eq!(s.harden(), y);
    }

    #[test]
    fn soft_rows_must_be_stochastic() {
        assert!(SoftLabels::new(DMatrix::from_row_slice(1, 2, &[0.5, 0.6])).is_err());
        assert!(SoftLabels::new(DMatrix::from_row_slice(1, 2, &[-0.1, 1.1])).is_err());
        assert!(SoftLabels::new(DMatrix::from_row_slice(1, 2, &[0.25, 0.75])).is_ok());
    }

    #[test]
    fn sizes_and_proportions() {
        assert_eq!(split_sizes(9, 4), vec![3, 2, 2, 2]);
        let y = HardLabels::from_proportions(20, &[1.0, 4.0, 6.0, 9.0]).unwrap();
        assert_eq!(y.counts(), vec![1, 4, 6, 9]);
        let z = HardLabels::from_proportions(10, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(z.counts().iter().sum::<usize>(), 10);
    }

    #[test]
    fn dirichlet_labels_are_valid_and_seeded() {
        let a = HardLabels::random_dirichlet(100, 4, 2.0, 5).unwrap();
        let b = HardLabels::random_dirichlet(100, 4, 2.0, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
    }
}
