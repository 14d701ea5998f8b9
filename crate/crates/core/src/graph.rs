//! Sparse biadjacency storage.
//!
//! A [`SparseBi`] keeps both a compressed-row and a compressed-column view of
//! the same entries. Block compression walks rows, its column dual walks
//! columns, and the SVD needs both `A x` and `Aᵀ y`, so both views are built
//! once at construction and the matrix is immutable afterwards.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Scalar stored in a sparse biadjacency matrix.
pub trait Entry: Copy + Send + Sync + PartialEq + std::fmt::Debug + 'static {
    fn to_f64(self) -> f64;
    fn is_zero(self) -> bool;
    fn add(self, other: Self) -> Self;
}

impl Entry for u32 {
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
    #[inline]
    fn is_zero(self) -> bool {
        self == 0
    }
    #[inline]
    fn add(self, other: Self) -> Self {
        self + other
    }
}

impl Entry for f64 {
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn is_zero(self) -> bool {
        self == 0.0
    }
    #[inline]
    fn add(self, other: Self) -> Self {
        self + other
    }
}

/// An `n × m` sparse matrix with row and column compressed indices.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseBi<T> {
    n: usize,
    m: usize,
    row_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    row_val: Vec<T>,
    col_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    col_val: Vec<T>,
}

/// Observed network: binary entries for the Bernoulli model, counts for the
/// Poisson model.
pub type BiAdjacency = SparseBi<u32>;

/// Real-valued sparse matrix (regularized adjacency, expected adjacency).
pub type WeightedBiAdjacency = SparseBi<f64>;

impl<T: Entry> SparseBi<T> {
    /// Builds from `(row, col, value)` triplets. Duplicate positions are
    /// summed and zero values dropped.
    pub fn from_triplets<I>(n: usize, m: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
        for (i, j, v) in triplets {
            if i >= n || j >= m {
                return Err(Error::InvalidParameter(format!(
                    "entry ({i}, {j}) outside a {n}x{m} matrix"
                )));
            }
            rows[i].push((j, v));
        }
        Ok(Self::from_rows(n, m, rows))
    }

    /// Builds from per-row entry lists (any order; duplicates summed).
    pub(crate) fn from_rows(n: usize, m: usize, mut rows: Vec<Vec<(usize, T)>>) -> Self {
        debug_assert_eq!(rows.len(), n);
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut row_idx = Vec::new();
        let mut row_val = Vec::new();
        for row in rows.iter_mut() {
            row.sort_unstable_by_key(|&(j, _)| j);
            let mut last: Option<usize> = None;
            for &(j, v) in row.iter() {
                if last == Some(j) {
                    let slot = row_val.last_mut().expect("previous entry");
                    *slot = T::add(*slot, v);
                } else {
                    row_idx.push(j);
                    row_val.push(v);
                    last = Some(j);
                }
            }
            row_ptr.push(row_idx.len());
        }
        // drop explicit zeros
        if row_val.iter().any(|v| v.is_zero()) {
            let mut ptr = vec![0usize];
            let mut idx = Vec::with_capacity(row_idx.len());
            let mut val = Vec::with_capacity(row_val.len());
            for i in 0..n {
                for p in row_ptr[i]..row_ptr[i + 1] {
                    if !row_val[p].is_zero() {
                        idx.push(row_idx[p]);
                        val.push(row_val[p]);
                    }
                }
                ptr.push(idx.len());
            }
            row_ptr = ptr;
            row_idx = idx;
            row_val = val;
        }
        let (col_ptr, col_idx, col_val) = compress_transpose(n, m, &row_ptr, &row_idx, &row_val);
        SparseBi {
            n,
            m,
            row_ptr,
            row_idx,
            row_val,
            col_ptr,
            col_idx,
            col_val,
        }
    }

    pub fn from_dense(dense: &DMatrix<T>) -> Self {
        let (n, m) = dense.shape();
        let rows = (0..n)
            .map(|i| {
                (0..m)
                    .filter(|&j| !dense[(i, j)].is_zero())
                    .map(|j| (j, dense[(i, j)]))
                    .collect()
            })
            .collect();
        Self::from_rows(n, m, rows)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    /// Number of stored (nonzero) entries.
    #[inline]
    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    /// Nonzero entries of row `i` as `(column, value)`, columns ascending.
    #[inline]
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.row_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.row_val[range].iter().copied())
    }

    /// Nonzero entries of column `j` as `(row, value)`, rows ascending.
    #[inline]
    pub fn col(&self, j: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.col_val[range].iter().copied())
    }

    /// All entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> Option<T> {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.row_idx[range.clone()]
            .binary_search(&j)
            .ok()
            .map(|p| self.row_val[range.start + p])
    }

    /// `Aᵀ`, obtained by swapping the two compressed views.
    pub fn transpose(&self) -> Self {
        SparseBi {
            n: self.m,
            m: self.n,
            row_ptr: self.col_ptr.clone(),
            row_idx: self.col_idx.clone(),
            row_val: self.col_val.clone(),
            col_ptr: self.row_ptr.clone(),
            col_idx: self.row_idx.clone(),
            col_val: self.row_val.clone(),
        }
    }

    /// Extracts rows `rows` and columns `cols` (in the given order) into a new
    /// matrix whose row `a` is `rows[a]` and column `b` is `cols[b]`.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_map = vec![usize::MAX; self.m];
        for (b, &j) in cols.iter().enumerate() {
            col_map[j] = b;
        }
        let out_rows = rows
            .iter()
            .map(|&i| {
                self.row(i)
                    .filter_map(|(j, v)| {
                        let b = col_map[j];
                        (b != usize::MAX).then_some((b, v))
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(rows.len(), cols.len(), out_rows)
    }

    /// Row sums (degrees for a binary matrix).
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v.to_f64()).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.m).map(|j| self.col(j).map(|(_, v)| v.to_f64()).sum()).collect()
    }

    pub fn total(&self) -> f64 {
        self.row_val.iter().map(|v| v.to_f64()).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.m);
        for (i, j, v) in self.triplets() {
            out[(i, j)] = v.to_f64();
        }
        out
    }

    pub fn to_weighted(&self) -> WeightedBiAdjacency {
        self.scaled(None, None)
    }

    /// `D_r A D_c` for optional diagonal row and column scalings.
    pub fn scaled(&self, row_scale: Option<&[f64]>, col_scale: Option<&[f64]>) -> WeightedBiAdjacency {
        let rows = (0..self.n)
            .map(|i| {
                let ri = row_scale.map_or(1.0, |s| s[i]);
                self.row(i)
                    .map(|(j, v)| (j, v.to_f64() * ri * col_scale.map_or(1.0, |s| s[j])))
                    .collect()
            })
            .collect();
        SparseBi::from_rows(self.n, self.m, rows)
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.m);
        (0..self.n)
            .into_par_iter()
            .with_min_len(256)
            .map(|i| self.row(i).map(|(j, v)| v.to_f64() * x[j]).sum())
            .collect()
    }

    /// `Aᵀ y`.
    pub fn tr_mul_vec(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.n);
        (0..self.m)
            .into_par_iter()
            .with_min_len(256)
            .map(|j| self.col(j).map(|(i, v)| v.to_f64() * y[i]).sum())
            .collect()
    }

    /// `A X` for a dense `m × r` block.
    pub fn mul_dense(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(x.nrows(), self.m, "mul_dense: inner dimension");
        let r = x.ncols();
        let rows: Vec<Vec<f64>> = (0..self.n)
            .into_par_iter()
            .with_min_len(64)
            .map(|i| {
                let mut acc = vec![0.0; r];
                for (j, v) in self.row(i) {
                    let v = v.to_f64();
                    for (c, a) in acc.iter_mut().enumerate() {
                        *a += v * x[(j, c)];
                    }
                }
                acc
            })
            .collect();
        DMatrix::from_fn(self.n, r, |i, c| rows[i][c])
    }

    /// `Aᵀ Y` for a dense `n × r` block.
    pub fn tr_mul_dense(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        self.transpose_view_mul(y)
    }

    fn transpose_view_mul(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(y.nrows(), self.n, "tr_mul_dense: inner dimension");
        let r = y.ncols();
        let cols: Vec<Vec<f64>> = (0..self.m)
            .into_par_iter()
            .with_min_len(64)
            .map(|j| {
                let mut acc = vec![0.0; r];
                for (i, v) in self.col(j) {
                    let v = v.to_f64();
                    for (c, a) in acc.iter_mut().enumerate() {
                        *a += v * y[(i, c)];
                    }
                }
                acc
            })
            .collect();
        DMatrix::from_fn(self.m, r, |j, c| cols[j][c])
    }

    pub fn mul_dvector(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(self.mul_vec(x.as_slice()))
    }
}

impl BiAdjacency {
    /// True when every stored entry equals 1.
    pub fn is_binary(&self) -> bool {
        self.row_val.iter().all(|&v| v == 1)
    }

    /// Node degrees (row sums) as integers.
    pub fn degrees(&self) -> Vec<u64> {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v as u64).sum()).collect()
    }
}

fn compress_transpose<T: Entry>(
    n: usize,
    m: usize,
    row_ptr: &[usize],
    row_idx: &[usize],
    row_val: &[T],
) -> (Vec<usize>, Vec<usize>, Vec<T>) {
    let nnz = row_idx.len();
    let mut col_ptr = vec![0usize; m + 1];
    for &j in row_idx {
        col_ptr[j + 1] += 1;
    }
    for j in 0..m {
        col_ptr[j + 1] += col_ptr[j];
    }
    let mut next = col_ptr.clone();
    let mut col_idx = vec![0usize; nnz];
    let mut col_val: Vec<T> = Vec::with_capacity(nnz);
    // filled by position below
    let mut slots: Vec<Option<T>> = vec![None; nnz];
    for i in 0..n {
        for p in row_ptr[i]..row_ptr[i + 1] {
            let j = row_idx[p];
            let q = next[j];
            col_idx[q] = i;
            slots[q] = Some(row_val[p]);
            next[j] += 1;
        }
    }
    col_val.extend(slots.into_iter().map(|s| s.expect("every slot filled")));
    (col_ptr, col_idx, col_val)
}
