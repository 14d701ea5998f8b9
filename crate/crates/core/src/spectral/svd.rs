//! Truncated SVD of a sparse matrix by block subspace iteration.
//!
//! Only products `A X` and `Aᵀ Y` touch the sparse matrix; the dense work is a
//! thin QR and an SVD of an `m × p` block with `p` a small multiple of the
//! target rank (Rayleigh–Ritz).

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::{Entry, SparseBi};
use crate::rng::{self, Purpose};

/// Top singular triplets: `A ≈ U diag(S) Vᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSvd {
    pub u: DMatrix<f64>,
    pub s: Vec<f64>,
    pub v: DMatrix<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvdOptions {
    /// Accepted residual `‖A v_i − s_i u_i‖ / s_1`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SvdOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 1000,
        }
    }
}

fn block_size(rank: usize, n: usize, m: usize) -> usize {
    (2 * rank).max(rank + 10).min(n.min(m))
}

/// Top-`rank` singular triplets of `a`, singular values nonincreasing.
pub fn truncated_svd<T: Entry>(a: &SparseBi<T>, rank: usize, seed: u64) -> Result<TruncatedSvd> {
    truncated_svd_with(a, rank, seed, SvdOptions::default())
}

pub fn truncated_svd_with<T: Entry>(a: &SparseBi<T>, rank: usize, seed: u64, opts: SvdOptions) -> Result<TruncatedSvd> {
    let (n, m) = a.shape();
    if rank == 0 || rank > n.min(m) {
        return Err(Error::InvalidParameter(format!(
            "rank {rank} must lie in 1..={} for a {n}×{m} matrix",
            n.min(m)
        )));
    }
    let p = block_size(rank, n, m);
    let mut rng = rng::stream(seed, Purpose::Svd, 0);
    let mut v = DMatrix::from_fn(m, p, |_, _| StandardNormal.sample(&mut rng));
    v = v.qr().q();

    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iter {
        let q = a.mul_dense(&v).qr().q();
        let z = a.tr_mul_dense(&q);
        // z = Aᵀ Q = Uz S Vzᵀ, hence A ≈ (Q Vz) S Uzᵀ on this subspace
        let svd = z.svd(true, true);
        let (uz, vzt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
        let order = descending(&svd.singular_values.as_slice()[..]);
        let s: Vec<f64> = order.iter().map(|&c| svd.singular_values[c]).collect();
        let uz = select_columns(&uz, &order);
        let u_full = &q * select_columns(&vzt.transpose(), &order);

        let s1 = s[0];
        let vr = uz.columns(0, rank).into_owned();
        let av = a.mul_dense(&vr);
        residual = (0..rank)
            .map(|c| (av.column(c) - u_full.column(c) * s[c]).norm())
            .fold(0.0, f64::max);
        let scale = if s1 > 0.0 { s1 } else { 1.0 };
        residual /= scale;
        if residual <= opts.tol {
            return Ok(TruncatedSvd {
                u: u_full.columns(0, rank).into_owned(),
                s: s[..rank].to_vec(),
                v: vr,
            });
        }
        v = uz;
    }
    Err(Error::SvdNonConvergence {
        iterations: opts.max_iter,
        residual,
    })
}

fn descending(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&x, &y| values[y].total_cmp(&values[x]).then(x.cmp(&y)));
    order
}

fn select_columns(mat: &DMatrix<f64>, order: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(mat.nrows(), order.len(), |i, c| mat[(i, order[c])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedBiAdjacency;

    #[test]
    fn rank_one_matrix() {
        let u = [1.0, 2.0, 0.0, 3.0];
        let v = [2.0, 1.0, 1.0];
        let dense = DMatrix::from_fn(4, 3, |i, j| u[i] * v[j]);
        let a = WeightedBiAdjacency::from_dense(&dense);
        let svd = truncated_svd(&a, 2, 1).unwrap();
        let expected = 14f64.sqrt() * 6f64.sqrt();
        assert!((svd.s[0] - expected).abs() < 1e-9 * expected);
        assert!(svd.s[1].abs() < 1e-9);
        let cos: f64 = (0..4).map(|i| svd.u[(i, 0)] * u[i]).sum::<f64>() / 14f64.sqrt();
        assert!((cos.abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn orthonormal_factors_and_order() {
        let dense = DMatrix::from_fn(30, 20, |i, j| ((i * 7 + j * 3) % 5) as f64 + (i == j) as u8 as f64);
        let a = WeightedBiAdjacency::from_dense(&dense);
        let svd = truncated_svd(&a, 4, 3).unwrap();
        let utu = svd.u.transpose() * &svd.u;
        let vtv = svd.v.transpose() * &svd.v;
        assert!((utu - DMatrix::identity(4, 4)).amax() < 1e-8);
        assert!((vtv - DMatrix::identity(4, 4)).amax() < 1e-8);
        assert!(svd.s.windows(2).all(|w| w[0] >= w[1]));
        let dense_sv = dense.singular_values();
        let mut sorted: Vec<f64> = dense_sv.iter().copied().collect();
        sorted.sort_by(|x, y| y.total_cmp(x));
        for c in 0..4 {
            assert!((svd.s[c] - sorted[c]).abs() < 1e-8 * sorted[0]);
        }
    }

    #[test]
    fn bad_rank_rejected() {
        let a = WeightedBiAdjacency::from_dense(&DMatrix::from_element(3, 2, 1.0));
        assert!(truncated_svd(&a, 3, 0).is_err());
        assert!(truncated_svd(&a, 0, 0).is_err());
    }

    #[test]
    fn zero_matrix() {
        let a = WeightedBiAdjacency::from_dense(&DMatrix::zeros(5, 4));
        let svd = truncated_svd(&a, 2, 0).unwrap();
        assert_eq!(svd.s, vec![0.0, 0.0]);
    }
}
