//! The partitioned pipeline.
//!
//! Rows are split at random into a top and a bottom half, the bottom half
//! into `Q` row groups `R_q` and the columns into `Q` groups `C_q`. Writing
//! `A^(p,q) = A[R_p, C_q]` with indices in `Z_Q`:
//!
//! 1. spectral clustering of the stacked pairs `[A^(q−1,q); A^(q,q)]` (rows)
//!    and `[A^(q,q) A^(q,q+1)]` (columns);
//! 2. fusion of the overlapping estimates into one labeling per side;
//! 3. local means and LR refinement on `A^(q,q+2)`, then local means on
//!    `A^(q,q+3)`, summed into a global `Λ̂`;
//! 4. LR classification of the top half with `Λ̂`.
//!
//! The halves then swap roles, and the whole procedure is repeated on `Aᵀ` for
//! the column labels. Every block a stage reads is disjoint from the blocks
//! its inputs were estimated on.

use std::time::Instant;

use log::warn;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Entry, SparseBi};
use crate::labels::{split_sizes, HardLabels};
use crate::metrics::{mis, optimal_permutation};
use crate::model::MeanParams;
use crate::pl::{block_compress, estimate_means, lr_classify};
use crate::rng::{self, Purpose};
use crate::spectral::{spectral_cluster_cols, spectral_cluster_rows, SpectralConfig};

/// Number of groups per axis in the provable pipeline.
pub const Q: usize = 4;

/// A random split of the rows into two halves of `q` groups each, and of the
/// columns into `q` groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionPlan {
    q: usize,
    seed: u64,
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
    top_groups: Vec<Vec<usize>>,
    bottom_groups: Vec<Vec<usize>>,
    col_groups: Vec<Vec<usize>>,
}

fn contiguous_groups(items: &[usize], parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for size in split_sizes(items.len(), parts) {
        out.push(items[start..start + size].to_vec());
        start += size;
    }
    out
}

/// Draws a partition plan. The top half has `⌈n/2⌉` rows; group sizes within
/// a half, and among columns, differ by at most one.
pub fn make_partition(n: usize, m: usize, q: usize, seed: u64) -> Result<PartitionPlan> {
    if q == 0 {
        return Err(Error::InvalidParameter("q must be at least 1".into()));
    }
    if n < 2 * q || m < q {
        return Err(Error::PartitionTooSmall(format!(
            "a {n}×{m} matrix cannot be split into 2×{q} row groups and {q} column groups"
        )));
    }
    let mut row_perm: Vec<usize> = (0..n).collect();
    row_perm.shuffle(&mut rng::stream(seed, Purpose::Partition, 0));
    let mut col_perm: Vec<usize> = (0..m).collect();
    col_perm.shuffle(&mut rng::stream(seed, Purpose::Partition, 1));
    let top = n.div_ceil(2);
    Ok(PartitionPlan {
        q,
        seed,
        top_groups: contiguous_groups(&row_perm[..top], q),
        bottom_groups: contiguous_groups(&row_perm[top..], q),
        col_groups: contiguous_groups(&col_perm, q),
        row_perm,
        col_perm,
    })
}

impl PartitionPlan {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn row_perm(&self) -> &[usize] {
        &self.row_perm
    }

    pub fn col_perm(&self) -> &[usize] {
        &self.col_perm
    }

    pub fn top_groups(&self) -> &[Vec<usize>] {
        &self.top_groups
    }

    pub fn bottom_groups(&self) -> &[Vec<usize>] {
        &self.bottom_groups
    }

    pub fn col_groups(&self) -> &[Vec<usize>] {
        &self.col_groups
    }

    pub fn top(&self) -> Vec<usize> {
        self.top_groups.concat()
    }

    pub fn bottom(&self) -> Vec<usize> {
        self.bottom_groups.concat()
    }

    /// Smallest row or column group.
    pub fn min_group_size(&self) -> usize {
        self.top_groups
            .iter()
            .chain(&self.bottom_groups)
            .chain(&self.col_groups)
            .map(Vec::len)
            .min()
            .unwrap_or(0)
    }
}

/// `σ` maximizing `|{i : σ(a_i) = b_i}|`, lexicographically smallest among
/// optima.
pub fn match_labels(labels_a: &HardLabels, labels_b: &HardLabels) -> Result<Vec<usize>> {
    optimal_permutation(labels_a, labels_b)
}

/// Overlapping per-pair labels for one side.
///
/// Pair `p` labels two consecutive groups: `lead[p]` covers group
/// `p + shift` and `trail[p]` covers group `p + shift + 1` (mod `q`), each in
/// pair `p`'s own label space. Rows use `shift = q − 1`, columns `shift = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubBlockLabels {
    pub lead: Vec<HardLabels>,
    pub trail: Vec<HardLabels>,
    pub shift: usize,
}

impl SubBlockLabels {
    pub fn q(&self) -> usize {
        self.lead.len()
    }

    /// Pair whose `lead` labels group `g`.
    fn lead_pair(&self, g: usize) -> usize {
        let q = self.q();
        (g + q - self.shift % q) % q
    }
}

/// Fused labels, one vector per group, all in a single label space.
#[derive(Clone, Debug, PartialEq)]
pub struct FusedLabels {
    pub groups: Vec<HardLabels>,
    /// Map from each pair's label space into the common one.
    pub pair_maps: Vec<Vec<usize>>,
    /// Whether the matching that closes the cycle agrees with the chain.
    pub cyclic_consistent: bool,
}

impl FusedLabels {
    pub fn concatenated(&self) -> HardLabels {
        HardLabels::concat(&self.groups).expect("fused groups share a class count")
    }
}

fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&c| outer[c]).collect()
}

fn invert(perm: &[usize]) -> Vec<usize> {
    crate::metrics::invert_permutation(perm)
}

/// Chains the overlap matchings `σ_p : pair p → pair p+1` from pair 0 so that
/// every group carries pair 0's label space. The closing matching from the
/// last pair back to pair 0 is only checked, and a mismatch is logged.
pub fn fuse_subblock_labels(sub: &SubBlockLabels) -> Result<FusedLabels> {
    let q = sub.q();
    if q == 0 || sub.trail.len() != q {
        return Err(Error::InvalidLabels("need one lead and one trail labeling per pair".into()));
    }
    let k = sub.lead.iter().chain(&sub.trail).map(HardLabels::num_classes).max().unwrap_or(1);
    let sigma: Vec<Vec<usize>> = (0..q)
        .map(|p| {
            let next = (p + 1) % q;
            let mut s = match_labels(&sub.trail[p], &sub.lead[next])?;
            s.resize(k, 0);
            fill_permutation(&mut s, k);
            Ok(s)
        })
        .collect::<Result<_>>()?;

    let mut maps = vec![(0..k).collect::<Vec<_>>()];
    for p in 0..q - 1 {
        let next = compose(&maps[p], &invert(&sigma[p]));
        maps.push(next);
    }
    let closing = compose(&maps[q - 1], &invert(&sigma[q - 1]));
    let cyclic_consistent = q == 1 || closing == maps[0];
    if !cyclic_consistent {
        warn!("sub-block matchings disagree around the cycle; keeping the chained labels");
    }

    let groups = (0..q)
        .map(|g| {
            let p = sub.lead_pair(g);
            HardLabels::new(
                sub.lead[p].as_slice().iter().map(|&c| maps[p][c]).collect(),
                k,
            )
        })
        .collect::<Result<_>>()?;
    Ok(FusedLabels {
        groups,
        pair_maps: maps,
        cyclic_consistent,
    })
}

/// Completes a partial assignment into a permutation of `0..k`.
fn fill_permutation(s: &mut [usize], k: usize) {
    let mut used = vec![false; k];
    let mut dup = Vec::new();
    for (i, &c) in s.iter().enumerate() {
        if c < k && !used[c] {
            used[c] = true;
        } else {
            dup.push(i);
        }
    }
    let mut free = (0..k).filter(|&c| !used[c]);
    for i in dup {
        s[i] = free.next().expect("counts match");
    }
}

fn sub_seed(seed: u64, tag: u64) -> u64 {
    rng::derive_seed(seed, Purpose::Provable, tag)
}

fn spectral_for(cfg: &SpectralConfig, seed: u64, tag: u64) -> SpectralConfig {
    SpectralConfig {
        seed: sub_seed(seed ^ cfg.seed, tag),
        ..cfg.clone()
    }
}

/// The sub-block stage of the pipeline on the groups `work` × `cols`: spectral labels
/// for every stacked pair, rows then columns.
pub fn subblock_spectral<T: Entry>(
    a: &SparseBi<T>,
    work: &[Vec<usize>],
    cols: &[Vec<usize>],
    k: usize,
    l: usize,
    cfg: &SpectralConfig,
    seed: u64,
) -> Result<(SubBlockLabels, SubBlockLabels)> {
    let q = work.len();
    Error::check_dim("subblock_spectral: column groups", q, cols.len())?;
    let runs: Vec<(HardLabels, HardLabels)> = (0..2 * q)
        .into_par_iter()
        .map(|task| {
            let p = task % q;
            let tag = task as u64;
            if task < q {
                // rows R_{p-1} ∪ R_p against C_p
                let prev = (p + q - 1) % q;
                let rows = [work[prev].as_slice(), work[p].as_slice()].concat();
                let block = a.submatrix(&rows, &cols[p]);
                let y = spectral_cluster_rows(&block, k, l, &spectral_for(cfg, seed, tag))?;
                let (lead, trail) = y.as_slice().split_at(work[prev].len());
                Ok((HardLabels::new(lead.to_vec(), k)?, HardLabels::new(trail.to_vec(), k)?))
            } else {
                // rows R_p against C_p ∪ C_{p+1}
                let next = (p + 1) % q;
                let cs = [cols[p].as_slice(), cols[next].as_slice()].concat();
                let block = a.submatrix(&work[p], &cs);
                let z = spectral_cluster_cols(&block, k, l, &spectral_for(cfg, seed, tag))?;
                let (lead, trail) = z.as_slice().split_at(cols[p].len());
                Ok((HardLabels::new(lead.to_vec(), l)?, HardLabels::new(trail.to_vec(), l)?))
            }
        })
        .collect::<Result<_>>()?;
    let (row_runs, col_runs) = runs.split_at(q);
    let rows = SubBlockLabels {
        lead: row_runs.iter().map(|r| r.0.clone()).collect(),
        trail: row_runs.iter().map(|r| r.1.clone()).collect(),
        shift: q - 1,
    };
    let cols = SubBlockLabels {
        lead: col_runs.iter().map(|r| r.0.clone()).collect(),
        trail: col_runs.iter().map(|r| r.1.clone()).collect(),
        shift: 0,
    };
    Ok((rows, cols))
}

/// Spectral initialization and fusion on the bottom half of `plan`.
pub fn initial_labels<T: Entry>(
    a: &SparseBi<T>,
    plan: &PartitionPlan,
    k: usize,
    l: usize,
    cfg: &SpectralConfig,
    seed: u64,
) -> Result<(FusedLabels, FusedLabels)> {
    let (rows, cols) = subblock_spectral(a, &plan.bottom_groups, &plan.col_groups, k, l, cfg, seed)?;
    Ok((fuse_subblock_labels(&rows)?, fuse_subblock_labels(&cols)?))
}

/// `𝓛(A[rows, cols], y, z)`.
fn local_means<T: Entry>(a: &SparseBi<T>, rows: &[usize], cols: &[usize], y: &HardLabels, z: &HardLabels) -> Result<MeanParams> {
    let block = a.submatrix(rows, cols);
    estimate_means(&block_compress(&block, z)?, y)
}

/// Assembles per-group labels into a full-length vector over `len` nodes.
fn scatter(groups: &[Vec<usize>], labels: &[HardLabels], len: usize, k: usize) -> Result<HardLabels> {
    let mut out = vec![0usize; len];
    for (idx, lab) in groups.iter().zip(labels) {
        for (&i, &c) in idx.iter().zip(lab.as_slice()) {
            out[i] = c;
        }
    }
    HardLabels::new(out, k)
}

/// Pipeline stage at which labels are recorded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// Fused spectral labels on the working half.
    Fused,
    /// First LR refinement on the working half.
    Refined,
    /// Final LR labels on the target half.
    Final,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Rows,
    Cols,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageRecord {
    pub side: Side,
    /// 0 when the bottom half is the working half, 1 after the swap.
    pub round: usize,
    pub stage: Stage,
    pub nodes: usize,
    /// Against the supplied truth, when given.
    pub mis: Option<f64>,
    /// Labels changed relative to the previous stage on the same nodes.
    pub changes: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ProvableReport {
    pub stages: Vec<StageRecord>,
    pub cyclic_inconsistencies: usize,
    /// Wall-clock seconds per named phase.
    pub seconds: Vec<(String, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProvableFit {
    pub rows: HardLabels,
    pub cols: HardLabels,
    pub report: ProvableReport,
}

/// Ground truth for per-stage reporting.
#[derive(Clone, Copy, Debug)]
pub struct Truth<'a> {
    pub rows: &'a HardLabels,
    pub cols: &'a HardLabels,
}

struct RoundOutput {
    /// Labels for the target rows, in the order given.
    target: HardLabels,
    /// Refined labels of the working rows, by group.
    refined: Vec<HardLabels>,
    cyclic_inconsistencies: usize,
}

struct Round<'a, T> {
    a: &'a SparseBi<T>,
    work: &'a [Vec<usize>],
    cols: &'a [Vec<usize>],
    target: &'a [usize],
    k: usize,
    l: usize,
    cfg: &'a SpectralConfig,
    seed: u64,
}

impl<T: Entry> Round<'_, T> {
    fn run(
        &self,
        align_to: Option<&HardLabels>,
        side: Side,
        round: usize,
        truth: Option<&HardLabels>,
        report: &mut ProvableReport,
    ) -> Result<RoundOutput> {
        let (a, work, cols, k, l) = (self.a, self.work, self.cols, self.k, self.l);
        let q = work.len();
        let t0 = Instant::now();
        let (rows_sub, cols_sub) = subblock_spectral(a, work, cols, k, l, self.cfg, self.seed)?;
        let mut fused_rows = fuse_subblock_labels(&rows_sub)?;
        let fused_cols = fuse_subblock_labels(&cols_sub)?;
        let inconsistent = usize::from(!fused_rows.cyclic_consistent) + usize::from(!fused_cols.cyclic_consistent);
        if let Some(anchor) = align_to {
            let sigma = match_labels(&fused_rows.concatenated(), anchor)?;
            for g in fused_rows.groups.iter_mut() {
                *g = g.permuted(&sigma);
            }
        }
        report.seconds.push((format!("{side:?}/{round}/spectral").to_lowercase(), t0.elapsed().as_secs_f64()));

        let work_all: Vec<usize> = work.concat();
        let truth_work = truth.map(|t| t.select(&work_all));
        let fused_all = fused_rows.concatenated();
        report.stages.push(StageRecord {
            side,
            round,
            stage: Stage::Fused,
            nodes: work_all.len(),
            mis: truth_work.as_ref().map(|t| mis(&fused_all, t)).transpose()?,
            changes: None,
        });

        let t1 = Instant::now();
        let y0 = &fused_rows.groups;
        let z0 = &fused_cols.groups;
        let lr_seed = |tag: u64| sub_seed(self.seed, 100 + tag);

        // row refinement on A^(q,q+2)
        let refined: Vec<HardLabels> = (0..q)
            .into_par_iter()
            .map(|g| {
                let c = (g + 2) % q;
                let lam = local_means(a, &work[g], &cols[c], &y0[g], &z0[c])?;
                lr_classify(&a.submatrix(&work[g], &cols[c]), &lam, &z0[c], lr_seed(g as u64))
            })
            .collect::<Result<_>>()?;
        // column refinement on A^(c+2,c), with the fused row labels
        let at = a.transpose();
        let refined_cols: Vec<HardLabels> = (0..q)
            .into_par_iter()
            .map(|c| {
                let g = (c + 2) % q;
                let gam = local_means(&at, &cols[c], &work[g], &z0[c], &y0[g])?;
                lr_classify(&at.submatrix(&cols[c], &work[g]), &gam, &y0[g], lr_seed((q + c) as u64))
            })
            .collect::<Result<_>>()?;

        let refined_all = HardLabels::concat(&refined)?;
        report.stages.push(StageRecord {
            side,
            round,
            stage: Stage::Refined,
            nodes: work_all.len(),
            mis: truth_work.as_ref().map(|t| mis(&refined_all, t)).transpose()?,
            changes: Some(refined_all.hamming(&fused_all)),
        });

        // second local means on A^(g,g+3), summed over column groups
        let parts: Vec<MeanParams> = (0..q)
            .into_par_iter()
            .map(|g| {
                let c = (g + 3) % q;
                local_means(a, &work[g], &cols[c], &refined[g], &refined_cols[c])
            })
            .collect::<Result<_>>()?;
        let lambda = MeanParams::sum(&parts).expect("q >= 1");
        let z_all = scatter(cols, &refined_cols, a.ncols(), l)?;
        let target = lr_classify(&a.submatrix(self.target, &(0..a.ncols()).collect::<Vec<_>>()), &lambda, &z_all, lr_seed(2 * q as u64))?;
        report.seconds.push((format!("{side:?}/{round}/refine").to_lowercase(), t1.elapsed().as_secs_f64()));

        Ok(RoundOutput {
            target,
            refined,
            cyclic_inconsistencies: inconsistent,
        })
    }
}

/// One full side: both rounds and the concatenation, for the rows of `a`.
fn fit_side<T: Entry>(
    a: &SparseBi<T>,
    k: usize,
    l: usize,
    cfg: &SpectralConfig,
    seed: u64,
    side: Side,
    truth: Option<&HardLabels>,
    report: &mut ProvableReport,
) -> Result<HardLabels> {
    let (n, m) = a.shape();
    let plan = make_partition(n, m, Q, sub_seed(seed, 0))?;
    let need = k.max(l);
    if plan.min_group_size() < need {
        return Err(Error::PartitionTooSmall(format!(
            "a {n}×{m} matrix gives groups of {} nodes, fewer than max(K, L) = {need}",
            plan.min_group_size()
        )));
    }
    let (top, bottom) = (plan.top(), plan.bottom());

    let first = Round {
        a,
        work: &plan.bottom_groups,
        cols: &plan.col_groups,
        target: &top,
        k,
        l,
        cfg,
        seed: sub_seed(seed, 1),
    }
    .run(None, side, 0, truth, report)?;
    let y_top = first.target;
    record_final(report, side, 0, &y_top, truth.map(|t| t.select(&top)), None)?;

    let second = Round {
        a,
        work: &plan.top_groups,
        cols: &plan.col_groups,
        target: &bottom,
        k,
        l,
        cfg,
        seed: sub_seed(seed, 2),
    }
    .run(Some(&y_top), side, 1, truth, report)?;
    let y_bottom = second.target;
    let earlier = HardLabels::concat(&first.refined)?;
    record_final(report, side, 1, &y_bottom, truth.map(|t| t.select(&bottom)), Some(&earlier))?;
    report.cyclic_inconsistencies += first.cyclic_inconsistencies + second.cyclic_inconsistencies;

    let mut labels = vec![0usize; n];
    for (&i, &c) in top.iter().zip(y_top.as_slice()) {
        labels[i] = c;
    }
    for (&i, &c) in bottom.iter().zip(y_bottom.as_slice()) {
        labels[i] = c;
    }
    HardLabels::new(labels, k)
}

fn record_final(
    report: &mut ProvableReport,
    side: Side,
    round: usize,
    labels: &HardLabels,
    truth: Option<HardLabels>,
    previous: Option<&HardLabels>,
) -> Result<()> {
    report.stages.push(StageRecord {
        side,
        round,
        stage: Stage::Final,
        nodes: labels.len(),
        mis: truth.as_ref().map(|t| mis(labels, t)).transpose()?,
        changes: previous.map(|p| labels.hamming(p)),
    });
    Ok(())
}

/// Row and column labels from the partitioned pipeline.
pub fn provable_fit<T: Entry>(a: &SparseBi<T>, k: usize, l: usize, cfg: &SpectralConfig, seed: u64) -> Result<ProvableFit> {
    provable_fit_with_truth(a, k, l, cfg, seed, None)
}

/// As [`provable_fit`], recording per-stage misclassification against
/// `truth` in the report.
pub fn provable_fit_with_truth<T: Entry>(
    a: &SparseBi<T>,
    k: usize,
    l: usize,
    cfg: &SpectralConfig,
    seed: u64,
    truth: Option<Truth<'_>>,
) -> Result<ProvableFit> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidParameter("class counts must be at least 1".into()));
    }
    if let Some(t) = truth {
        Error::check_dim("provable_fit: row truth", a.nrows(), t.rows.len())?;
        Error::check_dim("provable_fit: column truth", a.ncols(), t.cols.len())?;
    }
    let mut report = ProvableReport::default();
    let rows = fit_side(a, k, l, cfg, sub_seed(seed, 10), Side::Rows, truth.map(|t| t.rows), &mut report)?;
    let cols = fit_side(&a.transpose(), l, k, cfg, sub_seed(seed, 20), Side::Cols, truth.map(|t| t.cols), &mut report)?;
    Ok(ProvableFit { rows, cols, report })
}

/// LR classification with the true column labels and mean parameters.
pub fn oracle_classify<T: Entry>(a: &SparseBi<T>, z_true: &HardLabels, lambda_true: &MeanParams, seed: u64) -> Result<HardLabels> {
    lr_classify(a, lambda_true, z_true, seed)
}

/// Column oracle: LR on `Aᵀ` with the true row labels and `Γ`.
pub fn oracle_classify_cols<T: Entry>(a: &SparseBi<T>, y_true: &HardLabels, gamma_true: &MeanParams, seed: u64) -> Result<HardLabels> {
    lr_classify(&a.transpose(), gamma_true, y_true, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_sizes() {
        let plan = make_partition(16, 16, 4, 0).unwrap();
        assert!(plan.bottom_groups().iter().all(|g| g.len() == 2));
        assert!(plan.col_groups().iter().all(|g| g.len() == 4));
        let plan = make_partition(17, 16, 4, 0).unwrap();
        let sizes: Vec<usize> = plan.top_groups().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![3, 2, 2, 2]);
        let mut all = [plan.top(), plan.bottom()].concat();
        all.sort();
        assert_eq!(all, (0..17).collect::<Vec<_>>());
        assert!(make_partition(7, 16, 4, 0).is_err());
    }

    #[test]
    fn matching_identity_and_relabel() {
        let a = HardLabels::new(vec![0, 1, 2, 2, 1, 0], 3).unwrap();
        assert_eq!(match_labels(&a, &a).unwrap(), vec![0, 1, 2]);
        let tau = [1, 2, 0];
        assert_eq!(match_labels(&a, &a.permuted(&tau)).unwrap(), tau.to_vec());
    }

    #[test]
    fn consistent_subblocks_concatenate() {
        let g: Vec<HardLabels> = (0..4)
            .map(|q| HardLabels::new(vec![0, 1, (q % 2), 1], 2).unwrap())
            .collect();
        let sub = SubBlockLabels {
            lead: (0..4).map(|p| g[(p + 3) % 4].clone()).collect(),
            trail: g.clone(),
            shift: 3,
        };
        let fused = fuse_subblock_labels(&sub).unwrap();
        assert_eq!(fused.groups, g);
        assert!(fused.cyclic_consistent);
    }

    #[test]
    fn fill_permutation_repairs_duplicates() {
        let mut s = vec![1, 1, 0];
        fill_permutation(&mut s, 3);
        assert_eq!(s, vec![1, 2, 0]);
    }
}
