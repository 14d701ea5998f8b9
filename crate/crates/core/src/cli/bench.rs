//! Simulation benchmark: every `(n0, replicate)` cell samples one network
//! and runs each requested algorithm on it.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{run_algorithm, spectral_init, Algorithm, FitSettings, TruthData};
use crate::error::{Error, Result};
use crate::info::{chernoff_info, rate_prediction};
use crate::labels::HardLabels;
use crate::metrics::{mis, nmi};
use crate::model::{sample_sbm, true_col_mean_params, true_mean_params, Connectivity, MeanParams, SampleMode};
use crate::rng::{self, Purpose};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    /// `K × L` pattern; `P = c · [log(nm)]^α / √(nm) · B`.
    pub b_matrix: Vec<Vec<f64>>,
    pub c: f64,
    pub alpha_exp: f64,
    /// Per-cluster sizes; `n = K·n0`, `m = L·n0`.
    pub n0_grid: Vec<usize>,
    /// Replicates per grid point.
    pub seeds: usize,
    pub algorithms: Vec<Algorithm>,
    pub pi_y: Option<Vec<f64>>,
    pub pi_z: Option<Vec<f64>>,
    pub sample_mode: SampleMode,
    pub fit: FitSettings,
    /// When false the `seconds` column is written as `NA`, which makes the
    /// output independent of the machine.
    pub record_timing: bool,
}

fn cyclic_pattern(k: usize, l: usize, step: usize) -> Vec<Vec<f64>> {
    (0..k)
        .map(|r| (0..l).map(|c| ((c + r * step) % l + 1) as f64).collect())
        .collect()
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self::standard()
    }
}

impl BenchConfig {
    /// `K = 4, L = 6`, rows of `B` are cyclic shifts of `1..6`, `α = 0.75`,
    /// `c = 1`, `n0 ∈ {100, 150, …, 400}`, 30 replicates.
    pub fn standard() -> Self {
        Self {
            b_matrix: cyclic_pattern(4, 6, 1),
            c: 1.0,
            alpha_exp: 0.75,
            n0_grid: (100..=400).step_by(50).collect(),
            seeds: 30,
            algorithms: vec![Algorithm::Spectral, Algorithm::Soft, Algorithm::Hard, Algorithm::Oracle],
            pi_y: None,
            pi_z: None,
            sample_mode: SampleMode::Bernoulli,
            fit: FitSettings::default(),
            record_timing: true,
        }
    }

    /// `K = 4, L = 12`, rows shifted by three.
    pub fn wide() -> Self {
        Self {
            b_matrix: cyclic_pattern(4, 12, 3),
            ..Self::standard()
        }
    }

    /// The default pattern with class proportions `(1,4,6,9)/20` and
    /// `(1,3,4,6,7,9)/30`.
    pub fn unbalanced() -> Self {
        Self {
            pi_y: Some([1.0, 4.0, 6.0, 9.0].iter().map(|v| v / 20.0).collect()),
            pi_z: Some([1.0, 3.0, 4.0, 6.0, 7.0, 9.0].iter().map(|v| v / 30.0).collect()),
            ..Self::standard()
        }
    }

    pub fn k(&self) -> usize {
        self.b_matrix.len()
    }

    pub fn l(&self) -> usize {
        self.b_matrix.first().map_or(0, Vec::len)
    }

    pub fn validate(&self) -> Result<()> {
        let (k, l) = (self.k(), self.l());
        if k == 0 || l == 0 || self.b_matrix.iter().any(|r| r.len() != l) {
            return Err(Error::Config("b_matrix must be a nonempty rectangular matrix".into()));
        }
        if self.b_matrix.iter().flatten().any(|&v| !(v >= 0.0 && v.is_finite())) {
            return Err(Error::Config("b_matrix entries must be finite and nonnegative".into()));
        }
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return Err(Error::Config("c must be finite and nonnegative".into()));
        }
        if !(self.alpha_exp >= 0.0 && self.alpha_exp.is_finite()) {
            return Err(Error::Config("alpha_exp must be finite and nonnegative".into()));
        }
        if self.n0_grid.is_empty() || self.n0_grid.contains(&0) {
            return Err(Error::Config("n0_grid must be nonempty with positive entries".into()));
        }
        if self.seeds == 0 {
            return Err(Error::Config("seeds must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms selected".into()));
        }
        for (name, pi, len) in [("pi_y", &self.pi_y, k), ("pi_z", &self.pi_z, l)] {
            if let Some(pi) = pi {
                if pi.len() != len || pi.iter().any(|&p| !(p > 0.0)) {
                    return Err(Error::Config(format!("{name} needs {len} positive entries")));
                }
            }
        }
        Ok(())
    }

    /// `(n, m)` for one grid point.
    pub fn dims(&self, n0: usize) -> (usize, usize) {
        (self.k() * n0, self.l() * n0)
    }

    pub fn connectivity(&self, n0: usize) -> Result<Connectivity> {
        let (n, m) = self.dims(n0);
        let nm = (n * m) as f64;
        let scale = self.c * nm.ln().powf(self.alpha_exp) / nm.sqrt();
        let rows: Vec<Vec<f64>> = self.b_matrix.iter().map(|r| r.iter().map(|b| scale * b).collect()).collect();
        if let Some(v) = rows.iter().flatten().find(|&&v| v > 1.0) {
            return Err(Error::Config(format!(
                "connectivity entry {v:.4} exceeds 1 at n0 = {n0}; reduce c"
            )));
        }
        Connectivity::from_rows(&rows)
    }

    pub fn labels(&self, n0: usize) -> Result<(HardLabels, HardLabels)> {
        let (n, m) = self.dims(n0);
        let y = match &self.pi_y {
            Some(pi) => HardLabels::from_proportions(n, pi)?,
            None => HardLabels::balanced(n, self.k())?,
        };
        let z = match &self.pi_z {
            Some(pi) => HardLabels::from_proportions(m, pi)?,
            None => HardLabels::balanced(m, self.l())?,
        };
        Ok((y, z))
    }
}

/// A sampled network with its truth.
pub struct Instance {
    pub a: crate::graph::BiAdjacency,
    pub p: Connectivity,
    pub truth: TruthData,
}

/// Samples the network for grid point `n0` with the given sampling seed.
pub fn make_instance(cfg: &BenchConfig, n0: usize, seed: u64) -> Result<Instance> {
    let p = cfg.connectivity(n0)?;
    let (y, z) = cfg.labels(n0)?;
    let a = sample_sbm(&p, &y, &z, seed, cfg.sample_mode)?;
    let lambda = true_mean_params(&p, &z)?;
    let gamma = true_col_mean_params(&p, &y)?;
    Ok(Instance {
        a,
        p,
        truth: TruthData { y, z, lambda, gamma },
    })
}

/// Sampling seed of replicate `r` under the bench seed.
pub fn replicate_seed(bench_seed: u64, r: usize) -> u64 {
    rng::derive_seed(bench_seed, Purpose::Bench, r as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n0: usize,
    pub replicate: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub nmi_row: f64,
    pub nmi_col: f64,
    pub nmi_overall: f64,
    pub mis_row: f64,
    pub mis_col: f64,
    pub mis_overall: f64,
    pub seconds: Option<f64>,
    pub rate_overlay: Option<f64>,
    /// `None` on success.
    pub error: Option<String>,
}

impl BenchRecord {
    pub fn log_mis(&self) -> f64 {
        self.mis_overall.ln()
    }

    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

/// `Σ_k π_k Σ_{r≠k} exp(−I_kr − ½ log Λ_min)`.
fn side_overlay(means: &MeanParams, labels: &HardLabels) -> f64 {
    let info = chernoff_info(means);
    let pi = labels.proportions();
    (0..means.k()).map(|k| pi[k] * rate_prediction(&info, means.min_entry(), k)).sum()
}

fn weighted(n: usize, m: usize, row: f64, col: f64) -> f64 {
    (n as f64 * row + m as f64 * col) / (n + m) as f64
}

fn run_cell(cfg: &BenchConfig, n0: usize, r: usize, seed: u64) -> Vec<BenchRecord> {
    let (n, m) = cfg.dims(n0);
    let blank = |algorithm, error: String| BenchRecord {
        n0,
        replicate: r,
        seed,
        algorithm,
        nmi_row: f64::NAN,
        nmi_col: f64::NAN,
        nmi_overall: f64::NAN,
        mis_row: f64::NAN,
        mis_col: f64::NAN,
        mis_overall: f64::NAN,
        seconds: None,
        rate_overlay: None,
        error: Some(error),
    };
    let inst = match make_instance(cfg, n0, seed) {
        Ok(inst) => inst,
        Err(e) => return cfg.algorithms.iter().map(|&a| blank(a, e.to_string())).collect(),
    };
    let (k, l) = (cfg.k(), cfg.l());
    let fit_seed = rng::derive_seed(seed, Purpose::Bench, 1);
    let needs_init = cfg.algorithms.iter().any(|a| matches!(a, Algorithm::Soft | Algorithm::Hard));
    let t_init = Instant::now();
    let init = needs_init.then(|| spectral_init(&inst.a, k, l, &cfg.fit, fit_seed));
    let init_secs = t_init.elapsed().as_secs_f64();

    cfg.algorithms
        .iter()
        .map(|&algo| {
            let t0 = Instant::now();
            let init_ref = match (&init, algo) {
                (Some(Ok(pair)), Algorithm::Soft | Algorithm::Hard) => Some(pair),
                (Some(Err(e)), Algorithm::Soft | Algorithm::Hard) => return blank(algo, e.to_string()),
                _ => None,
            };
            let out = match run_algorithm(algo, &inst.a, k, l, &cfg.fit, fit_seed, Some(&inst.truth), init_ref) {
                Ok(out) => out,
                Err(e) => return blank(algo, e.to_string()),
            };
            let mut secs = t0.elapsed().as_secs_f64();
            if init_ref.is_some() {
                secs += init_secs;
            }
            let scores = (|| -> Result<_> {
                Ok((
                    nmi(&out.rows, &inst.truth.y)?,
                    nmi(&out.cols, &inst.truth.z)?,
                    mis(&out.rows, &inst.truth.y)?,
                    mis(&out.cols, &inst.truth.z)?,
                ))
            })();
            let (nr, nc, mr, mc) = match scores {
                Ok(s) => s,
                Err(e) => return blank(algo, e.to_string()),
            };
            let overlay = (algo == Algorithm::Oracle).then(|| {
                weighted(
                    n,
                    m,
                    side_overlay(&inst.truth.lambda, &inst.truth.y),
                    side_overlay(&inst.truth.gamma, &inst.truth.z),
                )
            });
            BenchRecord {
                n0,
                replicate: r,
                seed,
                algorithm: algo,
                nmi_row: nr,
                nmi_col: nc,
                nmi_overall: weighted(n, m, nr, nc),
                mis_row: mr,
                mis_col: mc,
                mis_overall: weighted(n, m, mr, mc),
                seconds: cfg.record_timing.then_some(secs),
                rate_overlay: overlay,
                error: None,
            }
        })
        .collect()
}

/// Runs every cell in parallel; records come back in `(n0, replicate,
/// algorithm)` order regardless of scheduling.
pub fn run_bench(cfg: &BenchConfig, seed: u64) -> Result<Vec<BenchRecord>> {
    cfg.validate()?;
    for &n0 in &cfg.n0_grid {
        cfg.connectivity(n0)?;
    }
    let cells: Vec<(usize, usize)> = cfg
        .n0_grid
        .iter()
        .flat_map(|&n0| (0..cfg.seeds).map(move |r| (n0, r)))
        .collect();
    let records: Vec<Vec<BenchRecord>> = cells
        .par_iter()
        .map(|&(n0, r)| run_cell(cfg, n0, r, replicate_seed(seed, r)))
        .collect();
    Ok(records.into_iter().flatten().collect())
}

/// CSV cell for a float: shortest round-trip form, with `NA`, `inf` and
/// `-inf` sentinels instead of NaN or infinities.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NA".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".into(), fmt_num)
}

pub const RECORD_HEADER: [&str; 14] = [
    "n0",
    "replicate",
    "seed",
    "algorithm",
    "nmi_row",
    "nmi_col",
    "nmi_overall",
    "mis_row",
    "mis_col",
    "mis_overall",
    "log_mis",
    "seconds",
    "rate_overlay",
    "status",
];

pub fn write_records<W: Write>(out: W, records: &[BenchRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_HEADER)?;
    for r in records {
        let status = r.error.as_deref().map_or_else(|| "ok".to_string(), |e| format!("error: {e}"));
        w.write_record([
            r.n0.to_string(),
            r.replicate.to_string(),
            r.seed.to_string(),
            r.algorithm.name().to_string(),
            fmt_num(r.nmi_row),
            fmt_num(r.nmi_col),
            fmt_num(r.nmi_overall),
            fmt_num(r.mis_row),
            fmt_num(r.mis_col),
            fmt_num(r.mis_overall),
            fmt_num(r.log_mis()),
            fmt_opt(r.seconds),
            fmt_opt(r.rate_overlay),
            status,
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    if lo == hi || sorted[lo] == sorted[hi] {
        return sorted[lo];
    }
    if sorted[lo] == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub n0: usize,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub failures: usize,
    pub nmi_q25: f64,
    pub nmi_median: f64,
    pub nmi_q75: f64,
    pub nmi_mean: f64,
    pub mis_q25: f64,
    pub mis_median: f64,
    pub mis_q75: f64,
    pub mis_mean: f64,
    pub log_mis_median: f64,
    /// `log` of the mean misclassification; finite unless every run is exact.
    pub log_mean_mis: f64,
    pub rate_overlay: Option<f64>,
}

pub fn summarize(records: &[BenchRecord]) -> Vec<SummaryRow> {
    let mut keys: Vec<(usize, Algorithm)> = records.iter().map(|r| (r.n0, r.algorithm)).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(n0, algorithm)| {
            let group: Vec<&BenchRecord> = records.iter().filter(|r| r.n0 == n0 && r.algorithm == algorithm).collect();
            let ok: Vec<&&BenchRecord> = group.iter().filter(|r| r.ok()).collect();
            let sorted = |f: fn(&BenchRecord) -> f64| {
                let mut v: Vec<f64> = ok.iter().map(|r| f(r)).collect();
                v.sort_by(f64::total_cmp);
                v
            };
            let mean = |v: &[f64]| if v.is_empty() { f64::NAN } else { v.iter().sum::<f64>() / v.len() as f64 };
            let nmi_v = sorted(|r| r.nmi_overall);
            let mis_v = sorted(|r| r.mis_overall);
            let log_v = sorted(|r| r.log_mis());
            let overlays: Vec<f64> = ok.iter().filter_map(|r| r.rate_overlay).collect();
            SummaryRow {
                n0,
                algorithm,
                runs: group.len(),
                failures: group.len() - ok.len(),
                nmi_q25: quantile_sorted(&nmi_v, 0.25),
                nmi_median: quantile_sorted(&nmi_v, 0.5),
                nmi_q75: quantile_sorted(&nmi_v, 0.75),
                nmi_mean: mean(&nmi_v),
                mis_q25: quantile_sorted(&mis_v, 0.25),
                mis_median: quantile_sorted(&mis_v, 0.5),
                mis_q75: quantile_sorted(&mis_v, 0.75),
                mis_mean: mean(&mis_v),
                log_mis_median: quantile_sorted(&log_v, 0.5),
                log_mean_mis: mean(&mis_v).ln(),
                rate_overlay: (!overlays.is_empty()).then(|| mean(&overlays)),
            }
        })
        .collect()
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n0",
        "algorithm",
        "runs",
        "failures",
        "nmi_q25",
        "nmi_median",
        "nmi_q75",
        "nmi_mean",
        "mis_q25",
        "mis_median",
        "mis_q75",
        "mis_mean",
        "log_mis_median",
        "log_mean_mis",
        "rate_overlay",
    ])?;
    for s in rows {
        w.write_record([
            s.n0.to_string(),
            s.algorithm.name().to_string(),
            s.runs.to_string(),
            s.failures.to_string(),
            fmt_num(s.nmi_q25),
            fmt_num(s.nmi_median),
            fmt_num(s.nmi_q75),
            fmt_num(s.nmi_mean),
            fmt_num(s.mis_q25),
            fmt_num(s.mis_median),
            fmt_num(s.mis_q75),
            fmt_num(s.mis_mean),
            fmt_num(s.log_mis_median),
            fmt_num(s.log_mean_mis),
            fmt_opt(s.rate_overlay),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))
}

/// Writes `bench.csv` and `summary.csv` under `dir`.
pub fn write_outputs(dir: &Path, records: &[BenchRecord]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join("bench.csv");
    write_records(std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?, records)?;
    let path = dir.join("summary.csv");
    write_summary(std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?, &summarize(records))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_pattern_rows() {
        let b = BenchConfig::standard().b_matrix;
        assert_eq!(b[0], vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(b[1], vec![2.0, 3.0, 4.0, 5.0, 6.0, 1.0]);
        assert_eq!(b[3], vec![4.0, 5.0, 6.0, 1.0, 2.0, 3.0]);
        let w = BenchConfig::wide().b_matrix;
        assert_eq!(w[1][0], 4.0);
        assert_eq!(w[3][2], 12.0);
        assert_eq!(w[3][3], 1.0);
    }

    #[test]
    fn sentinels() {
        assert_eq!(fmt_num(f64::NAN), "NA");
        assert_eq!(fmt_num(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_num(0.25), "0.25");
    }

    #[test]
    fn quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&v, 0.5), 2.5);
        assert_eq!(quantile_sorted(&[f64::NEG_INFINITY, 0.0], 0.5), f64::NEG_INFINITY);
    }

    #[test]
    fn connectivity_bounds() {
        let cfg = BenchConfig::standard();
        let p = cfg.connectivity(100).unwrap();
        assert!(p.matrix().iter().all(|&v| v > 0.0 && v < 1.0));
        let hot = BenchConfig { c: 1e4, ..cfg };
        assert!(matches!(hot.connectivity(100), Err(Error::Config(_))));
    }
}
