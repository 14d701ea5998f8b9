//! Algorithm dispatch shared by `fit` and `bench`.

use std::time::Instant;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::BiAdjacency;
use crate::labels::HardLabels;
use crate::model::MeanParams;
use crate::pl::{pl_meta, PlIteration, PlOptions};
use crate::provable::{oracle_classify, oracle_classify_cols, provable_fit_with_truth, ProvableReport, Truth};
use crate::rng::{self, Purpose};
use crate::spectral::{spectral_cluster_cols, spectral_cluster_rows, SpectralConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Spectral,
    Soft,
    Hard,
    Oracle,
    Provable,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Spectral => "spectral",
            Algorithm::Soft => "soft",
            Algorithm::Hard => "hard",
            Algorithm::Oracle => "oracle",
            Algorithm::Provable => "provable",
        }
    }
}

/// Known truth for a simulated instance.
#[derive(Clone, Debug)]
pub struct TruthData {
    pub y: HardLabels,
    pub z: HardLabels,
    pub lambda: MeanParams,
    pub gamma: MeanParams,
}

#[derive(Clone, Debug, Serialize)]
pub struct FitOutput {
    #[serde(skip)]
    pub rows: HardLabels,
    #[serde(skip)]
    pub cols: HardLabels,
    pub seconds: Vec<(String, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<PlIteration>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provable: Option<ProvableReport>,
}

/// Settings for one fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitSettings {
    pub spectral: SpectralConfig,
    pub max_outer: usize,
}

impl Default for FitSettings {
    fn default() -> Self {
        Self {
            spectral: SpectralConfig::default(),
            max_outer: 50,
        }
    }
}

impl FitSettings {
    pub fn pl_options(&self, algo: Algorithm) -> PlOptions {
        let base = if algo == Algorithm::Hard { PlOptions::hard() } else { PlOptions::soft() };
        PlOptions {
            max_outer: self.max_outer,
            ..base
        }
    }

    fn spectral_seeded(&self, seed: u64) -> SpectralConfig {
        SpectralConfig {
            seed: rng::derive_seed(seed ^ self.spectral.seed, Purpose::KMeans, 1),
            ..self.spectral.clone()
        }
    }
}

/// Spectral row and column labels.
pub fn spectral_init(a: &BiAdjacency, k: usize, l: usize, settings: &FitSettings, seed: u64) -> Result<(HardLabels, HardLabels)> {
    let cfg = settings.spectral_seeded(seed);
    Ok((spectral_cluster_rows(a, k, l, &cfg)?, spectral_cluster_cols(a, k, l, &cfg)?))
}

/// Runs `algo` on `a`. Soft and hard start from `init` when given,
/// otherwise from a fresh spectral initialization.
pub fn run_algorithm(
    algo: Algorithm,
    a: &BiAdjacency,
    k: usize,
    l: usize,
    settings: &FitSettings,
    seed: u64,
    truth: Option<&TruthData>,
    init: Option<&(HardLabels, HardLabels)>,
) -> Result<FitOutput> {
    let t0 = Instant::now();
    let mut out = FitOutput {
        rows: HardLabels::new(vec![], 1)?,
        cols: HardLabels::new(vec![], 1)?,
        seconds: Vec::new(),
        converged: None,
        trace: Vec::new(),
        provable: None,
    };
    match algo {
        Algorithm::Spectral => {
            let (y, z) = spectral_init(a, k, l, settings, seed)?;
            out.rows = y;
            out.cols = z;
            out.seconds.push(("spectral".into(), t0.elapsed().as_secs_f64()));
        }
        Algorithm::Soft | Algorithm::Hard => {
            let owned;
            let (y0, z0) = match init {
                Some(pair) => (&pair.0, &pair.1),
                None => {
                    owned = spectral_init(a, k, l, settings, seed)?;
                    out.seconds.push(("spectral".into(), t0.elapsed().as_secs_f64()));
                    (&owned.0, &owned.1)
                }
            };
            let t1 = Instant::now();
            let fit = pl_meta(a, y0, z0, &settings.pl_options(algo))?;
            out.rows = fit.row_labels();
            out.cols = fit.col_labels();
            out.converged = Some(fit.converged);
            out.trace = fit.trace;
            out.seconds.push(("pseudo_likelihood".into(), t1.elapsed().as_secs_f64()));
        }
        Algorithm::Oracle => {
            let t = truth.ok_or_else(|| Error::Config("the oracle needs the truth sidecar and label files".into()))?;
            let s = rng::derive_seed(seed, Purpose::TieBreak, 0);
            out.rows = oracle_classify(a, &t.z, &t.lambda, s)?;
            out.cols = oracle_classify_cols(a, &t.y, &t.gamma, s.wrapping_add(1))?;
            out.seconds.push(("oracle".into(), t0.elapsed().as_secs_f64()));
        }
        Algorithm::Provable => {
            let tr = truth.map(|t| Truth { rows: &t.y, cols: &t.z });
            let fit = provable_fit_with_truth(a, k, l, &settings.spectral, seed, tr)?;
            out.rows = fit.rows;
            out.cols = fit.cols;
            out.seconds = fit.report.seconds.clone();
            out.provable = Some(fit.report);
        }
    }
    Ok(out)
}
