//! Command-line front end: `generate`, `fit`, `eval` and `bench`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
//! failure.

pub mod bench;
pub mod fit;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{read_edges, read_json, read_labels, write_edges, write_json, write_labels, ModelParams};
use crate::metrics::{misclassification, nmi};
use crate::model::MeanParams;
use bench::{make_instance, run_bench, write_outputs, BenchConfig};
use fit::{run_algorithm, Algorithm, FitSettings, TruthData};

/// Version string embedded in every JSON sidecar.
pub const VERSION: &str = env!("BISBM_VERSION");

#[derive(Debug, Parser)]
#[command(name = "bisbm", version = VERSION, about = "Biclustering for bipartite stochastic block models")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Repeat for more log output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a network and write edges, labels and a truth sidecar.
    Generate(GenerateArgs),
    /// Cluster a network with one algorithm.
    Fit(FitArgs),
    /// Compare predicted labels with true labels.
    Eval(EvalArgs),
    /// Run the simulation grid and write per-run and summary CSVs.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Bench-style JSON config; defaults to the built-in 4×6 setting.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cluster size; defaults to the first entry of `n0_grid`.
    #[arg(long)]
    pub n0: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, value_enum)]
    pub algo: Algorithm,
    /// Directory holding `edges.tsv` (and `truth.json`, `y.txt`, `z.txt`).
    #[arg(long)]
    pub input: PathBuf,
    /// JSON with `spectral` and `max_outer` overrides.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Row classes; read from `truth.json` when omitted.
    #[arg(long)]
    pub k: Option<usize>,
    /// Column classes; read from `truth.json` when omitted.
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Predicted labels, one per line.
    #[arg(long)]
    pub pred: PathBuf,
    /// True labels, one per line.
    #[arg(long)]
    pub truth: PathBuf,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    /// Restrict to one algorithm.
    #[arg(long, value_enum)]
    pub algo: Option<Algorithm>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::InvalidParameter(_) => 2,
        Error::SvdNonConvergence { .. } | Error::Numerical(_) => 4,
        _ => 3,
    }
}

fn load_config<T: for<'de> Deserialize<'de> + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => read_json(p).map_err(|e| match e {
            Error::Json(j) => Error::Config(format!("{}: {j}", p.display())),
            Error::Io { path, source } => Error::Config(format!("{}: {source}", path.display())),
            other => other,
        }),
    }
}

/// Truth sidecar written by `generate`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TruthSidecar {
    pub version: String,
    pub seed: u64,
    pub n0: usize,
    pub n: usize,
    pub m: usize,
    #[serde(flatten)]
    pub params: ModelParams,
    #[serde(rename = "Lambda")]
    pub lambda: MeanParams,
    #[serde(rename = "Gamma")]
    pub gamma: MeanParams,
    pub config: BenchConfig,
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let cfg: BenchConfig = load_config(args.config.as_deref())?;
    cfg.validate()?;
    let n0 = args.n0.unwrap_or(cfg.n0_grid[0]);
    let inst = make_instance(&cfg, n0, args.seed)?;
    let out = &args.out;
    write_edges(out.join("edges.tsv"), &inst.a)?;
    write_labels(out.join("y.txt"), &inst.truth.y)?;
    write_labels(out.join("z.txt"), &inst.truth.z)?;
    let (n, m) = inst.a.shape();
    write_json(
        out.join("truth.json"),
        &TruthSidecar {
            version: VERSION.into(),
            seed: args.seed,
            n0,
            n,
            m,
            params: ModelParams::from_connectivity(&inst.p),
            lambda: inst.truth.lambda,
            gamma: inst.truth.gamma,
            config: cfg,
        },
    )
}

#[derive(Serialize)]
struct FitReport<'a> {
    version: &'static str,
    algorithm: Algorithm,
    seed: u64,
    n: usize,
    m: usize,
    k: usize,
    l: usize,
    settings: &'a FitSettings,
    #[serde(flatten)]
    output: &'a fit::FitOutput,
}

pub fn cmd_fit(args: &FitArgs) -> Result<()> {
    let settings: FitSettings = load_config(args.config.as_deref())?;
    let a = read_edges(args.input.join("edges.tsv"), None)?;
    let sidecar_path = args.input.join("truth.json");
    let sidecar: Option<TruthSidecar> = sidecar_path.exists().then(|| read_json(&sidecar_path)).transpose()?;
    let k = args.k.or(sidecar.as_ref().map(|s| s.params.k));
    let l = args.l.or(sidecar.as_ref().map(|s| s.params.l));
    let (Some(k), Some(l)) = (k, l) else {
        return Err(Error::Config("class counts unknown: pass --k and --l or provide truth.json".into()));
    };
    let truth = match &sidecar {
        Some(s) if args.input.join("y.txt").exists() && args.input.join("z.txt").exists() => Some(TruthData {
            y: read_labels(args.input.join("y.txt"), Some(s.params.k))?,
            z: read_labels(args.input.join("z.txt"), Some(s.params.l))?,
            lambda: s.lambda.clone(),
            gamma: s.gamma.clone(),
        }),
        _ => None,
    };
    let out = run_algorithm(args.algo, &a, k, l, &settings, args.seed, truth.as_ref(), None)?;
    write_labels(args.out.join("y_hat.txt"), &out.rows)?;
    write_labels(args.out.join("z_hat.txt"), &out.cols)?;
    write_json(
        args.out.join("report.json"),
        &FitReport {
            version: VERSION,
            algorithm: args.algo,
            seed: args.seed,
            n: a.nrows(),
            m: a.ncols(),
            k,
            l,
            settings: &settings,
            output: &out,
        },
    )
}

#[derive(Debug, Serialize)]
pub struct EvalReport {
    pub mis: f64,
    pub mis_k: Vec<f64>,
    pub dmis: f64,
    pub nmi: f64,
    pub permutation: Vec<usize>,
    pub nmi_normalization: &'static str,
}

pub fn evaluate(pred: &crate::HardLabels, truth: &crate::HardLabels) -> Result<EvalReport> {
    let m = misclassification(pred, truth)?;
    Ok(EvalReport {
        mis: m.mis,
        mis_k: m.mis_k,
        dmis: m.dmis,
        nmi: nmi(pred, truth)?,
        permutation: m.permutation,
        nmi_normalization: "sqrt",
    })
}

pub fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let pred = read_labels(&args.pred, None)?;
    let truth = read_labels(&args.truth, None)?;
    let report = evaluate(&pred, &truth)?;
    match &args.out {
        Some(path) => write_json(path, &report),
        None => {
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct BenchSidecar<'a> {
    version: &'static str,
    seed: u64,
    config: &'a BenchConfig,
    rate_overlay: &'static str,
}

pub fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let mut cfg: BenchConfig = load_config(args.config.as_deref())?;
    if let Some(algo) = args.algo {
        cfg.algorithms = vec![algo];
    }
    let records = run_bench(&cfg, args.seed)?;
    write_outputs(&args.out, &records)?;
    write_json(
        args.out.join("bench.json"),
        &BenchSidecar {
            version: VERSION,
            seed: args.seed,
            config: &cfg,
            rate_overlay: "order-of-magnitude overlay, not a bound",
        },
    )
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

/// Parses `args` and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();

    let result = match cli.threads {
        Some(0) => Err(Error::Config("--threads must be at least 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(&cli))),
        None => dispatch(&cli),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
