//! The partitioned pipeline: spectral labels on sub-blocks, fused by label
//! matching, then refined by likelihood-ratio classification. Per-stage
//! error is reported against the planted labels.

use bisbm::metrics::mis;
use bisbm::model::sample_sbm;
use bisbm::provable::{make_partition, provable_fit_with_truth, Truth, Q};
use bisbm::spectral::SpectralConfig;
use bisbm::{Connectivity, HardLabels, SampleMode};

fn main() -> bisbm::Result<()> {
    let n = 1024;
    let p = Connectivity::planted_partition(2, 60.0, 8.0, n)?;
    let y = HardLabels::balanced(n, 2)?;
    let a = sample_sbm(&p, &y, &y, 3, SampleMode::Bernoulli)?;

    let plan = make_partition(n, n, Q, 9)?;
    println!("row groups of {} nodes, column groups of {}", plan.min_group_size(), plan.col_groups()[0].len());

    let truth = Truth { rows: &y, cols: &y };
    let fit = provable_fit_with_truth(&a, 2, 2, &SpectralConfig::default(), 9, Some(truth))?;
    for s in &fit.report.stages {
        println!(
            "{:?} round {} {:?}: {} nodes, Mis {:.4}",
            s.side,
            s.round,
            s.stage,
            s.nodes,
            s.mis.unwrap_or(f64::NAN)
        );
    }
    println!("cyclic inconsistencies: {}", fit.report.cyclic_inconsistencies);
    println!("final: rows Mis {:.4}, cols Mis {:.4}", mis(&fit.rows, &y)?, mis(&fit.cols, &y)?);
    Ok(())
}
