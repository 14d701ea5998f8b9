//! A reduced version of the benchmark grid: every algorithm on a few sizes,
//! summarized per size. Pass an output directory to also write the CSVs.

use bisbm::cli::bench::{run_bench, summarize, write_outputs, BenchConfig};

fn main() -> bisbm::Result<()> {
    let cfg = BenchConfig {
        n0_grid: vec![100, 200],
        seeds: 3,
        record_timing: false,
        ..BenchConfig::standard()
    };
    let records = run_bench(&cfg, 2024)?;
    println!("{:>4} {:<9} {:>8} {:>8} {:>10}", "n0", "algorithm", "NMI", "Mis", "failures");
    for row in summarize(&records) {
        println!(
            "{:>4} {:<9} {:>8.3} {:>8.4} {:>10}",
            row.n0,
            row.algorithm.name(),
            row.nmi_median,
            row.mis_median,
            row.failures
        );
    }
    if let Some(dir) = std::env::args().nth(1) {
        write_outputs(dir.as_ref(), &records)?;
        println!("wrote {dir}");
    }
    Ok(())
}
