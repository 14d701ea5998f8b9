//! Draw a biadjacency matrix from a bipartite block model and print the
//! quantities that describe how hard it is to cluster.

use bisbm::info::{chernoff_info, column_info, separation};
use bisbm::model::{diagnostics, sample_sbm, true_col_mean_params, true_mean_params};
use bisbm::{Connectivity, HardLabels, SampleMode};

fn main() -> bisbm::Result<()> {
    let p = Connectivity::from_rows(&[
        vec![0.020, 0.004, 0.010],
        vec![0.004, 0.020, 0.010],
    ])?;
    let y = HardLabels::from_sizes(&[300, 200])?;
    let z = HardLabels::random_dirichlet(900, 3, 5.0, 7)?;

    let a = sample_sbm(&p, &y, &z, 42, SampleMode::Bernoulli)?;
    println!("A: {} x {}, {} edges", a.nrows(), a.ncols(), a.nnz());

    let lambda = true_mean_params(&p, &z)?;
    let gamma = true_col_mean_params(&p, &y)?;
    println!("Lambda = {:?}", lambda.to_rows());
    println!("Gamma  = {:?}", gamma.to_rows());

    let info = chernoff_info(&lambda);
    let d = diagnostics(&lambda, &gamma, &y, &z, &info);
    println!("omega = {:.3}, beta = {:.3}, alpha = {:.3}", d.omega, d.beta, d.alpha);
    println!(
        "row information I(0,1) = {:.4} at s* = {:.4}",
        info.value(0, 1),
        info.s_star(0, 1)
    );
    println!("column information min = {:.4}", column_info(&gamma).i_min());
    println!("separation eps = {:.4}", separation(&lambda).eps);
    Ok(())
}
