//! Refine a corrupted labeling with the pseudo-likelihood algorithm, once
//! with soft labels and once hardening every step.

use bisbm::metrics::mis;
use bisbm::model::sample_sbm;
use bisbm::pl::{block_compress, class_posterior, estimate_means, pl_meta, ClassPrior, PlOptions};
use bisbm::{Connectivity, HardLabels, SampleMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corrupt(y: &HardLabels, frac: f64, seed: u64) -> bisbm::Result<HardLabels> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = y.num_classes();
    let labels = y
        .as_slice()
        .iter()
        .map(|&c| if rng.random::<f64>() < frac { rng.random_range(0..k) } else { c })
        .collect();
    HardLabels::new(labels, k)
}

fn main() -> bisbm::Result<()> {
    let (n, k) = (600, 3);
    let p = Connectivity::planted_partition(k, 30.0, 6.0, n)?;
    let y = HardLabels::balanced(n, k)?;
    let a = sample_sbm(&p, &y, &y, 1, SampleMode::Bernoulli)?;

    let y0 = corrupt(&y, 0.4, 2)?;
    let z0 = corrupt(&y, 0.4, 3)?;
    println!("start: row Mis {:.4}, col Mis {:.4}", mis(&y0, &y)?, mis(&z0, &y)?);

    // One step by hand: compress on the column labels, estimate, score.
    let b = block_compress(&a, &z0)?;
    let lambda_hat = estimate_means(&b, &y0)?;
    let post = class_posterior(&b, &lambda_hat, &ClassPrior::empirical(&y0))?;
    println!("after one posterior step: row Mis {:.4}", mis(&post.harden(), &y)?);

    for (name, opts) in [("soft", PlOptions::soft()), ("hard", PlOptions::hard())] {
        let fit = pl_meta(&a, &y0, &z0, &opts)?;
        println!(
            "{name}: {} iterations (converged: {}), row Mis {:.4}, col Mis {:.4}",
            fit.iterations(),
            fit.converged,
            mis(&fit.row_labels(), &y)?,
            mis(&fit.col_labels(), &y)?
        );
        for it in &fit.trace {
            println!("  iter {:>2}: log PL {:.2}, changes {}/{}", it.iteration, it.log_pl, it.row_changes, it.col_changes);
        }
    }
    Ok(())
}
