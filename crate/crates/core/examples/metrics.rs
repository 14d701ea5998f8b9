//! Misclassification under the best label permutation, and NMI.

use bisbm::metrics::{misclassification, nmi};
use bisbm::HardLabels;

fn main() -> bisbm::Result<()> {
    let truth = HardLabels::new(vec![0, 0, 0, 0, 1, 1, 1, 2, 2, 2], 3)?;
    // Same partition up to a relabeling, with two mistakes.
    let est = HardLabels::new(vec![2, 2, 2, 1, 0, 0, 0, 1, 1, 0], 3)?;

    let m = misclassification(&est, &truth)?;
    println!("Mis = {:.3}, direct Mis = {:.3}", m.mis, m.dmis);
    println!("per class: {:?}", m.mis_k);
    println!("best permutation (estimated -> true): {:?}", m.permutation);
    println!("NMI = {:.4}", nmi(&est, &truth)?);
    Ok(())
}
