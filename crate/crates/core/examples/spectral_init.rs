//! Spectral clustering of rows and columns, with and without degree
//! regularization. A handful of hub rows connected to every column is added
//! to give the regularizer something to do.

use bisbm::metrics::{mis, nmi};
use bisbm::model::sample_sbm;
use bisbm::spectral::{spectral_cluster_cols, spectral_cluster_rows, SpectralConfig};
use bisbm::{BiAdjacency, Connectivity, HardLabels, SampleMode};

fn main() -> bisbm::Result<()> {
    let p = Connectivity::from_rows(&[
        vec![0.030, 0.006, 0.006, 0.015],
        vec![0.006, 0.030, 0.006, 0.015],
        vec![0.006, 0.006, 0.030, 0.002],
    ])?;
    let y = HardLabels::balanced(900, 3)?;
    let z = HardLabels::balanced(1200, 4)?;
    let a = sample_sbm(&p, &y, &z, 5, SampleMode::Bernoulli)?;
    let hubs = [0, 300, 600];
    let edges = a
        .triplets()
        .filter(|t| !hubs.contains(&t.0))
        .chain(hubs.iter().flat_map(|&i| (0..1200).map(move |j| (i, j, 1))));
    let a = BiAdjacency::from_triplets(900, 1200, edges)?;

    for regularize in [true, false] {
        let cfg = SpectralConfig {
            regularize,
            ..SpectralConfig::with_seed(11)
        };
        let rows = spectral_cluster_rows(&a, 3, 4, &cfg)?;
        let cols = spectral_cluster_cols(&a, 3, 4, &cfg)?;
        println!(
            "regularize={regularize}: rows Mis {:.4} NMI {:.3}, cols Mis {:.4} NMI {:.3}",
            mis(&rows, &y)?,
            nmi(&rows, &y)?,
            mis(&cols, &z)?,
            nmi(&cols, &z)?
        );
    }
    Ok(())
}
