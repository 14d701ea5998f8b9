mod common;

use bisbm::metrics::mis;
use bisbm::model::{expected_adjacency, sample_sbm, true_mean_params};
use bisbm::pl::{
    block_compress, class_posterior, estimate_means, lr_classify, pl_meta, pl_simplified, ClassPrior, Hardening,
    InnerLoop, PlOptions, PriorOption,
};
use bisbm::{BiAdjacency, Connectivity, HardLabels, MeanParams, SampleMode};
use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn random_binary<R: Rng>(rng: &mut R, n: usize, m: usize, density: f64) -> BiAdjacency {
    let t: Vec<(usize, usize, u32)> = (0..n)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|_| rng.random::<f64>() < density)
        .map(|(i, j)| (i, j, 1))
        .collect();
    BiAdjacency::from_triplets(n, m, t).unwrap()
}

#[test]
fn expected_adjacency_with_truth_recovers_lambda() {
    let mut rng = rng(1);
    for _ in 0..20 {
        let (k, l) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let p = Connectivity::new(DMatrix::from_fn(k, l, |_, _| rng.random::<f64>())).unwrap();
        let y = covering_labels(&mut rng, 40, k);
        let z = covering_labels(&mut rng, 30, l);
        let e = expected_adjacency(&p, &y, &z).unwrap();
        let lambda_hat = estimate_means(&block_compress(&e, &z).unwrap(), &y).unwrap();
        let lambda = true_mean_params(&p, &z).unwrap();
        for (a, b) in lambda_hat.matrix().iter().zip(lambda.matrix().iter()) {
            assert!((a - b).abs() <= 1e-12 * b.max(1.0), "{a} vs {b}");
        }
    }
}

#[test]
fn posterior_matches_direct_product_formula() {
    let mut rng = rng(2);
    for _ in 0..50 {
        let counts = DMatrix::from_fn(6, 2, |_, _| rng.random_range(0..6) as f64);
        let lam = DMatrix::from_fn(2, 2, |_, _| rng.random_range(0.2..5.0));
        let pi = [rng.random_range(0.1..1.0), rng.random_range(0.1..1.0)];
        let b = bisbm::pl::BlockCompression::new(counts.clone()).unwrap();
        let post = class_posterior(&b, &MeanParams::new(lam.clone()).unwrap(), &ClassPrior::new(pi.to_vec()).unwrap()).unwrap();
        for i in 0..6 {
            // π_k Π_ℓ λ^x e^{−λ} / x!, normalized
            let w: Vec<f64> = (0..2)
                .map(|k| {
                    pi[k] / (pi[0] + pi[1])
                        * (0..2)
                            .map(|l| {
                                let (x, lm) = (counts[(i, l)], lam[(k, l)]);
                                lm.powf(x) * (-lm).exp() / (1..=x as u32).map(f64::from).product::<f64>()
                            })
                            .product::<f64>()
                })
                .collect();
            let total: f64 = w.iter().sum();
            for k in 0..2 {
                assert!((post.weights()[(i, k)] - w[k] / total).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn lr_matches_likelihood_table_on_8x8() {
    let mut rng = rng(3);
    for _ in 0..100 {
        let a = random_binary(&mut rng, 8, 8, 0.5);
        let z = covering_labels(&mut rng, 8, 2);
        let lam = DMatrix::from_fn(2, 2, |_, _| rng.random_range(0.1..5.0));
        let dense = a.to_dense();
        let got = lr_classify(&a, &MeanParams::new(lam.clone()).unwrap(), &z, 9).unwrap();
        for i in 0..8 {
            let ll: Vec<f64> = (0..2)
                .map(|r| {
                    (0..8)
                        .map(|j| {
                            let x = dense[(i, j)];
                            let per_col = lam[(r, z.get(j))] / z.counts()[z.get(j)] as f64;
                            // product of per-entry Poisson terms with block means spread evenly
                            x * per_col.ln() - per_col
                        })
                        .sum()
                })
                .collect();
            let want = if ll[0] >= ll[1] { 0 } else { 1 };
            assert_eq!(got.get(i), want, "node {i}: {ll:?}");
        }
    }
}

#[test]
fn posterior_argmax_equals_lr_with_flat_prior() {
    let mut rng = rng(4);
    for _ in 0..50 {
        let (k, l) = (rng.random_range(2..=4), rng.random_range(1..=4));
        let a = random_binary(&mut rng, 30, 25, 0.3);
        let z = covering_labels(&mut rng, 25, l);
        let lambda = MeanParams::new(DMatrix::from_fn(k, l, |_, _| rng.random_range(0.1..6.0))).unwrap();
        let b = block_compress(&a, &z).unwrap();
        let post = class_posterior(&b, &lambda, &ClassPrior::flat(k)).unwrap();
        assert_eq!(post.harden(), lr_classify(&a, &lambda, &z, 0).unwrap());
    }
}

#[test]
fn lr_is_equivariant_under_relabeling() {
    let mut rng = rng(5);
    for _ in 0..50 {
        let (k, l) = (rng.random_range(2..=4), rng.random_range(1..=3));
        let a = random_binary(&mut rng, 20, 20, 0.4);
        let z = covering_labels(&mut rng, 20, l);
        let lam = DMatrix::from_fn(k, l, |_, _| rng.random_range(0.1..6.0));
        let tau = random_perm(&mut rng, k);
        // row r of the permuted matrix is row τ(r) of the original
        let permuted = DMatrix::from_fn(k, l, |r, c| lam[(tau[r], c)]);
        let y = lr_classify(&a, &MeanParams::new(lam).unwrap(), &z, 1).unwrap();
        let y_perm = lr_classify(&a, &MeanParams::new(permuted).unwrap(), &z, 1).unwrap();
        for i in 0..20 {
            assert_eq!(tau[y_perm.get(i)], y.get(i));
        }
    }
}

#[test]
fn simplified_equals_lr_everywhere() {
    let mut rng = rng(6);
    for s in 0..50 {
        let (k, l) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let a = random_binary(&mut rng, 15, 12, 0.4);
        let z = HardLabels::new((0..12).map(|_| rng.random_range(0..l)).collect(), l).unwrap();
        let lambda = MeanParams::new(DMatrix::from_fn(k, l, |_, _| rng.random_range(0..3) as f64)).unwrap();
        assert_eq!(pl_simplified(&a, &z, &lambda, s).unwrap(), lr_classify(&a, &lambda, &z, s).unwrap());
    }
}

#[test]
fn flat_rows_give_uniform_assignments() {
    let n = 3000;
    let a = random_binary(&mut rng(7), n, 10, 0.2);
    let z = HardLabels::balanced(10, 2).unwrap();
    let lambda = MeanParams::new(DMatrix::from_element(3, 2, 1.5)).unwrap();
    let counts = pl_simplified(&a, &z, &lambda, 11).unwrap().counts();
    // each class Binomial(3000, 1/3): sd ≈ 25.8
    for c in counts {
        assert!((c as f64 - 1000.0).abs() < 4.0 * 25.8, "{c}");
    }
    // and a single node over seeds
    let mut per_node = [0usize; 3];
    for s in 0..600 {
        per_node[pl_simplified(&a, &z, &lambda, s).unwrap().get(0)] += 1;
    }
    for c in per_node {
        assert!((c as f64 - 200.0).abs() < 4.0 * 11.55, "{per_node:?}");
    }
}

fn separated_expected() -> (bisbm::WeightedBiAdjacency, HardLabels, HardLabels) {
    let p = Connectivity::from_rows(&[vec![0.8, 0.1], vec![0.1, 0.8]]).unwrap();
    let y = HardLabels::new((0..40).map(|i| (i * 7 % 5) % 2).collect(), 2).unwrap();
    let z = HardLabels::new((0..30).map(|j| (j / 3) % 2).collect(), 2).unwrap();
    (expected_adjacency(&p, &y, &z).unwrap(), y, z)
}

#[test]
fn truth_is_a_fixed_point_on_expected_adjacency() {
    let (e, y, z) = separated_expected();
    for opts in [PlOptions::soft(), PlOptions::hard()] {
        let fit = pl_meta(&e, &y, &z, &opts).unwrap();
        assert!(fit.converged);
        assert_eq!(fit.iterations(), 1);
        assert_eq!(fit.row_labels(), y);
        assert_eq!(fit.col_labels(), z);
    }
}

#[test]
fn all_variants_run_and_respect_the_iteration_cap() {
    let (k, n) = (2, 200);
    let p = Connectivity::planted_partition(k, 20.0, 5.0, n).unwrap();
    let y = HardLabels::balanced(n, k).unwrap();
    let a = sample_sbm(&p, &y, &y, 3, SampleMode::Bernoulli).unwrap();
    let y0 = flip(&mut rng(8), &y, 40);
    for prior in [PriorOption::Flat, PriorOption::Empirical] {
        for inner in [InnerLoop::Once, InnerLoop::ToConvergence] {
            for hardening in [Hardening::KeepSoft, Hardening::HardenEachStep, Hardening::HardenAtEnd] {
                let opts = PlOptions {
                    prior,
                    inner,
                    hardening,
                    max_outer: 10,
                    ..PlOptions::soft()
                };
                let fit = pl_meta(&a, &y0, &y0, &opts).unwrap();
                assert!(fit.iterations() <= 10);
                assert!(fit.converged || fit.iterations() == 10);
                assert!(mis(&fit.row_labels(), &y).unwrap() < mis(&y0, &y).unwrap(), "{opts:?}");
            }
        }
    }
}

#[test]
fn soft_pl_improves_noisy_truth() {
    let n = 400;
    let p = Connectivity::planted_partition(2, 30.0, 5.0, n).unwrap();
    let y = HardLabels::balanced(n, 2).unwrap();
    let mut improved = 0;
    for seed in 0..50u64 {
        let a = sample_sbm(&p, &y, &y, seed, SampleMode::Bernoulli).unwrap();
        let mut r = rng(1000 + seed);
        let (y0, z0) = (flip(&mut r, &y, n / 10), flip(&mut r, &y, n / 10));
        let fit = pl_meta(&a, &y0, &z0, &PlOptions::soft()).unwrap();
        if mis(&fit.row_labels(), &y).unwrap() < mis(&y0, &y).unwrap() {
            improved += 1;
        }
    }
    assert!(improved >= 45, "improved in {improved}/50");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compression_preserves_degrees(seed in any::<u64>(), l in 1usize..5) {
        let mut r = rng(seed);
        let a = random_binary(&mut r, 12, 15, 0.3);
        let z = HardLabels::new((0..15).map(|_| r.random_range(0..l)).collect(), l).unwrap();
        prop_assert_eq!(block_compress(&a, &z).unwrap().row_sums(), a.row_sums());
    }

    #[test]
    fn posterior_ignores_prior_scale(seed in any::<u64>(), c in 0.01f64..100.0) {
        let mut r = rng(seed);
        let a = random_binary(&mut r, 10, 10, 0.4);
        let z = HardLabels::balanced(10, 2).unwrap();
        let b = block_compress(&a, &z).unwrap();
        let lambda = MeanParams::new(DMatrix::from_fn(3, 2, |_, _| r.random_range(0.1..4.0))).unwrap();
        let pi: Vec<f64> = (0..3).map(|_| r.random_range(0.1..1.0)).collect();
        let scaled: Vec<f64> = pi.iter().map(|v| v * c).collect();
        let p1 = class_posterior(&b, &lambda, &ClassPrior::new(pi).unwrap()).unwrap();
        let p2 = class_posterior(&b, &lambda, &ClassPrior::new(scaled).unwrap()).unwrap();
        prop_assert!(p1.max_abs_diff(&p2) < 1e-12);
    }
}
