mod common;

use bisbm::info::{chernoff_info, column_info, separation};
use bisbm::metrics::{misclassification, nmi, optimal_permutation};
use bisbm::{HardLabels, MeanParams};
use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn permutation_agrees_with_exhaustive_search_k4() {
    let mut rng = rng(1);
    for _ in 0..100 {
        let y = covering_labels(&mut rng, 40, 4);
        let noise = rng.random_range(0..20);
        let y_hat = relabel(&flip(&mut rng, &y, noise), &random_perm(&mut rng, 4));
        let (want, agree, _) = brute_force_matching(&y_hat, &y);
        let m = misclassification(&y_hat, &y).unwrap();
        assert_eq!(optimal_permutation(&y_hat, &y).unwrap(), want);
        assert!((m.mis - (1.0 - agree as f64 / 40.0)).abs() < 1e-15);
    }
}

#[test]
fn nmi_of_independent_labelings_is_small() {
    let mut rng = rng(2);
    let total: f64 = (0..50)
        .map(|_| {
            let a = HardLabels::new((0..200).map(|_| rng.random_range(0..4)).collect(), 4).unwrap();
            let b = HardLabels::new((0..200).map(|_| rng.random_range(0..4)).collect(), 4).unwrap();
            nmi(&a, &b).unwrap()
        })
        .sum();
    assert!(total / 50.0 < 0.05, "mean NMI {}", total / 50.0);
}

/// Direct sqrt-normalized NMI from the joint distribution.
fn nmi_direct(a: &HardLabels, b: &HardLabels) -> f64 {
    let n = a.len() as f64;
    let (ka, kb) = (a.num_classes(), b.num_classes());
    let mut joint = vec![vec![0.0; kb]; ka];
    let (mut pa, mut pb) = (vec![0.0; ka], vec![0.0; kb]);
    for (&x, &y) in a.as_slice().iter().zip(b.as_slice()) {
        joint[x][y] += 1.0 / n;
        pa[x] += 1.0;
        pb[y] += 1.0;
    }
    pa.iter_mut().chain(pb.iter_mut()).for_each(|v| *v /= n);
    let h = |p: &[f64]| -p.iter().filter(|&&v| v > 0.0).map(|v| v * v.ln()).sum::<f64>();
    let mut mi = 0.0;
    for x in 0..ka {
        for y in 0..kb {
            if joint[x][y] > 0.0 {
                mi += joint[x][y] * (joint[x][y] / (pa[x] * pb[y])).ln();
            }
        }
    }
    let (ha, hb) = (h(&pa), h(&pb));
    if ha == 0.0 && hb == 0.0 {
        1.0
    } else if ha == 0.0 || hb == 0.0 {
        0.0
    } else {
        mi / (ha * hb).sqrt()
    }
}

#[test]
fn separation_lower_bound_from_information() {
    let mut rng = rng(3);
    for _ in 0..200 {
        let (k, l) = (rng.random_range(2..=4), rng.random_range(1..=5));
        let lambda = MeanParams::new(DMatrix::from_fn(k, l, |_, _| rng.random_range(0.05..20.0))).unwrap();
        let info = chernoff_info(&lambda);
        let sep = separation(&lambda);
        let bound_scale = l as f64 * lambda.max_entry();
        for a in 0..k {
            for b in 0..k {
                if a != b {
                    let lower = (2.0 * info.value(a, b) / bound_scale).min(2.0);
                    assert!(sep.eps_kr[a][b] >= lower - 1e-12, "{} < {lower}", sep.eps_kr[a][b]);
                }
            }
        }
    }
}

#[test]
fn column_information_matches_a_grid_search() {
    let mut rng = rng(4);
    for _ in 0..5 {
        let gamma = MeanParams::new(DMatrix::from_fn(2, 4, |_, _| rng.random_range(0.1..10.0))).unwrap();
        let rows = gamma.to_rows();
        let mut best = f64::NEG_INFINITY;
        let points = 1_000_000;
        for g in 0..points {
            let s = (g as f64 + 0.5) / points as f64;
            let v: f64 = rows[0]
                .iter()
                .zip(&rows[1])
                .map(|(&a, &b)| (1.0 - s) * a + s * b - a.powf(1.0 - s) * b.powf(s))
                .sum();
            best = best.max(v);
        }
        let info = column_info(&gamma);
        assert!((info.value(0, 1) - best).abs() < 1e-8);
        assert_eq!(info.value(0, 1), chernoff_info(&gamma).value(0, 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mis_properties(seed in any::<u64>(), k in 1usize..6, n in 6usize..80, noise in 0usize..40) {
        let mut r = rng(seed);
        let y = covering_labels(&mut r, n.max(k), k);
        let y_hat = flip(&mut r, &y, noise.min(y.len()));
        let m = misclassification(&y_hat, &y).unwrap();
        let pi = y.proportions();

        // decomposition over true classes
        let weighted: f64 = pi.iter().zip(&m.mis_k).map(|(p, v)| p * v).sum();
        prop_assert!((weighted - m.mis).abs() < 1e-12);
        prop_assert!(m.mis <= m.dmis + 1e-15);
        let max_k = m.mis_k.iter().copied().fold(0.0, f64::max);
        let min_pi = pi.iter().copied().fold(1.0, f64::min);
        prop_assert!(m.mis <= max_k + 1e-12);
        prop_assert!(max_k <= m.mis / min_pi + 1e-12);

        let tau = random_perm(&mut r, k);
        let moved = misclassification(&relabel(&y_hat, &tau), &y).unwrap();
        prop_assert!((moved.mis - m.mis).abs() < 1e-15);
        prop_assert_eq!(misclassification(&y, &y).unwrap().mis, 0.0);
    }

    #[test]
    fn nmi_properties(seed in any::<u64>(), k in 1usize..5, n in 5usize..100) {
        let mut r = rng(seed);
        let a = covering_labels(&mut r, n.max(k), k);
        let b = HardLabels::new((0..a.len()).map(|_| r.random_range(0..3)).collect(), 3).unwrap();
        let v = nmi(&a, &b).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
        prop_assert!((v - nmi(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!((v - nmi_direct(&a, &b)).abs() < 1e-12);
        let ta = relabel(&a, &random_perm(&mut r, k));
        let tb = relabel(&b, &random_perm(&mut r, 3));
        prop_assert!((v - nmi(&ta, &tb).unwrap()).abs() < 1e-12);
    }
}
