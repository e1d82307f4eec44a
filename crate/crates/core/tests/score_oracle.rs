//! Independent direct-summation oracle for the transferability and
//! malleability scores, plus their equivariance properties.

#![allow(clippy::needless_range_loop)]

use pgflab_core::aggregate::{malleability, transferability};
use pgflab_core::model::{AnalysisConfig, Granularity, PerceptualLevel, TaskSpec};
use pgflab_core::pgf::PgfMatrix;
use pgflab_core::TaskSet;
use proptest::prelude::*;

fn tasks(n: usize) -> TaskSet {
    TaskSet::new(
        (0..n)
            .map(|i| {
                TaskSpec::new(
                    format!("t{i}"),
                    format!("T{i}"),
                    PerceptualLevel::Low,
                    Granularity::Pixel,
                )
            })
            .collect(),
    )
    .unwrap()
}

fn matrix(values: Vec<Vec<f64>>) -> PgfMatrix<f64> {
    let n = values.len();
    PgfMatrix {
        model_id: "m".into(),
        seed: 0,
        values,
        ceiling_used: vec![100.0; n],
        warnings: vec![],
    }
}

/// Plain indexed-loop evaluation of the score definition, written
/// independently of the library implementation.
fn oracle_score(entries: &[f64], n: usize) -> (f64, f64, usize, usize) {
    let mut p = 0usize;
    let mut q = 0usize;
    let mut pos_sum = 0.0;
    let mut neg_sum = 0.0;
    for &v in entries {
        if v > 0.0 {
            p += 1;
            pos_sum += v;
        }
        if v < 0.0 {
            q += 1;
            neg_sum += v;
        }
    }
    let positive = if p == 0 {
        0.0
    } else {
        (1.0 - (-(p as f64) / (n as f64)).exp()) / (p as f64) * pos_sum
    };
    let negative = if q == 0 {
        0.0
    } else {
        (1.0 - (-(q as f64) / (n as f64)).exp()) / (q as f64) * neg_sum
    };
    (positive, negative, p, q)
}

fn rel_err(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

fn xorshift(state: &mut u64) -> f64 {
    *state ^= *state << 13;
    *state ^= *state >> 7;
    *state ^= *state << 17;
    (*state >> 11) as f64 / (1u64 << 53) as f64
}

#[test]
fn scores_match_direct_summation_on_random_matrices() {
    let n = 13;
    let set = tasks(n);
    let config = AnalysisConfig::default();
    let mut state = 0xdeadbeefcafef00du64;
    for _ in 0..1000 {
        let values: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let u = xorshift(&mut state);
                        if u < 0.1 {
                            0.0
                        } else {
                            u * 2.0 - 1.0
                        }
                    })
                    .collect()
            })
            .collect();
        let m = matrix(values.clone());
        for i in 0..n {
            let row = &values[i];
            let (ep, en, epc, enc) = oracle_score(row, n);
            let s = transferability(&m, &set, i, &config).unwrap();
            assert!(rel_err(s.positive, ep) < 1e-12, "{} vs {ep}", s.positive);
            assert!(rel_err(s.negative, en) < 1e-12);
            assert_eq!((s.positive_count, s.negative_count), (epc, enc));

            let col: Vec<f64> = (0..n).map(|r| values[r][i]).collect();
            let (mp, mn, mpc, mnc) = oracle_score(&col, n);
            let t = malleability(&m, &set, i, &config).unwrap();
            assert!(rel_err(t.positive, mp) < 1e-12);
            assert!(rel_err(t.negative, mn) < 1e-12);
            assert_eq!((t.positive_count, t.negative_count), (mpc, mnc));
        }
    }
}

#[test]
fn saturated_positive_row_equals_closed_form() {
    // every target positive with the same value c: the weight collapses to
    // (1 - e^{-1}) regardless of c
    let n = 13;
    let set = tasks(n);
    let config = AnalysisConfig::default();
    for c in [0.05, 0.5, 0.93] {
        let m = matrix(vec![vec![c; n]; n]);
        let s = transferability(&m, &set, 0, &config).unwrap();
        let expected = (1.0 - (-1.0f64).exp()) * c;
        assert!(rel_err(s.positive, expected) < 1e-12);
    }
}

#[test]
fn breadth_rewards_spreading_fixed_magnitude() {
    // p entries each of magnitude c: score (1 - e^{-p/N}) * c grows with p
    let n = 13;
    let set = tasks(n);
    let config = AnalysisConfig::default();
    let c = 0.4;
    let mut previous = -1.0;
    for p in 1..=n {
        let mut values = vec![vec![0.0; n]; n];
        for (j, cell) in values[0].iter_mut().take(p).enumerate() {
            let _ = j;
            *cell = c;
        }
        let s = transferability(&matrix(values), &set, 0, &config).unwrap();
        assert!(
            s.positive > previous,
            "p={p}: {} not above {previous}",
            s.positive
        );
        previous = s.positive;
    }
}

proptest! {
    #[test]
    fn scale_equivariance(
        raw in proptest::collection::vec(-1.0..1.0f64, 25),
        lambda in 0.01..50.0f64,
    ) {
        let n = 5;
        let set = tasks(n);
        let config = AnalysisConfig::default();
        let values: Vec<Vec<f64>> = raw.chunks(n).map(|c| c.to_vec()).collect();
        let scaled: Vec<Vec<f64>> =
            values.iter().map(|r| r.iter().map(|v| v * lambda).collect()).collect();
        for i in 0..n {
            let base = transferability(&matrix(values.clone()), &set, i, &config).unwrap();
            let scl = transferability(&matrix(scaled.clone()), &set, i, &config).unwrap();
            prop_assert!(rel_err(scl.positive, base.positive * lambda) < 1e-9);
            prop_assert!(rel_err(scl.negative, base.negative * lambda) < 1e-9);
            prop_assert_eq!(base.positive_count, scl.positive_count);
        }
    }

    #[test]
    fn category_means_scale_with_the_matrix(
        raw in proptest::collection::vec(-1.0..1.0f64, 25),
        lambda in 0.01..50.0f64,
    ) {
        use pgflab_core::aggregate::{category_aggregate, CategoryAxis};
        let n = 5;
        let set = tasks(n);
        let values: Vec<Vec<f64>> = raw.chunks(n).map(|c| c.to_vec()).collect();
        let scaled: Vec<Vec<f64>> =
            values.iter().map(|r| r.iter().map(|v| v * lambda).collect()).collect();
        let base =
            category_aggregate(&[matrix(values)], &set, CategoryAxis::PerceptualLevel).unwrap();
        let scl =
            category_aggregate(&[matrix(scaled)], &set, CategoryAxis::PerceptualLevel).unwrap();
        for (a, b) in base.iter().zip(&scl) {
            prop_assert!(rel_err(b.positive_mean, a.positive_mean * lambda) < 1e-9);
            prop_assert!(rel_err(b.negative_mean, a.negative_mean * lambda) < 1e-9);
            prop_assert_eq!(a.pair_count, b.pair_count);
        }
    }

    #[test]
    fn permutation_equivariance(
        raw in proptest::collection::vec(-1.0..1.0f64, 16),
        rotation in 0usize..4,
    ) {
        // relabeling tasks by a cyclic rotation permutes scores identically
        let n = 4;
        let set = tasks(n);
        let config = AnalysisConfig::default();
        let values: Vec<Vec<f64>> = raw.chunks(n).map(|c| c.to_vec()).collect();
        let perm: Vec<usize> = (0..n).map(|i| (i + rotation) % n).collect();
        let permuted: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| values[perm[i]][perm[j]]).collect())
            .collect();
        for i in 0..n {
            let direct = transferability(&matrix(values.clone()), &set, perm[i], &config).unwrap();
            let relabeled = transferability(&matrix(permuted.clone()), &set, i, &config).unwrap();
            prop_assert!((direct.positive - relabeled.positive).abs() < 1e-12);
            prop_assert!((direct.negative - relabeled.negative).abs() < 1e-12);
        }
    }

    #[test]
    fn malleability_is_transferability_of_the_transpose(
        raw in proptest::collection::vec(-1.0..1.0f64, 36),
    ) {
        let n = 6;
        let set = tasks(n);
        let config = AnalysisConfig::default();
        let values: Vec<Vec<f64>> = raw.chunks(n).map(|c| c.to_vec()).collect();
        let transposed: Vec<Vec<f64>> =
            (0..n).map(|i| (0..n).map(|j| values[j][i]).collect()).collect();
        for j in 0..n {
            let theta = malleability(&matrix(values.clone()), &set, j, &config).unwrap();
            let delta = transferability(&matrix(transposed.clone()), &set, j, &config).unwrap();
            prop_assert!((theta.positive - delta.positive).abs() < 1e-15);
            prop_assert!((theta.negative - delta.negative).abs() < 1e-15);
        }
    }
}
