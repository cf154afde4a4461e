//! Dense-matrix oracles for the factored error map. Explicit `2^n × 2^n`
//! matrices are only ever built here.

use detcorr::{DetectorModel, OutcomeIndex};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn explicit_m(model: &DetectorModel) -> DMatrix<f64> {
    let d = model.dim();
    DMatrix::from_fn(d, d, |j, i| model.m_element(OutcomeIndex(j), OutcomeIndex(i)).unwrap())
}

fn explicit_kron(factors: &[[[f64; 2]; 2]]) -> DMatrix<f64> {
    // factor k acts on bit k: M = F_{n-1} ⊗ … ⊗ F_0
    let mut m = DMatrix::from_element(1, 1, 1.0);
    for f in factors {
        let fm = DMatrix::from_row_slice(2, 2, &[f[0][0], f[0][1], f[1][0], f[1][1]]);
        m = fm.kronecker(&m);
    }
    m
}

fn model_strategy(max_n: usize) -> impl Strategy<Value = DetectorModel> {
    prop::collection::vec((0.0..0.2f64, 0.0..0.2f64), 1..=max_n)
        .prop_map(|pairs| DetectorModel::from_pairs(&pairs).unwrap())
}

fn model_and_vector(max_n: usize) -> impl Strategy<Value = (DetectorModel, Vec<f64>)> {
    model_strategy(max_n).prop_flat_map(|m| {
        let d = m.dim();
        (Just(m), prop::collection::vec(0.0..1.0f64, d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn columns_sum_to_one((model, _) in model_and_vector(4)) {
        let m = explicit_m(&model);
        for i in 0..model.dim() {
            let s: f64 = m.column(i).sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn factored_apply_matches_explicit_matrix((model, g) in model_and_vector(6)) {
        let explicit = explicit_m(&model) * DVector::from_vec(g.clone());
        let fast = model.apply_m(&g).unwrap();
        for (a, b) in fast.iter().zip(explicit.iter()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn explicit_m_is_kronecker_of_detector_matrices(model in model_strategy(5)) {
        let factors: Vec<_> = (0..model.n()).map(|k| model.single_qubit_matrix(k).unwrap()).collect();
        let diff = (explicit_kron(&factors) - explicit_m(&model)).abs().max();
        prop_assert!(diff < 1e-14);
    }

    #[test]
    fn round_trip((model, g) in model_and_vector(6)) {
        let f = model.apply_m(&g).unwrap();
        let back = model.apply_m_inverse(&f).unwrap();
        for (a, b) in back.iter().zip(&g) {
            prop_assert!((a - b).abs() < 1e-10);
        }
        // and the other direction
        let g2 = model.apply_m_inverse(&g).unwrap();
        let f2 = model.apply_m(&g2).unwrap();
        for (a, b) in f2.iter().zip(&g) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn inverse_factors_equal_numeric_inverse(model in model_strategy(6)) {
        let inv_factors: Vec<_> = (0..model.n()).map(|k| model.single_qubit_inverse(k).unwrap()).collect();
        let analytic = explicit_kron(&inv_factors);
        let numeric = explicit_m(&model).try_inverse().unwrap();
        prop_assert!((analytic - numeric).abs().max() < 1e-8);
    }

    #[test]
    fn inverse_preserves_sum((model, f) in model_and_vector(6)) {
        let g = model.apply_m_inverse(&f).unwrap();
        let (sf, sg): (f64, f64) = (f.iter().sum(), g.iter().sum());
        prop_assert!((sf - sg).abs() < 1e-12);
    }

    #[test]
    fn squared_inverse_matches_explicit((model, f) in model_and_vector(5)) {
        let inv = explicit_m(&model).try_inverse().unwrap();
        let sq = inv.map(|x| x * x) * DVector::from_vec(f.clone());
        let fast = model.apply_m_inverse_squared(&f).unwrap();
        for (a, b) in fast.iter().zip(sq.iter()) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }
}

#[test]
fn two_qubit_flip_path_enumeration() {
    // brute force over all flip patterns of |00> with p = 0.1
    let p: f64 = 0.1;
    let mut f = [0.0; 4];
    for flips in 0..4usize {
        let k = flips.count_ones() as i32;
        f[flips] += p.powi(k) * (1.0 - p).powi(2 - k);
    }
    let model = DetectorModel::uniform(2, p, p).unwrap();
    let fast = model.apply_m(&[1.0, 0.0, 0.0, 0.0]).unwrap();
    for (a, b) in fast.iter().zip(f) {
        assert!((a - b).abs() < 1e-15);
    }
    assert!((f[0] - 0.81).abs() < 1e-15 && (f[3] - 0.01).abs() < 1e-15);
}
