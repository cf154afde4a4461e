use detcorr::collective::{build_inverse_response, build_response};
use detcorr::{DetectorModel, OutcomeIndex};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// `L_ij = Σ_{σ ∈ S_i} M_σρ` for a chosen representative `ρ ∈ S_j`.
fn aggregated(model: &DetectorModel, i: usize, rho: usize) -> f64 {
    (0..model.dim())
        .filter(|s| s.count_ones() as usize == i)
        .map(|s| model.m_element(OutcomeIndex(s), OutcomeIndex(rho)).unwrap())
        .sum()
}

fn dense(l: &detcorr::CollectiveResponse) -> DMatrix<f64> {
    let d = l.dim();
    DMatrix::from_fn(d, d, |i, j| l.get(i, j))
}

#[test]
fn aggregation_of_m_reproduces_l_for_every_representative() {
    let rates = [(0.1, 0.1), (0.03, 0.07), (0.2, 0.0), (0.0, 0.15)];
    for n in 1..=5 {
        for &(p0, p1) in &rates {
            let model = DetectorModel::uniform(n, p0, p1).unwrap();
            let l = build_response(n, p0, p1).unwrap();
            for rho in 0..1usize << n {
                let j = rho.count_ones() as usize;
                for i in 0..=n {
                    assert!((aggregated(&model, i, rho) - l.get(i, j)).abs() < 1e-12, "n={n} i={i} rho={rho}");
                }
            }
        }
    }
}

#[test]
fn two_qubit_column_from_aggregation() {
    let model = DetectorModel::uniform(2, 0.1, 0.1).unwrap();
    assert!((aggregated(&model, 0, 0) - 0.81).abs() < 1e-15);
    assert!((aggregated(&model, 1, 0) - 0.18).abs() < 1e-15);
    assert!((aggregated(&model, 2, 0) - 0.01).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn analytic_inverse_matches_numeric(n in 1usize..=12, p0 in 0.0..0.2f64, p1 in 0.0..0.2f64) {
        let l = build_response(n, p0, p1).unwrap();
        let li = build_inverse_response(n, p0, p1).unwrap();
        let numeric = dense(&l).try_inverse().unwrap();
        prop_assert!((dense(&li) - numeric).abs().max() < 1e-8);
    }

    #[test]
    fn inverse_identity_up_to_twenty(n in 1usize..=20, p0 in 0.0..0.2f64, p1 in 0.0..0.2f64) {
        let l = build_response(n, p0, p1).unwrap();
        let li = build_inverse_response(n, p0, p1).unwrap();
        let prod = l.matmul(&li).unwrap();
        let d = n + 1;
        for i in 0..d {
            for k in 0..d {
                let e = if i == k { 1.0 } else { 0.0 };
                prop_assert!((prod[i * d + k] - e).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn response_is_column_stochastic(n in 1usize..=40, p0 in 0.0..1.0f64, p1 in 0.0..1.0f64) {
        let l = build_response(n, p0, p1).unwrap();
        for j in 0..=n {
            let s: f64 = (0..=n).map(|i| l.get(i, j)).sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
            prop_assert!((0..=n).all(|i| l.get(i, j) >= 0.0 && l.get(i, j) <= 1.0 + 1e-15));
        }
    }
}
