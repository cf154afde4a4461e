//! Monte Carlo checks of the propagated error bars and of unbiasedness.

use detcorr::reconstruct::correct_frequencies;
use detcorr::statesim::sample_distribution;
use detcorr::{correct, DetectorModel, ShotPlan};

struct Stats {
    mean: Vec<f64>,
    std: Vec<f64>,
}

fn repeat(g: &[f64], model: &DetectorModel, shots: u64, reps: u64, seed: u64) -> Stats {
    let d = g.len();
    let mut samples = Vec::with_capacity(reps as usize);
    for rep in 0..reps {
        let rec = sample_distribution(g, model, "ZZZZ", ShotPlan::new(shots, seed).unwrap(), rep).unwrap();
        samples.push(correct(&rec, model).unwrap().values);
    }
    let r = reps as f64;
    let mean: Vec<f64> = (0..d).map(|i| samples.iter().map(|s| s[i]).sum::<f64>() / r).collect();
    let std = (0..d)
        .map(|i| (samples.iter().map(|s| (s[i] - mean[i]).powi(2)).sum::<f64>() / (r - 1.0)).sqrt())
        .collect();
    Stats { mean, std }
}

fn test_distribution(n: usize) -> Vec<f64> {
    // smooth, fully supported, deterministic
    let w: Vec<f64> = (0..1usize << n).map(|i| 1.0 + ((i * 7 + 3) % 5) as f64).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

#[test]
fn propagated_error_bars_match_empirical_spread() {
    let (p, shots) = (0.05, 2000);
    for n in [1usize, 2, 4] {
        let model = DetectorModel::uniform(n, p, p).unwrap();
        let g = test_distribution(n);
        let f = model.apply_m(&g).unwrap();
        let predicted = correct_frequencies(&f, shots, &model).unwrap().sigmas;
        let stats = repeat(&g, &model, shots, 1000, 11 + n as u64);
        for i in 0..g.len() {
            let rel = (stats.std[i] / predicted[i] - 1.0).abs();
            assert!(rel < 0.10, "n={n} i={i}: empirical {} vs formula {}", stats.std[i], predicted[i]);
        }
    }
}

#[test]
fn corrected_distribution_is_unbiased() {
    let (n, p, shots, reps) = (3usize, 0.08, 1000, 1000);
    let model = DetectorModel::from_pairs(&[(0.08, 0.02), (p, p), (0.01, 0.12)]).unwrap();
    let mut g = vec![0.0; 1 << n];
    g[0b101] = 0.6;
    g[0b010] = 0.3;
    g[0b111] = 0.1;
    let stats = repeat(&g, &model, shots, reps, 5);
    for i in 0..g.len() {
        let se = stats.std[i] / (reps as f64).sqrt();
        assert!((stats.mean[i] - g[i]).abs() < 3.0 * se, "i={i}: {} vs {} (se {se})", stats.mean[i], g[i]);
    }
}

#[test]
fn corrected_sums_to_one() {
    let model = DetectorModel::uniform(4, 0.04, 0.09).unwrap();
    let g = test_distribution(4);
    let rec = sample_distribution(&g, &model, "ZZZZ", ShotPlan::new(777, 3).unwrap(), 0).unwrap();
    let c = correct(&rec, &model).unwrap();
    assert!((c.sum() - 1.0).abs() < 1e-10);
    let proj = c.projected();
    assert!(proj.values.iter().all(|&x| x >= 0.0));
    assert!((proj.sum() - 1.0).abs() < 1e-12);
}
