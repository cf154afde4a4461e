//! Finite-shot sampling with a counter-based RNG.
//!
//! Shot `s` of stream `t` draws from a ChaCha8 keystream seeded by `seed`,
//! positioned at stream `t` and word offset `s · words_per_shot`. The draws of
//! a shot therefore do not depend on how shots are split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::collective::CollectiveCounts;
use crate::error::{Error, Result};
use crate::error_model::{check_probability, contract_factors, DetectorModel, Mat2};
use crate::observables::MeasurementSetting;
use crate::outcome::OutcomeIndex;
use crate::reconstruct::CountsRecord;
use crate::statesim::{graph_state, setting_probabilities, GraphSpec};

/// Largest register simulated for full sampling.
pub const MAX_SIM_QUBITS: usize = 14;

/// Local depolarizing preparation noise with probability `p_n` per qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    p_n: f64,
}

impl NoiseSpec {
    pub fn new(p_n: f64) -> Result<Self> {
        check_probability("p_n", p_n)?;
        Ok(NoiseSpec { p_n })
    }

    pub fn none() -> Self {
        NoiseSpec { p_n: 0.0 }
    }

    pub fn p_n(&self) -> f64 {
        self.p_n
    }

    /// Every non-identity factor of a Pauli expectation is damped by `1 - p_n`.
    pub fn damping(&self) -> f64 {
        1.0 - self.p_n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotPlan {
    pub shots: u64,
    pub seed: u64,
}

impl ShotPlan {
    pub fn new(shots: u64, seed: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::EmptyCounts);
        }
        Ok(ShotPlan { shots, seed })
    }
}

/// Exact `⟨S_k⟩ = (1 - p_n)^{support(S_k)}` under local depolarizing noise.
pub fn stabilizer_expectations_noisy(graph: &GraphSpec, noise: NoiseSpec) -> Vec<f64> {
    graph.stabilizers().iter().map(|s| noise.damping().powi(s.support() as i32)).collect()
}

fn check_sim_size(n: usize) -> Result<()> {
    if n > MAX_SIM_QUBITS {
        return Err(Error::ResourceLimit { what: "state simulation", n, limit: MAX_SIM_QUBITS });
    }
    Ok(())
}

/// Exact outcome distribution of the noisy graph state in `setting`, before
/// detection.
///
/// A depolarizing channel followed by a Pauli-basis measurement acts on the
/// outcome bit as a symmetric flip with probability `p_n / 2` (two of the
/// three Paulis anticommute with the measured one), so the noisy distribution
/// is the ideal one pushed through per-qubit flip matrices.
pub fn exact_setting_distribution(graph: &GraphSpec, noise: NoiseSpec, setting: &MeasurementSetting) -> Result<Vec<f64>> {
    check_sim_size(graph.n())?;
    if setting.n() != graph.n() {
        return Err(Error::DimensionMismatch { expected: graph.n(), got: setting.n() });
    }
    let mut probs = setting_probabilities(&graph_state(graph), setting);
    let q = noise.p_n() / 2.0;
    if q > 0.0 {
        let flip: Mat2 = [[1.0 - q, q], [q, 1.0 - q]];
        contract_factors(&vec![flip; graph.n()], &mut probs);
    }
    Ok(probs)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws shots from `dist` (length `2^n`) and passes every bit through the
/// detector model. Shots run in parallel on the current rayon pool; the
/// result is identical for any thread count.
pub fn sample_distribution(
    dist: &[f64],
    model: &DetectorModel,
    setting_label: &str,
    plan: ShotPlan,
    stream: u64,
) -> Result<CountsRecord> {
    let n = model.n();
    if dist.len() != 1usize << n {
        return Err(Error::DimensionMismatch { expected: 1 << n, got: dist.len() });
    }
    let mut cdf = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for &p in dist {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    let last_nonzero = dist.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let base = stream_rng(plan.seed, stream);
    let words = 2 * (n as u128 + 1);
    let rates = model.rates();

    let outcomes: Vec<usize> = (0..plan.shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = base.clone();
            rng.set_word_pos(shot as u128 * words);
            let u: f64 = rng.random::<f64>() * acc;
            let mut idx = cdf.partition_point(|&c| c <= u).min(last_nonzero);
            for (k, r) in rates.iter().enumerate() {
                let x: f64 = rng.random();
                let flip = if (idx >> k) & 1 == 0 { r.p0 } else { r.p1 };
                if x < flip {
                    idx ^= 1 << k;
                }
            }
            idx
        })
        .collect();
    CountsRecord::from_shots(n, setting_label, outcomes.into_iter().map(OutcomeIndex))
}

/// Simulates one measurement setting of a noisy graph state read by an
/// imperfect detector.
pub fn sample_setting(
    graph: &GraphSpec,
    noise: NoiseSpec,
    setting: &MeasurementSetting,
    model: &DetectorModel,
    plan: ShotPlan,
    stream: u64,
) -> Result<CountsRecord> {
    if model.n() != graph.n() {
        return Err(Error::DimensionMismatch { expected: graph.n(), got: model.n() });
    }
    let dist = exact_setting_distribution(graph, noise, setting)?;
    sample_distribution(&dist, model, &setting.to_string(), plan, stream)
}

/// Collective detection of a product state in which each qubit reads 1 with
/// probability `prob_one` before detector flips with uniform `(p0, p1)`.
pub fn sample_collective_product(
    n: usize,
    prob_one: f64,
    p0: f64,
    p1: f64,
    plan: ShotPlan,
    stream: u64,
) -> Result<CollectiveCounts> {
    check_probability("prob_one", prob_one)?;
    check_probability("p0", p0)?;
    check_probability("p1", p1)?;
    let base = stream_rng(plan.seed, stream);
    let words = 4 * n as u128;
    let hits: Vec<usize> = (0..plan.shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = base.clone();
            rng.set_word_pos(shot as u128 * words);
            let mut m = 0;
            for _ in 0..n {
                let one = rng.random::<f64>() < prob_one;
                let flip = rng.random::<f64>() < if one { p1 } else { p0 };
                if one != flip {
                    m += 1;
                }
            }
            m
        })
        .collect();
    let mut counts = vec![0u64; n + 1];
    for m in hits {
        counts[m] += 1;
    }
    CollectiveCounts::new(counts)
}
