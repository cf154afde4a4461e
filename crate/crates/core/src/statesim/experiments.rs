//! Stabilizer and witness experiments on GHZ and linear-cluster states.
//!
//! CSV schemas (header row first, numbers with 17 significant digits):
//!
//! * stabilizers: `state,k,support,raw,raw_sigma,raw_boot_sigma,corrected,corrected_sigma,corrected_boot_sigma,expected_raw`
//! * witness: `state,p_n,raw,raw_sigma,raw_boot_sigma,corrected,corrected_sigma,corrected_boot_sigma,exact_raw,exact_corrected`

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::Result;
use crate::error_model::DetectorModel;
use crate::observables::{
    bootstrap_sigma, class_projectors, combine_classes, correction_factor, shot_mean, witness_exact, Expectation,
    DEFAULT_RESAMPLES,
};
use crate::reconstruct::CountsRecord;
use crate::statesim::{exact_setting_distribution, sample_setting, GraphKind, GraphSpec, NoiseSpec, ShotPlan};

const STATES: [GraphKind; 2] = [GraphKind::Ghz, GraphKind::LinearCluster];

/// Bootstrap streams live above every sampling stream.
const BOOTSTRAP_STREAM: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerConfig {
    pub n: usize,
    pub p: f64,
    pub p_n: f64,
    pub shots: u64,
    pub seed: u64,
    pub resamples: usize,
}

impl Default for StabilizerConfig {
    fn default() -> Self {
        StabilizerConfig { n: 10, p: 0.03, p_n: 0.0, shots: 5000, seed: 1, resamples: DEFAULT_RESAMPLES }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerRow {
    pub state: &'static str,
    pub k: usize,
    pub support: usize,
    pub raw: Expectation,
    pub raw_boot_sigma: f64,
    pub corrected: Expectation,
    pub corrected_boot_sigma: f64,
    /// `(1 - 2p)^support (1 - p_n)^support`.
    pub expected_raw: f64,
}

/// Samples one record per color class of `graph`.
fn sample_classes(
    graph: &GraphSpec,
    noise: NoiseSpec,
    model: &DetectorModel,
    plan: ShotPlan,
    stream_base: u64,
) -> Result<Vec<CountsRecord>> {
    graph
        .color_classes()
        .iter()
        .enumerate()
        .map(|(l, class)| sample_setting(graph, noise, &graph.class_setting(class), model, plan, stream_base + l as u64))
        .collect()
}

/// Raw and corrected `⟨S_k⟩` for every vertex of GHZ and LC states.
pub fn stabilizer_experiment(cfg: &StabilizerConfig) -> Result<Vec<StabilizerRow>> {
    let model = DetectorModel::uniform(cfg.n, cfg.p, cfg.p)?;
    let ideal = DetectorModel::ideal(cfg.n);
    let noise = NoiseSpec::new(cfg.p_n)?;
    let plan = ShotPlan::new(cfg.shots, cfg.seed)?;
    let mut rows = Vec::new();
    for (g_idx, &kind) in STATES.iter().enumerate() {
        let graph = GraphSpec::build(kind, cfg.n)?;
        let stream_base = (g_idx as u64) << 16;
        let records = sample_classes(&graph, noise, &model, plan, stream_base)?;
        let classes = graph.color_classes();
        for k in 0..cfg.n {
            let l = classes.iter().position(|c| c.contains(&k)).expect("every vertex is colored");
            let record = &records[l];
            let s = graph.stabilizer(k);
            let raw_obs = correction_factor(&s, &ideal)?;
            let cor_obs = correction_factor(&s, &model)?;
            let boot_stream = BOOTSTRAP_STREAM | stream_base | (k as u64) << 4;
            let support = s.support();
            rows.push(StabilizerRow {
                state: kind.label(),
                k,
                support,
                raw: shot_mean(record, |o| raw_obs.value(o))?,
                raw_boot_sigma: bootstrap_sigma(record, |o| raw_obs.value(o), cfg.resamples, cfg.seed, boot_stream),
                corrected: shot_mean(record, |o| cor_obs.value(o))?,
                corrected_boot_sigma: bootstrap_sigma(record, |o| cor_obs.value(o), cfg.resamples, cfg.seed, boot_stream),
                expected_raw: ((1.0 - 2.0 * cfg.p) * (1.0 - cfg.p_n)).powi(support as i32),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessConfig {
    pub n: usize,
    pub p: f64,
    pub grid: Vec<f64>,
    pub shots: u64,
    pub seed: u64,
    pub resamples: usize,
}

/// `0, 0.005, …, 0.10`.
pub fn default_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 * 0.005).collect()
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig { n: 10, p: 0.03, grid: default_grid(), shots: 5000, seed: 1, resamples: DEFAULT_RESAMPLES }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessRow {
    pub state: &'static str,
    pub p_n: f64,
    pub raw: Expectation,
    pub raw_boot_sigma: f64,
    pub corrected: Expectation,
    pub corrected_boot_sigma: f64,
    /// Uncorrected witness on the exact distorted distributions.
    pub exact_raw: f64,
    /// Corrected witness on the exact distorted distributions.
    pub exact_corrected: f64,
}

/// Exact per-class outcome distributions as recorded by the detector.
pub fn exact_recorded_distributions(graph: &GraphSpec, noise: NoiseSpec, model: &DetectorModel) -> Result<Vec<Vec<f64>>> {
    graph
        .color_classes()
        .iter()
        .map(|class| model.apply_m(&exact_setting_distribution(graph, noise, &graph.class_setting(class))?))
        .collect()
}

/// Exact raw and corrected witness values at preparation noise `p_n`.
pub fn exact_witness(graph: &GraphSpec, p: f64, p_n: f64) -> Result<(f64, f64)> {
    let model = DetectorModel::uniform(graph.n(), p, p)?;
    let dists = exact_recorded_distributions(graph, NoiseSpec::new(p_n)?, &model)?;
    Ok((witness_exact(graph, &dists, &DetectorModel::ideal(graph.n()))?, witness_exact(graph, &dists, &model)?))
}

/// Preparation noise at which the exact corrected witness changes sign,
/// located by bisection on `[lo, hi]`. `None` if there is no sign change.
pub fn corrected_witness_crossing(graph: &GraphSpec, p: f64, lo: f64, hi: f64) -> Result<Option<f64>> {
    let w = |x: f64| exact_witness(graph, p, x).map(|(_, c)| c);
    let (mut a, mut b) = (lo, hi);
    let (wa, wb) = (w(a)?, w(b)?);
    if wa.signum() == wb.signum() {
        return Ok(None);
    }
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if w(m)?.signum() == wa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

/// Raw and corrected witness over a grid of preparation noise.
pub fn witness_experiment(cfg: &WitnessConfig) -> Result<Vec<WitnessRow>> {
    let model = DetectorModel::uniform(cfg.n, cfg.p, cfg.p)?;
    let ideal = DetectorModel::ideal(cfg.n);
    let plan = ShotPlan::new(cfg.shots, cfg.seed)?;
    let mut rows = Vec::new();
    for (g_idx, &kind) in STATES.iter().enumerate() {
        let graph = GraphSpec::build(kind, cfg.n)?;
        let raw_proj = class_projectors(&graph, &ideal)?;
        let cor_proj = class_projectors(&graph, &model)?;
        let grid_rows: Vec<Result<WitnessRow>> = cfg
            .grid
            .par_iter()
            .enumerate()
            .map(|(i, &p_n)| {
                let noise = NoiseSpec::new(p_n)?;
                let stream_base = (g_idx as u64) << 32 | (i as u64) << 8;
                let records = sample_classes(&graph, noise, &model, plan, stream_base)?;
                let dists = exact_recorded_distributions(&graph, noise, &model)?;
                let mut raw = Vec::new();
                let mut cor = Vec::new();
                let (mut raw_boot, mut cor_boot) = (0.0, 0.0);
                for (l, record) in records.iter().enumerate() {
                    let (rp, cp) = (&raw_proj[l], &cor_proj[l]);
                    // per-outcome values, computed once per distinct outcome
                    let values: std::collections::HashMap<_, _> =
                        record.counts().keys().map(|&o| (o, (rp.value(o), cp.value(o)))).collect();
                    raw.push(shot_mean(record, |o| values[&o].0)?);
                    cor.push(shot_mean(record, |o| values[&o].1)?);
                    let bs = BOOTSTRAP_STREAM | stream_base | l as u64;
                    raw_boot += bootstrap_sigma(record, |o| values[&o].0, cfg.resamples, cfg.seed, bs).powi(2);
                    cor_boot += bootstrap_sigma(record, |o| values[&o].1, cfg.resamples, cfg.seed, bs).powi(2);
                }
                let raw = combine_classes(raw);
                let cor = combine_classes(cor);
                let exact_raw: f64 = 3.0 - 2.0 * raw_proj.iter().zip(&dists).map(|(p, f)| p.expectation_exact(f)).sum::<f64>();
                let exact_corrected: f64 =
                    3.0 - 2.0 * cor_proj.iter().zip(&dists).map(|(p, f)| p.expectation_exact(f)).sum::<f64>();
                Ok(WitnessRow {
                    state: kind.label(),
                    p_n,
                    raw: Expectation { value: raw.value, sigma: raw.sigma },
                    raw_boot_sigma: 2.0 * raw_boot.sqrt(),
                    corrected: Expectation { value: cor.value, sigma: cor.sigma },
                    corrected_boot_sigma: 2.0 * cor_boot.sqrt(),
                    exact_raw,
                    exact_corrected,
                })
            })
            .collect();
        for r in grid_rows {
            rows.push(r?);
        }
    }
    Ok(rows)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_stabilizer_csv<W: Write>(rows: &[StabilizerRow], mut out: W) -> io::Result<()> {
    writeln!(out, "state,k,support,raw,raw_sigma,raw_boot_sigma,corrected,corrected_sigma,corrected_boot_sigma,expected_raw")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.state,
            r.k,
            r.support,
            num(r.raw.value),
            num(r.raw.sigma),
            num(r.raw_boot_sigma),
            num(r.corrected.value),
            num(r.corrected.sigma),
            num(r.corrected_boot_sigma),
            num(r.expected_raw)
        )?;
    }
    Ok(())
}

pub fn write_witness_csv<W: Write>(rows: &[WitnessRow], mut out: W) -> io::Result<()> {
    writeln!(out, "state,p_n,raw,raw_sigma,raw_boot_sigma,corrected,corrected_sigma,corrected_boot_sigma,exact_raw,exact_corrected")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.state,
            num(r.p_n),
            num(r.raw.value),
            num(r.raw.sigma),
            num(r.raw_boot_sigma),
            num(r.corrected.value),
            num(r.corrected.sigma),
            num(r.corrected_boot_sigma),
            num(r.exact_raw),
            num(r.exact_corrected)
        )?;
    }
    Ok(())
}
