//! Genuine multipartite entanglement witness for graph states,
//!
//! ```text
//! W = 3 - 2 Σ_l ∏_{k ∈ Q_l} (S_k + 1) / 2
//! ```
//!
//! Each color-class projector is expanded into its `2^|Q_l|` stabilizer
//! subset products. Every product is a Pauli string diagonal in the class
//! setting and is corrected by its own support.

use crate::error::{Error, Result};
use crate::error_model::DetectorModel;
use crate::observables::pauli::{check_setting, correction_factor, shot_mean, CorrectedObservable, Expectation, PauliString};
use crate::outcome::OutcomeIndex;
use crate::reconstruct::CountsRecord;
use crate::statesim::GraphSpec;

/// Largest color class whose projector is expanded term by term.
pub const MAX_CLASS_SIZE: usize = 20;

/// The expanded projector `∏_{k ∈ Q} (S_k + 1)/2` as corrected diagonal terms.
#[derive(Debug, Clone)]
pub struct ClassProjector {
    class: Vec<usize>,
    terms: Vec<CorrectedObservable>,
}

impl ClassProjector {
    pub fn new(graph: &GraphSpec, class: &[usize], model: &DetectorModel) -> Result<Self> {
        if class.len() > MAX_CLASS_SIZE {
            return Err(Error::ResourceLimit { what: "witness color class", n: class.len(), limit: MAX_CLASS_SIZE });
        }
        if model.n() != graph.n() {
            return Err(Error::DimensionMismatch { expected: graph.n(), got: model.n() });
        }
        let weight = 0.5f64.powi(class.len() as i32);
        let stabilizers: Vec<PauliString> = class.iter().map(|&k| graph.stabilizer(k)).collect();
        let mut products = Vec::with_capacity(1 << class.len());
        products.push(PauliString::identity(graph.n()));
        for mask in 1usize..1 << class.len() {
            let low = mask.trailing_zeros() as usize;
            let next = products[mask & (mask - 1)].mul(&stabilizers[low])?;
            products.push(next);
        }
        let terms = products
            .into_iter()
            .map(|p| {
                let c = p.coefficient();
                correction_factor(&p.with_coefficient(c * weight), model)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassProjector { class: class.to_vec(), terms })
    }

    pub fn class(&self) -> &[usize] {
        &self.class
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn value(&self, outcome: OutcomeIndex) -> f64 {
        self.terms.iter().map(|t| t.value(outcome)).sum()
    }

    /// `Σ_j value(j) f_j` for a dense distribution.
    pub fn expectation_exact(&self, f: &[f64]) -> f64 {
        f.iter()
            .enumerate()
            .filter(|(_, &x)| x != 0.0)
            .map(|(j, &x)| x * self.value(OutcomeIndex(j)))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessResult {
    pub value: f64,
    pub sigma: f64,
    /// Projector expectation per color class.
    pub classes: Vec<Expectation>,
}

/// `W` and its error from independent per-class projector estimates.
pub fn combine_classes(classes: Vec<Expectation>) -> WitnessResult {
    let sum: f64 = classes.iter().map(|e| e.value).sum();
    let var: f64 = classes.iter().map(|e| e.sigma * e.sigma).sum();
    WitnessResult { value: 3.0 - 2.0 * sum, sigma: 2.0 * var.sqrt(), classes }
}

/// Projectors for every color class, in [`GraphSpec::color_classes`] order.
pub fn class_projectors(graph: &GraphSpec, model: &DetectorModel) -> Result<Vec<ClassProjector>> {
    graph.color_classes().iter().map(|q| ClassProjector::new(graph, q, model)).collect()
}

/// Witness estimate from one counts record per color class (same order as
/// [`GraphSpec::color_classes`]). Pass [`DetectorModel::ideal`] for the
/// uncorrected witness.
pub fn witness_value(graph: &GraphSpec, records: &[CountsRecord], model: &DetectorModel) -> Result<WitnessResult> {
    let projectors = class_projectors(graph, model)?;
    let mut classes = Vec::with_capacity(projectors.len());
    for (l, proj) in projectors.iter().enumerate() {
        let record = records.get(l).ok_or(Error::MissingSetting(l))?;
        for &k in proj.class() {
            check_setting(record, &graph.stabilizer(k))?;
        }
        classes.push(shot_mean(record, |o| proj.value(o))?);
    }
    Ok(combine_classes(classes))
}

/// Witness from exact per-class outcome distributions.
pub fn witness_exact(graph: &GraphSpec, distributions: &[Vec<f64>], model: &DetectorModel) -> Result<f64> {
    let projectors = class_projectors(graph, model)?;
    let mut sum = 0.0;
    for (l, proj) in projectors.iter().enumerate() {
        let f = distributions.get(l).ok_or(Error::MissingSetting(l))?;
        if f.len() != 1 << graph.n() {
            return Err(Error::DimensionMismatch { expected: 1 << graph.n(), got: f.len() });
        }
        sum += proj.expectation_exact(f);
    }
    Ok(3.0 - 2.0 * sum)
}
