//! Counts, frequency distributions and their correction through the inverse
//! error map, with per-entry binomial error bars before and after.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::error_model::DetectorModel;
use crate::outcome::OutcomeIndex;

/// Full-distribution reconstruction is refused above this many qubits.
/// Observable expectations work from the sparse counts and have no such limit.
pub const MAX_DENSE_QUBITS: usize = 26;

/// Raw shot counts for one measurement setting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsRecord {
    n: usize,
    setting: String,
    counts: BTreeMap<OutcomeIndex, u64>,
    total: u64,
}

impl CountsRecord {
    pub fn new(n: usize, setting: impl Into<String>, counts: BTreeMap<OutcomeIndex, u64>) -> Result<Self> {
        if n == 0 || n >= usize::BITS as usize {
            return Err(Error::DimensionMismatch { expected: 1, got: n });
        }
        let limit = 1usize << n;
        if let Some((&bad, _)) = counts.iter().find(|(k, _)| k.0 >= limit) {
            return Err(Error::IndexOutOfRange { index: bad.0, limit });
        }
        let counts: BTreeMap<_, _> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let total = counts.values().sum();
        Ok(CountsRecord { n, setting: setting.into(), counts, total })
    }

    /// Builds a record from a list of individual shot outcomes.
    pub fn from_shots(n: usize, setting: impl Into<String>, shots: impl IntoIterator<Item = OutcomeIndex>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for s in shots {
            *counts.entry(s).or_insert(0u64) += 1;
        }
        Self::new(n, setting, counts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn setting(&self) -> &str {
        &self.setting
    }

    pub fn counts(&self) -> &BTreeMap<OutcomeIndex, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, outcome: OutcomeIndex) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    pub(crate) fn require_shots(&self) -> Result<f64> {
        if self.total == 0 {
            Err(Error::EmptyCounts)
        } else {
            Ok(self.total as f64)
        }
    }

    /// Dense frequency vector of length `2^n`.
    pub fn dense_frequencies(&self) -> Result<Vec<f64>> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::ResourceLimit { what: "full-distribution reconstruction", n: self.n, limit: MAX_DENSE_QUBITS });
        }
        let total = self.require_shots()?;
        let mut f = vec![0.0; 1 << self.n];
        for (&i, &c) in &self.counts {
            f[i.0] = c as f64 / total;
        }
        Ok(f)
    }
}

/// A probability vector with one-sigma error bars.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub values: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub shots: u64,
    /// Indices whose error-bar radicand came out negative and was clamped to 0.
    pub clamped: Vec<usize>,
}

impl Distribution {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Projection of the values onto the probability simplex. Error bars are
    /// carried over unchanged.
    pub fn projected(&self) -> Distribution {
        Distribution { values: project_to_simplex(&self.values), ..self.clone() }
    }
}

/// Measured frequencies `f_i = N_i / N` with `Δf_i = sqrt(f_i (1 - f_i) / N)`.
pub fn frequencies(record: &CountsRecord) -> Result<Distribution> {
    let values = record.dense_frequencies()?;
    let shots = record.total();
    let n = shots as f64;
    let sigmas = values.iter().map(|&f| (f * (1.0 - f) / n).sqrt()).collect();
    Ok(Distribution { values, sigmas, shots, clamped: Vec::new() })
}

/// `g = M⁻¹ f` with `Δg_i = sqrt([Σ_j (M⁻¹_ij)² f_j - g_i²] / N)`.
pub fn correct(record: &CountsRecord, model: &DetectorModel) -> Result<Distribution> {
    if model.n() != record.n() {
        return Err(Error::DimensionMismatch { expected: model.n(), got: record.n() });
    }
    model.check_invertible()?;
    let f = record.dense_frequencies()?;
    correct_frequencies(&f, record.total(), model)
}

/// Same as [`correct`] starting from a frequency vector and its shot count.
pub fn correct_frequencies(f: &[f64], shots: u64, model: &DetectorModel) -> Result<Distribution> {
    if shots == 0 {
        return Err(Error::EmptyCounts);
    }
    let values = model.apply_m_inverse(f)?;
    let second = model.apply_m_inverse_squared(f)?;
    let (sigmas, clamped) = error_bars(&values, &second, shots);
    Ok(Distribution { values, sigmas, shots, clamped })
}

/// `sqrt((second - mean²) / N)` per entry, clamping negative radicands.
pub(crate) fn error_bars(mean: &[f64], second: &[f64], shots: u64) -> (Vec<f64>, Vec<usize>) {
    let n = shots as f64;
    let mut clamped = Vec::new();
    let sigmas = mean
        .iter()
        .zip(second)
        .enumerate()
        .map(|(i, (&g, &h))| {
            let r = h - g * g;
            if r < 0.0 {
                // exact zeros (identity map on an indicator) are not worth flagging
                if r < -1e-15 {
                    clamped.push(i);
                }
                0.0
            } else {
                (r / n).sqrt()
            }
        })
        .collect();
    (sigmas, clamped)
}

/// Euclidean projection onto `{x : x_i ≥ 0, Σ x_i = 1}` (sort-and-threshold).
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rec(n: usize, entries: &[(usize, u64)]) -> CountsRecord {
        CountsRecord::new(n, "ZZ", entries.iter().map(|&(i, c)| (OutcomeIndex(i), c)).collect()).unwrap()
    }

    #[test]
    fn frequencies_examples() {
        let d = frequencies(&rec(2, &[(2, 100)])).unwrap();
        assert_eq!(d.values, vec![0.0, 0.0, 1.0, 0.0]);
        assert_eq!(d.sigmas[2], 0.0);

        let d = frequencies(&rec(2, &[(0, 50), (1, 150)])).unwrap();
        assert_abs_diff_eq!(d.values[0], 0.25);
        assert_abs_diff_eq!(d.sigmas[0], 0.030_618_621_784_789_73, epsilon = 1e-15);

        let d = frequencies(&rec(2, &[(0, 100), (1, 100), (2, 100), (3, 100)])).unwrap();
        for (v, s) in d.values.iter().zip(&d.sigmas) {
            assert_eq!(*v, 0.25);
            assert_abs_diff_eq!(*s, 0.021_650_635_094_610_97, epsilon = 1e-15);
        }
    }

    #[test]
    fn empty_record_rejected() {
        let r = CountsRecord::new(2, "ZZ", BTreeMap::new()).unwrap();
        assert_eq!(frequencies(&r).unwrap_err(), Error::EmptyCounts);
        assert!(CountsRecord::new(2, "ZZ", [(OutcomeIndex(4), 1)].into_iter().collect()).is_err());
    }

    #[test]
    fn identity_model_reproduces_binomial_bars() {
        let r = rec(2, &[(0, 37), (1, 12), (3, 51)]);
        let f = frequencies(&r).unwrap();
        let g = correct(&r, &DetectorModel::ideal(2)).unwrap();
        assert_eq!(g.values, f.values);
        for (a, b) in g.sigmas.iter().zip(&f.sigmas) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-15);
        }
        assert!(g.clamped.is_empty());
    }

    #[test]
    fn single_qubit_zero_state_recovered() {
        let model = DetectorModel::uniform(1, 0.03, 0.03).unwrap();
        let g = correct_frequencies(&[0.97, 0.03], 1000, &model).unwrap();
        assert_abs_diff_eq!(g.values[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.values[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn dimension_and_singularity_errors() {
        let r = rec(2, &[(0, 10)]);
        assert!(matches!(correct(&r, &DetectorModel::ideal(3)), Err(Error::DimensionMismatch { .. })));
        let singular = DetectorModel::uniform(2, 0.4, 0.6).unwrap();
        assert!(matches!(correct(&r, &singular), Err(Error::SingularModel { .. })));
    }

    #[test]
    fn dense_limit_enforced() {
        let r = CountsRecord::new(27, "Z", [(OutcomeIndex(0), 1)].into_iter().collect()).unwrap();
        assert!(matches!(frequencies(&r), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn error_bars_grow_with_qubit_count() {
        // product state |0..0>, exact distorted frequencies
        let p = 0.05;
        let mut prev = 0.0;
        for n in 1..=8 {
            let model = DetectorModel::uniform(n, p, p).unwrap();
            let mut g = vec![0.0; 1 << n];
            g[0] = 1.0;
            let f = model.apply_m(&g).unwrap();
            let fd = {
                let s: Vec<f64> = f.iter().map(|&x| (x * (1.0 - x) / 1000.0).sqrt()).collect();
                s
            };
            let corrected = correct_frequencies(&f, 1000, &model).unwrap();
            let max = corrected.sigmas.iter().cloned().fold(0.0, f64::max);
            assert!(max > prev, "n={n}: {max} <= {prev}");
            for (a, b) in corrected.sigmas.iter().zip(&fd) {
                assert!(*a >= *b - 1e-15);
            }
            prev = max;
        }
    }

    #[test]
    fn simplex_projection() {
        assert_eq!(project_to_simplex(&[0.5, 0.5]), vec![0.5, 0.5]);
        let p = project_to_simplex(&[1.02, -0.02]);
        assert_abs_diff_eq!(p[0], 1.0);
        assert_abs_diff_eq!(p[1], 0.0);
        let p = project_to_simplex(&[0.6, 0.6, -0.2]);
        assert_abs_diff_eq!(p[0], 0.5);
        assert_abs_diff_eq!(p[1], 0.5);
        assert_abs_diff_eq!(p[2], 0.0);
    }
}
