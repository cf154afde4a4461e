//! Single-qubit detection error matrices and the factored n-qubit error map.
//!
//! The n-qubit response `M` is the Kronecker product of per-qubit 2×2 matrices
//! `D_k = [[1-p0, p1], [p0, 1-p1]]`. Neither `M` nor its inverse is ever
//! stored; both are applied by contracting one qubit axis at a time, which
//! costs `O(n 2^n)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::outcome::OutcomeIndex;
use crate::reconstruct::CountsRecord;

/// A 2×2 real matrix, row-major. Rows index the recorded value, columns the
/// true value.
pub type Mat2 = [[f64; 2]; 2];

/// Models with `|p0 + p1 - 1|` at or below this are treated as singular.
pub const EPS_SINGULAR: f64 = 1e-9;

/// Flip probabilities of one detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitRates {
    /// Probability of reading 1 when the qubit is in 0.
    pub p0: f64,
    /// Probability of reading 0 when the qubit is in 1.
    pub p1: f64,
}

impl QubitRates {
    pub fn new(p0: f64, p1: f64) -> Result<Self> {
        check_probability("p0", p0)?;
        check_probability("p1", p1)?;
        Ok(QubitRates { p0, p1 })
    }

    pub fn matrix(&self) -> Mat2 {
        [[1.0 - self.p0, self.p1], [self.p0, 1.0 - self.p1]]
    }

    /// The substituted parameters `(p0', p1') = (p0, p1) / (p0 + p1 - 1)`.
    /// The inverse of `D(p0, p1)` is `D(p0', p1')`.
    pub fn inverse_rates(&self, qubit: usize) -> Result<(f64, f64)> {
        let denom = self.p0 + self.p1 - 1.0;
        if denom.abs() <= EPS_SINGULAR {
            return Err(Error::SingularModel { qubit, gap: denom.abs() });
        }
        Ok((self.p0 / denom, self.p1 / denom))
    }

    pub fn inverse_matrix(&self, qubit: usize) -> Result<Mat2> {
        let (q0, q1) = self.inverse_rates(qubit)?;
        Ok([[1.0 - q0, q1], [q0, 1.0 - q1]])
    }
}

pub(crate) fn check_probability(what: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { what, value })
    }
}

/// Per-qubit detector error rates. Uniform rates are the special case of
/// identical pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorModel {
    per_qubit: Vec<QubitRates>,
}

impl DetectorModel {
    pub fn new(per_qubit: Vec<QubitRates>) -> Result<Self> {
        if per_qubit.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        for r in &per_qubit {
            check_probability("p0", r.p0)?;
            check_probability("p1", r.p1)?;
        }
        Ok(DetectorModel { per_qubit })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let rates = pairs
            .iter()
            .map(|&(p0, p1)| QubitRates::new(p0, p1))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rates)
    }

    pub fn uniform(n: usize, p0: f64, p1: f64) -> Result<Self> {
        Self::new(vec![QubitRates::new(p0, p1)?; n])
    }

    pub fn ideal(n: usize) -> Self {
        DetectorModel { per_qubit: vec![QubitRates { p0: 0.0, p1: 0.0 }; n] }
    }

    pub fn n(&self) -> usize {
        self.per_qubit.len()
    }

    pub fn rates(&self) -> &[QubitRates] {
        &self.per_qubit
    }

    pub fn qubit(&self, qubit: usize) -> Result<&QubitRates> {
        self.per_qubit
            .get(qubit)
            .ok_or(Error::IndexOutOfRange { index: qubit, limit: self.n() })
    }

    /// `Some((p0, p1))` if every qubit shares the same rates.
    pub fn uniform_rates(&self) -> Option<(f64, f64)> {
        let first = self.per_qubit[0];
        self.per_qubit
            .iter()
            .all(|r| *r == first)
            .then_some((first.p0, first.p1))
    }

    pub fn check_invertible(&self) -> Result<()> {
        for (k, r) in self.per_qubit.iter().enumerate() {
            r.inverse_rates(k)?;
        }
        Ok(())
    }

    pub fn single_qubit_matrix(&self, qubit: usize) -> Result<Mat2> {
        Ok(self.qubit(qubit)?.matrix())
    }

    pub fn single_qubit_inverse(&self, qubit: usize) -> Result<Mat2> {
        self.qubit(qubit)?.inverse_matrix(qubit)
    }

    /// Dimension of the outcome space, `2^n`.
    pub fn dim(&self) -> usize {
        1usize << self.n()
    }

    fn forward_factors(&self) -> Vec<Mat2> {
        self.per_qubit.iter().map(QubitRates::matrix).collect()
    }

    pub(crate) fn inverse_factors(&self) -> Result<Vec<Mat2>> {
        self.per_qubit
            .iter()
            .enumerate()
            .map(|(k, r)| r.inverse_matrix(k))
            .collect()
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if self.n() >= usize::BITS as usize || len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: len });
        }
        Ok(())
    }

    /// `f = M g`.
    pub fn apply_m(&self, g: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(g.len())?;
        let mut out = g.to_vec();
        contract_factors(&self.forward_factors(), &mut out);
        Ok(out)
    }

    /// `g = M⁻¹ f`. Entries of the result may be negative.
    pub fn apply_m_inverse(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(f.len())?;
        let mut out = f.to_vec();
        contract_factors(&self.inverse_factors()?, &mut out);
        Ok(out)
    }

    /// `h_i = Σ_j (M⁻¹_ij)² f_j`, via the entrywise-squared inverse factors.
    pub fn apply_m_inverse_squared(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(f.len())?;
        let squared: Vec<Mat2> = self
            .inverse_factors()?
            .into_iter()
            .map(|m| [[m[0][0] * m[0][0], m[0][1] * m[0][1]], [m[1][0] * m[1][0], m[1][1] * m[1][1]]])
            .collect();
        let mut out = f.to_vec();
        contract_factors(&squared, &mut out);
        Ok(out)
    }

    /// Single element `M_ji`: probability of recording `j` given true `i`.
    pub fn m_element(&self, j: OutcomeIndex, i: OutcomeIndex) -> Result<f64> {
        let dim = self.dim();
        for idx in [j.0, i.0] {
            if idx >= dim {
                return Err(Error::IndexOutOfRange { index: idx, limit: dim });
            }
        }
        Ok(self
            .per_qubit
            .iter()
            .enumerate()
            .map(|(k, r)| r.matrix()[j.bit(k) as usize][i.bit(k) as usize])
            .product())
    }
}

/// Applies `F_{n-1} ⊗ … ⊗ F_0` in place, factor `k` acting on bit `k`.
pub fn contract_factors(factors: &[Mat2], v: &mut [f64]) {
    debug_assert_eq!(v.len(), 1 << factors.len());
    for (k, m) in factors.iter().enumerate() {
        let stride = 1usize << k;
        for block in v.chunks_exact_mut(stride << 1) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x0, x1) = (*a, *b);
                *a = m[0][0] * x0 + m[0][1] * x1;
                *b = m[1][0] * x0 + m[1][1] * x1;
            }
        }
    }
}

/// One calibration run: every shot fed the detector the known basis state
/// `known` (bit `k` is the value prepared on qubit `k`).
#[derive(Debug, Clone)]
pub struct CalibrationRun {
    pub known: OutcomeIndex,
    pub counts: CountsRecord,
}

/// A model estimated from calibration data, with binomial standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibratedModel {
    pub model: DetectorModel,
    pub p0_sigma: Vec<f64>,
    pub p1_sigma: Vec<f64>,
    /// Shots in which each qubit was prepared in 0.
    pub shots0: Vec<u64>,
    /// Shots in which each qubit was prepared in 1.
    pub shots1: Vec<u64>,
}

/// Frequency estimate of the per-qubit flip rates from runs with known input.
/// Rates with zero observed flips are exactly 0 with zero standard error.
pub fn calibrate(runs: &[CalibrationRun]) -> Result<CalibratedModel> {
    let first = runs.first().ok_or(Error::EmptyCounts)?;
    let n = first.counts.n();
    let mut flips = [vec![0u64; n], vec![0u64; n]];
    let mut totals = [vec![0u64; n], vec![0u64; n]];
    for run in runs {
        if run.counts.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: run.counts.n() });
        }
        if run.known.0 >= 1usize << n {
            return Err(Error::IndexOutOfRange { index: run.known.0, limit: 1 << n });
        }
        if run.counts.total() == 0 {
            return Err(Error::EmptyCounts);
        }
        for (&outcome, &count) in run.counts.counts() {
            for k in 0..n {
                let prepared = run.known.bit(k) as usize;
                totals[prepared][k] += count;
                if outcome.bit(k) != run.known.bit(k) {
                    flips[prepared][k] += count;
                }
            }
        }
    }

    let mut rates = Vec::with_capacity(n);
    let mut sig = [Vec::with_capacity(n), Vec::with_capacity(n)];
    for k in 0..n {
        let mut est = [0.0; 2];
        for v in 0..2 {
            if totals[v][k] == 0 {
                return Err(Error::NoData { qubit: k, rate: if v == 0 { "p0" } else { "p1" } });
            }
            let t = totals[v][k] as f64;
            let p = flips[v][k] as f64 / t;
            est[v] = p;
            sig[v].push((p * (1.0 - p) / t).sqrt());
        }
        rates.push(QubitRates { p0: est[0], p1: est[1] });
    }
    let [p0_sigma, p1_sigma] = sig;
    let [shots0, shots1] = totals;
    Ok(CalibratedModel { model: DetectorModel::new(rates)?, p0_sigma, p1_sigma, shots0, shots1 })
}
