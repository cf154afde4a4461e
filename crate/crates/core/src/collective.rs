//! Response matrix for detectors that only count how many qubits read 1.
//!
//! `L_ij` is the probability of registering `i` excitations when `j` qubits
//! are in `|1⟩`:
//!
//! ```text
//! L_ij = Σ_q B(j, 1-p1, q) · B(n-j, p0, i-q),   max(0, i+j-n) ≤ q ≤ min(i, j)
//! ```
//!
//! with `B(n, p, k) = C(n, k) p^k (1-p)^(n-k)`. The inverse is the same
//! expression evaluated at the substituted rates `p' = p / (p0 + p1 - 1)`.

use crate::error::{Error, Result};
use crate::error_model::{check_probability, QubitRates};
use crate::reconstruct::{error_bars, CountsRecord, Distribution};

/// Above this, binomial coefficients are accumulated in floating point.
const EXACT_BINOMIAL_MAX: u64 = 60;

/// `C(n, k)`.
pub fn binomial_coefficient(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= EXACT_BINOMIAL_MAX {
        // c * (n - i) < 2^128 throughout for n <= 60
        let mut c: u128 = 1;
        for i in 0..k {
            c = c * (n - i) as u128 / (i + 1) as u128;
        }
        c as f64
    } else {
        (0..k).fold(1.0, |c, i| c * (n - i) as f64 / (i + 1) as f64)
    }
}

/// `B(n, p, k) = C(n, k) p^k (1-p)^(n-k)`; `p` is not restricted to `[0, 1]`.
pub fn binomial_kernel(n: usize, p: f64, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    binomial_coefficient(n as u64, k as u64) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// A dense `(n+1) × (n+1)` matrix indexed by excitation number.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveResponse {
    n: usize,
    p0: f64,
    p1: f64,
    /// Row-major; `matrix[i * (n+1) + j] = L_ij`.
    matrix: Vec<f64>,
}

impl CollectiveResponse {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rates(&self) -> (f64, f64) {
        (self.p0, self.p1)
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.dim() + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.matrix
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let d = self.dim();
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: v.len() });
        }
        Ok((0..d).map(|i| (0..d).map(|j| self.get(i, j) * v[j]).sum()).collect())
    }

    pub fn matmul(&self, other: &CollectiveResponse) -> Result<Vec<f64>> {
        let d = self.dim();
        if other.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: other.dim() });
        }
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for k in 0..d {
                out[i * d + k] = (0..d).map(|j| self.get(i, j) * other.get(j, k)).sum();
            }
        }
        Ok(out)
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        let d = self.dim();
        (0..d)
            .map(|j| (0..d).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Evaluates the collective kernel at arbitrary (possibly substituted) rates.
fn kernel_matrix(n: usize, p0: f64, p1: f64) -> Vec<f64> {
    let d = n + 1;
    let mut m = vec![0.0; d * d];
    for j in 0..d {
        // kept[q]: q of the j excited qubits still read 1; raised[r]: r of the
        // n-j ground qubits read 1
        let kept: Vec<f64> = (0..=j).map(|q| binomial_kernel(j, 1.0 - p1, q)).collect();
        let raised: Vec<f64> = (0..=n - j).map(|r| binomial_kernel(n - j, p0, r)).collect();
        for i in 0..d {
            let lo = (i + j).saturating_sub(n);
            let hi = i.min(j);
            m[i * d + j] = (lo..=hi).map(|q| kept[q] * raised[i - q]).sum();
        }
    }
    m
}

/// `L(p0, p1)` for `n` qubits with uniform rates.
pub fn build_response(n: usize, p0: f64, p1: f64) -> Result<CollectiveResponse> {
    if n == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    check_probability("p0", p0)?;
    check_probability("p1", p1)?;
    Ok(CollectiveResponse { n, p0, p1, matrix: kernel_matrix(n, p0, p1) })
}

/// `L⁻¹ = L(p0', p1')`.
pub fn build_inverse_response(n: usize, p0: f64, p1: f64) -> Result<CollectiveResponse> {
    if n == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    let (q0, q1) = QubitRates::new(p0, p1)?.inverse_rates(0)?;
    Ok(CollectiveResponse { n, p0, p1, matrix: kernel_matrix(n, q0, q1) })
}

/// Shots per recorded excitation number; entry `j` counts shots that
/// registered `j` qubits in `|1⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectiveCounts {
    counts: Vec<u64>,
}

impl CollectiveCounts {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: counts.len() });
        }
        Ok(CollectiveCounts { counts })
    }

    /// Aggregates individually resolved counts by Hamming weight.
    pub fn from_record(record: &CountsRecord) -> Self {
        let mut counts = vec![0u64; record.n() + 1];
        for (outcome, &c) in record.counts() {
            counts[outcome.weight() as usize] += c;
        }
        CollectiveCounts { counts }
    }

    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn frequencies(&self) -> Result<Vec<f64>> {
        let total = self.total();
        if total == 0 {
            return Err(Error::EmptyCounts);
        }
        Ok(self.counts.iter().map(|&c| c as f64 / total as f64).collect())
    }
}

/// Result of unfolding collective counts.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveUnfolding {
    pub distribution: Distribution,
    /// `‖L‖₁ ‖L⁻¹‖₁`.
    pub condition_number: f64,
}

/// `g = L⁻¹ f` with `Δg_i = sqrt([Σ_j (L⁻¹_ij)² f_j - g_i²] / N)`.
pub fn unfold_collective(counts: &CollectiveCounts, p0: f64, p1: f64) -> Result<CollectiveUnfolding> {
    let n = counts.n();
    let f = counts.frequencies()?;
    let forward = build_response(n, p0, p1)?;
    let inverse = build_inverse_response(n, p0, p1)?;
    let values = inverse.apply(&f)?;
    let d = n + 1;
    let second: Vec<f64> = (0..d)
        .map(|i| (0..d).map(|j| inverse.get(i, j).powi(2) * f[j]).sum())
        .collect();
    let shots = counts.total();
    let (sigmas, clamped) = error_bars(&values, &second, shots);
    Ok(CollectiveUnfolding {
        distribution: Distribution { values, sigmas, shots, clamped },
        condition_number: forward.norm_1() * inverse.norm_1(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn binomial_coefficients() {
        assert_eq!(binomial_coefficient(5, 2), 10.0);
        assert_eq!(binomial_coefficient(60, 30), 118_264_581_564_861_424.0);
        assert_eq!(binomial_coefficient(3, 4), 0.0);
        let c = binomial_coefficient(100, 50);
        assert!((c / 1.008_913_445_455_641_9e29 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn single_qubit_response_is_detector_matrix() {
        let l = build_response(1, 0.1, 0.2).unwrap();
        let d = QubitRates::new(0.1, 0.2).unwrap().matrix();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(l.get(i, j), d[i][j], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn perfect_detector_is_identity() {
        let l = build_response(5, 0.0, 0.0).unwrap();
        let li = build_inverse_response(5, 0.0, 0.0).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert_eq!(l.get(i, j), e);
                assert_eq!(li.get(i, j), e);
            }
        }
    }

    #[test]
    fn two_qubit_ground_column() {
        let l = build_response(2, 0.1, 0.1).unwrap();
        assert_abs_diff_eq!(l.get(0, 0), 0.81, epsilon = 1e-15);
        assert_abs_diff_eq!(l.get(1, 0), 0.18, epsilon = 1e-15);
        assert_abs_diff_eq!(l.get(2, 0), 0.01, epsilon = 1e-15);
    }

    #[test]
    fn columns_are_stochastic() {
        for &(n, p0, p1) in &[(3, 0.02, 0.3), (17, 0.1, 0.05), (80, 0.03, 0.03), (200, 0.01, 0.02)] {
            let l = build_response(n, p0, p1).unwrap();
            for j in 0..=n {
                let s: f64 = (0..=n).map(|i| l.get(i, j)).sum();
                assert_abs_diff_eq!(s, 1.0, epsilon = 1e-12);
                assert!((0..=n).all(|i| (0.0..=1.0).contains(&l.get(i, j))));
            }
        }
    }

    #[test]
    fn inverse_product_is_identity_n10() {
        let l = build_response(10, 0.03, 0.03).unwrap();
        let li = build_inverse_response(10, 0.03, 0.03).unwrap();
        let prod = l.matmul(&li).unwrap();
        for i in 0..11 {
            for k in 0..11 {
                let e = if i == k { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(prod[i * 11 + k], e, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn singular_rates_rejected() {
        assert!(matches!(build_inverse_response(4, 0.5, 0.5), Err(Error::SingularModel { .. })));
        let c = CollectiveCounts::new(vec![1, 2, 3]).unwrap();
        assert!(unfold_collective(&c, 0.5, 0.5).is_err());
        let empty = CollectiveCounts::new(vec![0, 0, 0]).unwrap();
        assert_eq!(unfold_collective(&empty, 0.1, 0.1).unwrap_err(), Error::EmptyCounts);
    }

    #[test]
    fn perfect_detector_unfolding_is_binomial() {
        let c = CollectiveCounts::new(vec![10, 30, 60]).unwrap();
        let u = unfold_collective(&c, 0.0, 0.0).unwrap();
        assert_eq!(u.distribution.values, vec![0.1, 0.3, 0.6]);
        for (s, f) in u.distribution.sigmas.iter().zip([0.1f64, 0.3, 0.6]) {
            assert_abs_diff_eq!(*s, (f * (1.0 - f) / 100.0).sqrt(), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(u.condition_number, 1.0);
    }

    #[test]
    fn exact_columns_unfold_to_unit_vectors() {
        let (n, p0, p1) = (7, 0.04, 0.09);
        let l = build_response(n, p0, p1).unwrap();
        let li = build_inverse_response(n, p0, p1).unwrap();
        for j in 0..=n {
            let mut e = vec![0.0; n + 1];
            e[j] = 1.0;
            let f = l.apply(&e).unwrap();
            let g = li.apply(&f).unwrap();
            for (a, b) in g.iter().zip(&e) {
                assert_abs_diff_eq!(*a, *b, epsilon = 1e-10);
            }
        }
    }
}
