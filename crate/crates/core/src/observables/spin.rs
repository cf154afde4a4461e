//! Collective-spin moments and the spin squeezing parameter.
//!
//! An outcome with `m` qubits reading 1 is the `J_α` eigenvalue `n/2 - m` in
//! whichever basis `α` was measured. With uniform symmetric rates `p`:
//!
//! ```text
//! J_α^c     = (1-2p)^-1 J_α
//! (J_z²)^c  = (1-2p)^-2 [J_z² - n p (1-p)]
//! ξ² = n⟨J_z²⟩/⟨J_x⟩²,  ξ_c² = n⟨(J_z²)^c⟩/⟨J_x^c⟩² = ξ² - ξ_d²
//! ξ_d² = n² p (1-p) (1-2p)^-2 ⟨J_x^c⟩^-2
//! ```

use crate::collective::CollectiveCounts;
use crate::error::{Error, Result};
use crate::error_model::{check_probability, DetectorModel, EPS_SINGULAR};
use crate::reconstruct::CountsRecord;

/// `|⟨J_x⟩|` below this is treated as no mean spin.
pub const MEAN_SPIN_TOLERANCE: f64 = 1e-9;

/// Data in one collective-spin basis: counts resolved per qubit, counts
/// aggregated into excitation numbers, or an exact excitation-number
/// distribution (infinite shots, zero error bars).
#[derive(Debug, Clone, Copy)]
pub enum SpinCounts<'a> {
    Individual(&'a CountsRecord),
    Collective(&'a CollectiveCounts),
    Exact(&'a [f64]),
}

impl SpinCounts<'_> {
    pub fn n(&self) -> usize {
        match self {
            SpinCounts::Individual(r) => r.n(),
            SpinCounts::Collective(c) => c.n(),
            SpinCounts::Exact(d) => d.len().saturating_sub(1),
        }
    }

    /// Shot count and the sums `Σ J`, `Σ J²`, `Σ J⁴` over shots (`None` as
    /// shot count for exact distributions).
    ///
    /// Every `J` is a half-integer, so all sums are exact in `f64` as long as
    /// they stay below 2^53 and both variants agree bit for bit.
    fn power_sums(&self) -> Result<(Option<f64>, [f64; 3])> {
        let half_n = self.n() as f64 / 2.0;
        let mut sums = [0.0; 3];
        let mut add = |m: u32, c: f64| {
            let j = half_n - m as f64;
            sums[0] += c * j;
            sums[1] += c * j * j;
            sums[2] += c * j * j * j * j;
        };
        let total = match self {
            SpinCounts::Individual(r) => {
                for (o, &c) in r.counts() {
                    add(o.weight(), c as f64);
                }
                r.total()
            }
            SpinCounts::Collective(cc) => {
                for (m, &c) in cc.counts().iter().enumerate() {
                    add(m as u32, c as f64);
                }
                cc.total()
            }
            SpinCounts::Exact(d) => {
                if d.len() < 2 {
                    return Err(Error::DimensionMismatch { expected: 2, got: d.len() });
                }
                for (m, &x) in d.iter().enumerate() {
                    add(m as u32, x);
                }
                return Ok((None, sums));
            }
        };
        if total == 0 {
            return Err(Error::EmptyCounts);
        }
        Ok((Some(total as f64), sums))
    }
}

/// First and second moments of one spin component with standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMoments {
    pub mean: f64,
    pub mean_sigma: f64,
    pub second: f64,
    pub second_sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectedMoments {
    pub raw: SpinMoments,
    pub corrected: SpinMoments,
}

/// Measured moments of `J_α` over the shots.
pub fn spin_moments(counts: SpinCounts<'_>) -> Result<SpinMoments> {
    let (shots, [s1, s2, s4]) = counts.power_sums()?;
    let n = shots.unwrap_or(1.0);
    let mean = s1 / n;
    let second = s2 / n;
    let Some(n) = shots else {
        return Ok(SpinMoments { mean, mean_sigma: 0.0, second, second_sigma: 0.0 });
    };
    let var1 = (second - mean * mean).max(0.0);
    let var2 = (s4 / n - second * second).max(0.0);
    Ok(SpinMoments { mean, mean_sigma: (var1 / n).sqrt(), second, second_sigma: (var2 / n).sqrt() })
}

fn check_rate(p: f64) -> Result<f64> {
    check_probability("p", p)?;
    let s = 1.0 - 2.0 * p;
    if s.abs() <= EPS_SINGULAR {
        return Err(Error::SingularModel { qubit: 0, gap: s.abs() });
    }
    Ok(s)
}

/// Corrected `⟨J_z⟩`, `⟨J_z²⟩` for uniform symmetric flip rate `p`.
pub fn jz_moments_corrected(counts: SpinCounts<'_>, p: f64) -> Result<CorrectedMoments> {
    let s = check_rate(p)?;
    let n = counts.n() as f64;
    let raw = spin_moments(counts)?;
    let corrected = SpinMoments {
        mean: raw.mean / s,
        mean_sigma: raw.mean_sigma / s.abs(),
        second: (raw.second - n * p * (1.0 - p)) / (s * s),
        second_sigma: raw.second_sigma / (s * s),
    };
    Ok(CorrectedMoments { raw, corrected })
}

/// Inputs for the squeezing parameter: squeezing along z, mean spin along x.
#[derive(Debug, Clone)]
pub struct SqueezingInput<'a> {
    pub counts_z: SpinCounts<'a>,
    pub counts_x: SpinCounts<'a>,
    /// Uniform symmetric flip rate.
    pub p: f64,
}

impl<'a> SqueezingInput<'a> {
    pub fn new(counts_z: SpinCounts<'a>, counts_x: SpinCounts<'a>, p: f64) -> Result<Self> {
        if counts_z.n() != counts_x.n() {
            return Err(Error::DimensionMismatch { expected: counts_z.n(), got: counts_x.n() });
        }
        Ok(SqueezingInput { counts_z, counts_x, p })
    }

    /// Uses the model's rate; the closed form needs `p0 = p1` on all qubits.
    pub fn with_model(counts_z: SpinCounts<'a>, counts_x: SpinCounts<'a>, model: &DetectorModel) -> Result<Self> {
        if model.n() != counts_z.n() {
            return Err(Error::DimensionMismatch { expected: counts_z.n(), got: model.n() });
        }
        match model.uniform_rates() {
            Some((p0, p1)) if p0 == p1 => Self::new(counts_z, counts_x, p0),
            _ => Err(Error::NonUniformModel),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingResult {
    pub xi_raw: f64,
    pub xi_corrected: f64,
    /// Detection-noise contribution `ξ_d` (so `ξ² = ξ_c² + ξ_d²`).
    pub xi_d: f64,
    /// First-order propagation of the raw moment errors into `ξ`.
    pub xi_raw_sigma: f64,
    /// First-order propagation of the corrected moment errors into `ξ_c`.
    pub xi_corrected_sigma: f64,
    /// `Δξ · ξ / ξ_c`, treating `ξ_d` as exact.
    pub xi_corrected_sigma_scaled: f64,
    /// Set when the sampled `ξ² < ξ_d²`; `xi_corrected` is then reported as 0.
    pub negative_radicand: bool,
    pub jz: CorrectedMoments,
    pub jx: CorrectedMoments,
}

/// `ξ = sqrt(n A / B²)` and `Δξ` from errors in `A` and `B`.
fn xi_with_sigma(n: f64, a: f64, a_sigma: f64, b: f64, b_sigma: f64) -> (f64, f64, f64) {
    let xi2 = n * a / (b * b);
    let d_xi2 = ((n / (b * b) * a_sigma).powi(2) + (2.0 * n * a / (b * b * b) * b_sigma).powi(2)).sqrt();
    let xi = xi2.max(0.0).sqrt();
    let sigma = if xi > 0.0 { d_xi2 / (2.0 * xi) } else { f64::INFINITY };
    (xi2, xi, sigma)
}

pub fn squeezing_corrected(input: &SqueezingInput<'_>) -> Result<SqueezingResult> {
    let p = input.p;
    let s = check_rate(p)?;
    let n = input.counts_z.n() as f64;
    let jz = jz_moments_corrected(input.counts_z, p)?;
    let jx = jz_moments_corrected(input.counts_x, p)?;
    if jx.raw.mean.abs() < MEAN_SPIN_TOLERANCE {
        return Err(Error::DegenerateMeanSpin(jx.raw.mean));
    }

    let (xi2, xi_raw, xi_raw_sigma) =
        xi_with_sigma(n, jz.raw.second, jz.raw.second_sigma, jx.raw.mean, jx.raw.mean_sigma);
    let (xi_c2, _, xi_corrected_sigma) = xi_with_sigma(
        n,
        jz.corrected.second,
        jz.corrected.second_sigma,
        jx.corrected.mean,
        jx.corrected.mean_sigma,
    );
    let xi_d2 = n * n * p * (1.0 - p) / (s * s) / jx.corrected.mean.powi(2);
    debug_assert!((xi2 - xi_c2 - xi_d2).abs() <= 1e-9 * xi2.abs().max(1.0));

    let negative_radicand = xi_c2 < 0.0;
    let xi_corrected = if negative_radicand { 0.0 } else { xi_c2.sqrt() };
    let xi_corrected_sigma_scaled =
        if xi_corrected > 0.0 { xi_raw_sigma * xi_raw / xi_corrected } else { f64::INFINITY };

    Ok(SqueezingResult {
        xi_raw,
        xi_corrected,
        xi_d: xi_d2.sqrt(),
        xi_raw_sigma,
        xi_corrected_sigma: if negative_radicand { f64::INFINITY } else { xi_corrected_sigma },
        xi_corrected_sigma_scaled,
        negative_radicand,
        jz,
        jx,
    })
}
