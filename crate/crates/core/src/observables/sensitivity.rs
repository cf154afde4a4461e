/// Effect of a relative calibration error `e` in the flip rate on a
/// corrected observable of support `n_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationSensitivity {
    /// `2 n_p δp / (1 - 2p)` with `δp = p e`.
    pub first_order: f64,
    /// `2 n_p p e`, valid for `p ≪ 1`.
    pub leading: f64,
    /// `(1 - 2p)^n_p / (1 - 2p(1 + e))^n_p - 1`: the relative change of the
    /// correction factor when the rate used is `p (1 + e)` instead of `p`.
    pub exact: f64,
}

pub fn calibration_sensitivity(support: usize, p: f64, e: f64) -> CalibrationSensitivity {
    let np = support as f64;
    let dp = p * e;
    let s = 1.0 - 2.0 * p;
    CalibrationSensitivity {
        first_order: 2.0 * np * dp / s,
        leading: 2.0 * np * p * e,
        exact: (s / (1.0 - 2.0 * (p + dp))).powi(support as i32) - 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_error_is_zero() {
        let s = calibration_sensitivity(3, 0.03, 0.0);
        assert_eq!(s.first_order, 0.0);
        assert_eq!(s.exact, 0.0);
    }

    #[test]
    fn two_qubit_example() {
        let s = calibration_sensitivity(2, 0.03, 0.1);
        assert_abs_diff_eq!(s.first_order, 0.012 / 0.94, epsilon = 1e-15);
        assert_abs_diff_eq!(s.first_order, 0.012_765_957_446_808_5, epsilon = 1e-12);
        // exact: (0.94 / 0.934)^2 - 1
        assert_abs_diff_eq!(s.exact, (0.94f64 / 0.934).powi(2) - 1.0, epsilon = 1e-15);
        assert!((s.exact / s.first_order - 1.0).abs() < 0.02);
    }

    #[test]
    fn first_order_tracks_exact_in_small_regime() {
        for np in 1..=6 {
            for &p in &[0.005, 0.01, 0.03, 0.05, 0.08] {
                for &e in &[0.01, 0.05, 0.1, 0.2, 0.3] {
                    let s = calibration_sensitivity(np, p, e);
                    if 2.0 * np as f64 * p * e < 0.1 {
                        assert!((s.first_order / s.exact - 1.0).abs() < 0.2, "np={np} p={p} e={e}: {s:?}");
                    }
                }
            }
        }
    }
}
