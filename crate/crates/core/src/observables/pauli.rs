//! Pauli strings, measurement settings and corrected diagonal observables.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::error_model::DetectorModel;
use crate::outcome::OutcomeIndex;
use crate::reconstruct::CountsRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Symplectic `(x, z)` bits; `Y` is `(1, 1)`.
    fn xz(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_xz(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// `self · other = i^k · result`; returns `(result, k mod 4)`.
    pub fn product(self, other: Pauli) -> (Pauli, u8) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (p, 0),
            (a, b) if a == b => (I, 0),
            (X, Y) => (Z, 1),
            (Y, Z) => (X, 1),
            (Z, X) => (Y, 1),
            (Y, X) => (Z, 3),
            (Z, Y) => (X, 3),
            (X, Z) => (Y, 3),
            _ => unreachable!(),
        }
    }
}

/// A tensor product of single-qubit Paulis with a real coefficient. Factor
/// `k` acts on qubit `k`; the textual form is qubit-0 leftmost.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    factors: Vec<Pauli>,
    coefficient: f64,
}

impl PauliString {
    pub fn new(factors: Vec<Pauli>) -> Self {
        PauliString { factors, coefficient: 1.0 }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![Pauli::I; n])
    }

    /// `X` on `x_qubits`, `Z` on `z_qubits` (`Y` where both).
    pub fn from_xz_support(n: usize, x_qubits: &[usize], z_qubits: &[usize]) -> Self {
        let mut x = vec![false; n];
        let mut z = vec![false; n];
        for &k in x_qubits {
            x[k] = true;
        }
        for &k in z_qubits {
            z[k] = true;
        }
        Self::new(x.into_iter().zip(z).map(|(x, z)| Pauli::from_xz(x, z)).collect())
    }

    pub fn with_coefficient(mut self, coefficient: f64) -> Self {
        self.coefficient = coefficient;
        self
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    /// Number of non-identity factors.
    pub fn support(&self) -> usize {
        self.factors.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn support_qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.factors.iter().enumerate().filter(|(_, &p)| p != Pauli::I).map(|(k, _)| k)
    }

    /// Product `self · other`, with the phase folded into the coefficient.
    /// Fails if the phase is imaginary.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: other.n() });
        }
        let mut power = 0u8;
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(&a, &b)| {
                let (p, k) = a.product(b);
                power = (power + k) % 4;
                p
            })
            .collect();
        let sign = match power {
            0 => 1.0,
            2 => -1.0,
            _ => return Err(Error::Parse(format!("product of {self} and {other} has an imaginary phase"))),
        };
        Ok(PauliString { factors, coefficient: self.coefficient * other.coefficient * sign })
    }

    /// Eigenvalue of the operator on `outcome`, measured in its own eigenbasis
    /// (bit 0 ↔ +1 for every non-identity factor), times the coefficient.
    pub fn diagonal_value(&self, outcome: OutcomeIndex) -> f64 {
        let parity = self.support_qubits().map(|k| outcome.bit(k)).sum::<u8>() & 1;
        if parity == 0 {
            self.coefficient
        } else {
            -self.coefficient
        }
    }

    fn symplectic(&self) -> impl Iterator<Item = (bool, bool)> + '_ {
        self.factors.iter().map(|p| p.xz())
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .symplectic()
            .zip(other.symplectic())
            .filter(|((x1, z1), (x2, z2))| (x1 & z2) ^ (z1 & x2))
            .count();
        anti % 2 == 0
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .trim()
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::Parse(format!("bad Pauli label `{c}` in `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        if factors.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        Ok(Self::new(factors))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficient != 1.0 {
            write!(f, "{}*", self.coefficient)?;
        }
        for p in &self.factors {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

/// Per-qubit measurement basis. Serialized as a string like `"XZZY"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MeasurementSetting(Vec<Pauli>);

impl MeasurementSetting {
    pub fn new(bases: Vec<Pauli>) -> Result<Self> {
        if bases.is_empty() || bases.contains(&Pauli::I) {
            return Err(Error::Parse("a measurement setting needs one of X, Y, Z per qubit".into()));
        }
        Ok(MeasurementSetting(bases))
    }

    pub fn computational(n: usize) -> Self {
        MeasurementSetting(vec![Pauli::Z; n])
    }

    pub fn bases(&self) -> &[Pauli] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// True if every non-identity factor of `obs` is measured in its own basis.
    pub fn measures(&self, obs: &PauliString) -> bool {
        obs.n() == self.n() && obs.factors().iter().zip(&self.0).all(|(&p, &b)| p == Pauli::I || p == b)
    }
}

impl FromStr for MeasurementSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bases = s
            .trim()
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::Parse(format!("bad basis `{c}` in setting `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(bases)
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.as_char()))
    }
}

/// Checks that a record's setting label measures `obs`.
pub fn check_setting(record: &CountsRecord, obs: &PauliString) -> Result<()> {
    let mismatch = || Error::SettingMismatch { setting: record.setting().to_string(), observable: obs.to_string() };
    if record.n() != obs.n() {
        return Err(Error::DimensionMismatch { expected: record.n(), got: obs.n() });
    }
    let setting: MeasurementSetting = record.setting().parse().map_err(|_| mismatch())?;
    if setting.measures(obs) {
        Ok(())
    } else {
        Err(mismatch())
    }
}

/// A corrected diagonal observable `Ô^c = ⊗_k diag(σ^{μ_k}) D_k⁻¹`.
///
/// Non-identity qubits contribute the row `[1 - 2p0', -(1 - 2p1')]`, identity
/// qubits contribute `[1, 1]` and are omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectedObservable {
    coefficient: f64,
    rows: Vec<(usize, [f64; 2])>,
    uniform_scale: Option<f64>,
}

impl CorrectedObservable {
    pub fn value(&self, outcome: OutcomeIndex) -> f64 {
        self.rows
            .iter()
            .fold(self.coefficient, |acc, (k, row)| acc * row[outcome.bit(*k) as usize])
    }

    /// `(1 - 2p)^(-n_p)` when every qubit in the support has `p0 = p1 = p`.
    pub fn uniform_scale(&self) -> Option<f64> {
        self.uniform_scale
    }

    pub fn support(&self) -> usize {
        self.rows.len()
    }
}

/// Builds `Ô^c` for `obs` under `model`.
pub fn correction_factor(obs: &PauliString, model: &DetectorModel) -> Result<CorrectedObservable> {
    if obs.n() != model.n() {
        return Err(Error::DimensionMismatch { expected: model.n(), got: obs.n() });
    }
    let mut rows = Vec::with_capacity(obs.support());
    let mut symmetric = true;
    let mut scale = 1.0;
    for k in obs.support_qubits() {
        let rates = model.qubit(k)?;
        let (q0, q1) = rates.inverse_rates(k)?;
        if rates.p0 == rates.p1 {
            scale /= 1.0 - 2.0 * rates.p0;
        } else {
            symmetric = false;
        }
        rows.push((k, [1.0 - 2.0 * q0, -(1.0 - 2.0 * q1)]));
    }
    Ok(CorrectedObservable { coefficient: obs.coefficient(), rows, uniform_scale: symmetric.then_some(scale) })
}

/// An expectation value with its one-sigma statistical error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation {
    pub value: f64,
    pub sigma: f64,
}

/// Mean and standard error of a per-outcome quantity over the shots of a
/// record.
pub fn shot_mean(record: &CountsRecord, value: impl Fn(OutcomeIndex) -> f64) -> Result<Expectation> {
    let n = record.require_shots()?;
    let (mut s1, mut s2) = (0.0, 0.0);
    for (&outcome, &c) in record.counts() {
        let v = value(outcome);
        s1 += c as f64 * v;
        s2 += c as f64 * v * v;
    }
    let mean = s1 / n;
    let var = (s2 / n - mean * mean).max(0.0);
    Ok(Expectation { value: mean, sigma: (var / n).sqrt() })
}

/// `⟨Ô⟩` from uncorrected frequencies.
pub fn expect_raw(record: &CountsRecord, obs: &PauliString) -> Result<Expectation> {
    check_setting(record, obs)?;
    shot_mean(record, |o| obs.diagonal_value(o))
}

/// `⟨Ô⟩ = Σ_j Ô^c_j f_j`.
pub fn expect_corrected(record: &CountsRecord, obs: &PauliString, model: &DetectorModel) -> Result<Expectation> {
    check_setting(record, obs)?;
    let corrected = correction_factor(obs, model)?;
    shot_mean(record, |o| corrected.value(o))
}

/// `Σ_j Ô^c_j f_j` for a dense (exact) recorded distribution.
pub fn expect_exact(f: &[f64], obs: &PauliString, model: &DetectorModel) -> Result<f64> {
    if f.len() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), got: f.len() });
    }
    let corrected = correction_factor(obs, model)?;
    Ok(f.iter().enumerate().map(|(j, &x)| x * corrected.value(OutcomeIndex(j))).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::collections::BTreeMap;

    fn record(n: usize, setting: &str, entries: &[(usize, u64)]) -> CountsRecord {
        CountsRecord::new(n, setting, entries.iter().map(|&(i, c)| (OutcomeIndex(i), c)).collect()).unwrap()
    }

    #[test]
    fn parse_and_support() {
        let p: PauliString = "XZIIZ".parse().unwrap();
        assert_eq!(p.support(), 3);
        assert_eq!(p.support_qubits().collect::<Vec<_>>(), vec![0, 1, 4]);
        assert_eq!(p.to_string(), "XZIIZ");
        assert!("XQ".parse::<PauliString>().is_err());
        assert_eq!(PauliString::identity(4).support(), 0);
    }

    #[test]
    fn pauli_products() {
        let a: PauliString = "XZ".parse().unwrap();
        let b: PauliString = "ZX".parse().unwrap();
        // XZ · ZX = (XZ)⊗(ZX) = (-iY)⊗(iY) = YY
        let c = a.mul(&b).unwrap();
        assert_eq!(c.to_string(), "YY");
        assert_eq!(c.coefficient(), 1.0);
        assert!(a.commutes_with(&b));
        let x: PauliString = "X".parse().unwrap();
        let z: PauliString = "Z".parse().unwrap();
        assert!(x.mul(&z).is_err());
        assert!(!x.commutes_with(&z));
        let yy: PauliString = "YZ".parse().unwrap();
        let zz: PauliString = "ZY".parse().unwrap();
        assert_eq!(yy.mul(&zz).unwrap().coefficient(), 1.0);
        let xx: PauliString = "XX".parse().unwrap();
        let yy: PauliString = "YY".parse().unwrap();
        let p = xx.mul(&yy).unwrap();
        assert_eq!(p.to_string(), "-1*ZZ");
    }

    #[test]
    fn setting_matching() {
        let s: MeasurementSetting = "XZZ".parse().unwrap();
        assert!(s.measures(&"XIZ".parse().unwrap()));
        assert!(!s.measures(&"ZIZ".parse().unwrap()));
        assert!("XIZ".parse::<MeasurementSetting>().is_err());
        let r = record(3, "ZZZ", &[(0, 10)]);
        assert!(matches!(expect_raw(&r, &"XII".parse().unwrap()), Err(Error::SettingMismatch { .. })));
    }

    #[test]
    fn raw_expectation_examples() {
        let r = record(3, "ZZZ", &[(0, 100)]);
        let e = expect_raw(&r, &"ZZZ".parse().unwrap()).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.sigma, 0.0);

        let r = record(2, "ZZ", &[(0, 250), (1, 250), (2, 250), (3, 250)]);
        for obs in ["ZI", "IZ", "ZZ"] {
            let e = expect_raw(&r, &obs.parse().unwrap()).unwrap();
            assert_eq!(e.value, 0.0);
            assert_abs_diff_eq!(e.sigma, (1.0f64 / 1000.0).sqrt(), epsilon = 1e-15);
        }
    }

    #[test]
    fn correction_factor_values() {
        let ideal = DetectorModel::ideal(4);
        let c = correction_factor(&"ZZII".parse().unwrap(), &ideal).unwrap();
        assert_eq!(c.uniform_scale(), Some(1.0));

        let m = DetectorModel::uniform(10, 0.03, 0.03).unwrap();
        let c2 = correction_factor(&"XZIIIIIIII".parse().unwrap(), &m).unwrap();
        assert_abs_diff_eq!(c2.uniform_scale().unwrap(), 1.131_733_816_206_428_3, epsilon = 1e-12);
        assert_abs_diff_eq!(c2.uniform_scale().unwrap(), 0.94f64.powi(-2), epsilon = 1e-14);
        let c10 = correction_factor(&"XZZZZZZZZZ".parse().unwrap(), &m).unwrap();
        assert_abs_diff_eq!(c10.uniform_scale().unwrap(), 0.94f64.powi(-10), epsilon = 1e-13);
        assert_abs_diff_eq!(c10.uniform_scale().unwrap(), 1.856_613_328_945_33, epsilon = 1e-12);
        // per-outcome values reduce to ±scale
        assert_abs_diff_eq!(c2.value(OutcomeIndex(0)), c2.uniform_scale().unwrap(), epsilon = 1e-14);
        assert_abs_diff_eq!(c2.value(OutcomeIndex(1)), -c2.uniform_scale().unwrap(), epsilon = 1e-14);
        assert_abs_diff_eq!(c2.value(OutcomeIndex(3)), c2.uniform_scale().unwrap(), epsilon = 1e-14);

        let asym = DetectorModel::uniform(2, 0.1, 0.2).unwrap();
        assert_eq!(correction_factor(&"ZI".parse().unwrap(), &asym).unwrap().uniform_scale(), None);
        let singular = DetectorModel::uniform(2, 0.5, 0.5).unwrap();
        assert!(matches!(correction_factor(&"ZI".parse().unwrap(), &singular), Err(Error::SingularModel { .. })));
        // identity observable never touches the model
        let c0 = correction_factor(&"II".parse().unwrap(), &singular).unwrap();
        assert_eq!(c0.value(OutcomeIndex(3)), 1.0);
    }

    #[test]
    fn asymmetric_single_qubit_correction() {
        // |0> read through p0 = 0.1, p1 = 0.2 gives f = (0.9, 0.1)
        let m = DetectorModel::uniform(1, 0.1, 0.2).unwrap();
        let mut counts = BTreeMap::new();
        counts.insert(OutcomeIndex(0), 9000);
        counts.insert(OutcomeIndex(1), 1000);
        let r = CountsRecord::new(1, "Z", counts).unwrap();
        let e = expect_corrected(&r, &"Z".parse().unwrap(), &m).unwrap();
        assert_abs_diff_eq!(e.value, 1.0, epsilon = 1e-12);
        let raw = expect_raw(&r, &"Z".parse().unwrap()).unwrap();
        assert_abs_diff_eq!(raw.value, 0.8, epsilon = 1e-12);
    }

    #[test]
    fn perfect_detector_corrected_equals_raw() {
        let r = record(3, "XZY", &[(0, 31), (5, 12), (6, 40), (7, 17)]);
        let obs: PauliString = "XIY".parse().unwrap();
        let raw = expect_raw(&r, &obs).unwrap();
        let cor = expect_corrected(&r, &obs, &DetectorModel::ideal(3)).unwrap();
        assert_eq!(raw, cor);
    }
}
