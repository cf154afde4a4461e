//! Dense density matrices, for cross-checking the sampling pipeline on small
//! registers.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::observables::{MeasurementSetting, Pauli, PauliString};
use crate::statesim::statevector::{apply_single_qubit, basis_rotation, string_action};

/// `4^n` complex entries; 11 qubits is 64 MiB.
pub const MAX_DENSITY_QUBITS: usize = 11;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    /// Row-major `2^n × 2^n`.
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &[Complex64]) -> Result<Self> {
        let dim = state.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::DimensionMismatch { expected: dim.next_power_of_two(), got: dim });
        }
        let n = dim.trailing_zeros() as usize;
        if n > MAX_DENSITY_QUBITS {
            return Err(Error::ResourceLimit { what: "dense density matrix", n, limit: MAX_DENSITY_QUBITS });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for a in state {
            for b in state {
                data.push(a * b.conj());
            }
        }
        Ok(DensityMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.data[a * self.dim() + b]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|a| self.get(a, a)).sum()
    }

    /// `P ρ P†`.
    fn conjugate_by(&self, p: &PauliString) -> Vec<Complex64> {
        let dim = self.dim();
        let actions: Vec<(usize, Complex64)> = (0..dim).map(|c| string_action(p, c)).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        // P|c⟩ = ph(c)|c⊕m⟩, so (PρP†)[c⊕m, d⊕m] = ph(c) conj(ph(d)) ρ[c, d]
        for c in 0..dim {
            let (m, pc) = actions[c];
            for d in 0..dim {
                let (_, pd) = actions[d];
                out[(c ^ m) * dim + (d ^ m)] = pc * pd.conj() * self.data[c * dim + d];
            }
        }
        out
    }

    /// Single-qubit depolarizing channel on `qubit`:
    /// `(1 - 3p/4) ρ + (p/4) Σ_{μ ∈ x,y,z} σ^μ ρ σ^μ`.
    pub fn depolarize(&mut self, qubit: usize, p: f64) {
        let mut acc: Vec<Complex64> = self.data.iter().map(|&x| x * (1.0 - 0.75 * p)).collect();
        for pauli in [Pauli::X, Pauli::Y, Pauli::Z] {
            let mut factors = vec![Pauli::I; self.n];
            factors[qubit] = pauli;
            let conj = self.conjugate_by(&PauliString::new(factors));
            for (a, c) in acc.iter_mut().zip(conj) {
                *a += c * (0.25 * p);
            }
        }
        self.data = acc;
    }

    pub fn depolarize_all(&mut self, p: f64) {
        for k in 0..self.n {
            self.depolarize(k, p);
        }
    }

    /// `tr(ρ P)`; real for Hermitian `P`.
    pub fn expectation(&self, p: &PauliString) -> f64 {
        // tr(ρP) = Σ_c ⟨c|ρP|c⟩ = Σ_c ph(c) ρ[c, c⊕m]
        (0..self.dim())
            .map(|c| {
                let (m, ph) = string_action(p, c);
                ph * self.get(c, c ^ m)
            })
            .sum::<Complex64>()
            .re
    }

    /// Diagonal of `U ρ U†` for the rotation into `setting`.
    pub fn setting_probabilities(&self, setting: &MeasurementSetting) -> Vec<f64> {
        let dim = self.dim();
        let mut rho = self.data.clone();
        for (k, &b) in setting.bases().iter().enumerate() {
            if b == Pauli::Z {
                continue;
            }
            let u = basis_rotation(b);
            // columns: ρ → U ρ, acting on each column vector
            for col in 0..dim {
                let mut v: Vec<Complex64> = (0..dim).map(|r| rho[r * dim + col]).collect();
                apply_single_qubit(&mut v, k, &u);
                for (r, x) in v.into_iter().enumerate() {
                    rho[r * dim + col] = x;
                }
            }
            // rows: ρ → ρ U†, i.e. each row r becomes conj(U conj(row))
            for row in rho.chunks_exact_mut(dim) {
                let mut v: Vec<Complex64> = row.iter().map(|x| x.conj()).collect();
                apply_single_qubit(&mut v, k, &u);
                for (r, x) in row.iter_mut().zip(v) {
                    *r = x.conj();
                }
            }
        }
        (0..dim).map(|a| rho[a * dim + a].re).collect()
    }
}
