use num_complex::Complex64;

use crate::observables::{MeasurementSetting, Pauli, PauliString};
use crate::statesim::GraphSpec;

/// `|G⟩ = ∏_{(a,b) ∈ E} CZ_ab |+⟩^⊗n`, amplitudes `2^{-n/2} (-1)^{Σ_E x_a x_b}`.
pub fn graph_state(graph: &GraphSpec) -> Vec<Complex64> {
    let n = graph.n();
    let amp = (0.5f64).powf(n as f64 / 2.0);
    (0..1usize << n)
        .map(|x| {
            let parity = graph.edges().iter().filter(|&&(a, b)| (x >> a) & (x >> b) & 1 == 1).count();
            Complex64::new(if parity % 2 == 0 { amp } else { -amp }, 0.0)
        })
        .collect()
}

/// `P|c⟩ = phase(c) |c ⊕ mask⟩` for one qubit factor.
pub(crate) fn pauli_action(p: Pauli, bit: u8) -> (bool, Complex64) {
    let i = Complex64::i();
    match (p, bit) {
        (Pauli::I, _) => (false, Complex64::new(1.0, 0.0)),
        (Pauli::X, _) => (true, Complex64::new(1.0, 0.0)),
        (Pauli::Z, 0) => (false, Complex64::new(1.0, 0.0)),
        (Pauli::Z, _) => (false, Complex64::new(-1.0, 0.0)),
        (Pauli::Y, 0) => (true, i),
        (Pauli::Y, _) => (true, -i),
    }
}

/// Phase and flip mask of a Pauli string acting on basis state `c`.
pub(crate) fn string_action(p: &PauliString, c: usize) -> (usize, Complex64) {
    let mut mask = 0usize;
    let mut phase = Complex64::new(p.coefficient(), 0.0);
    for (k, &f) in p.factors().iter().enumerate() {
        let (flip, ph) = pauli_action(f, ((c >> k) & 1) as u8);
        if flip {
            mask |= 1 << k;
        }
        phase *= ph;
    }
    (mask, phase)
}

pub fn apply_pauli(state: &[Complex64], p: &PauliString) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
    for (c, &a) in state.iter().enumerate() {
        let (mask, phase) = string_action(p, c);
        out[c ^ mask] += phase * a;
    }
    out
}

/// Single-qubit unitary taking the `+1` eigenstate of `basis` to `|0⟩`.
pub(crate) fn basis_rotation(basis: Pauli) -> [[Complex64; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match basis {
        Pauli::I | Pauli::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        Pauli::X => [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
        // H · S†
        Pauli::Y => [[c(h, 0.0), c(0.0, -h)], [c(h, 0.0), c(0.0, h)]],
    }
}

pub(crate) fn apply_single_qubit(state: &mut [Complex64], k: usize, u: &[[Complex64; 2]; 2]) {
    let stride = 1usize << k;
    for block in state.chunks_exact_mut(stride << 1) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x0, x1) = (*a, *b);
            *a = u[0][0] * x0 + u[0][1] * x1;
            *b = u[1][0] * x0 + u[1][1] * x1;
        }
    }
}

/// Outcome probabilities of measuring `state` in `setting`.
pub fn setting_probabilities(state: &[Complex64], setting: &MeasurementSetting) -> Vec<f64> {
    let mut psi = state.to_vec();
    for (k, &b) in setting.bases().iter().enumerate() {
        if b != Pauli::Z {
            apply_single_qubit(&mut psi, k, &basis_rotation(b));
        }
    }
    psi.iter().map(|a| a.norm_sqr()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statesim::GraphKind;

    #[test]
    fn graph_state_is_stabilized() {
        for kind in [GraphKind::Ghz, GraphKind::LinearCluster] {
            for n in 2..=8 {
                let g = GraphSpec::build(kind, n).unwrap();
                let psi = graph_state(&g);
                for s in g.stabilizers() {
                    let out = apply_pauli(&psi, &s);
                    for (a, b) in out.iter().zip(&psi) {
                        assert!((a - b).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn y_basis_rotation() {
        // |+i> = (|0> + i|1>)/√2 must map to |0>
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = vec![Complex64::new(h, 0.0), Complex64::new(0.0, h)];
        apply_single_qubit(&mut psi, 0, &basis_rotation(Pauli::Y));
        assert!((psi[0].norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn class_setting_outcomes_respect_stabilizers() {
        let g = GraphSpec::build(GraphKind::Ghz, 5).unwrap();
        let psi = graph_state(&g);
        for class in g.color_classes() {
            let setting = g.class_setting(&class);
            let probs = setting_probabilities(&psi, &setting);
            assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (j, &pr) in probs.iter().enumerate() {
                if pr > 1e-12 {
                    for &k in &class {
                        assert_eq!(g.stabilizer(k).diagonal_value(j.into()), 1.0);
                    }
                }
            }
        }
    }
}
