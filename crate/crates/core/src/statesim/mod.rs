//! Desk-scale simulator for graph-state experiments: graph states, local
//! depolarizing preparation noise, measurement in stabilizer eigenbases,
//! finite-shot sampling and detector bit flips.

mod dense;
mod experiments;
mod graph;
mod sampling;
mod statevector;

pub use dense::{DensityMatrix, MAX_DENSITY_QUBITS};
pub use experiments::{
    corrected_witness_crossing, default_grid, exact_recorded_distributions, exact_witness, stabilizer_experiment,
    witness_experiment, write_stabilizer_csv, write_witness_csv, StabilizerConfig, StabilizerRow, WitnessConfig,
    WitnessRow,
};
pub use graph::{GraphKind, GraphSpec};
pub use sampling::{
    exact_setting_distribution, sample_collective_product, sample_distribution, sample_setting,
    stabilizer_expectations_noisy, NoiseSpec, ShotPlan, MAX_SIM_QUBITS,
};
pub use statevector::{apply_pauli, graph_state, setting_probabilities};
