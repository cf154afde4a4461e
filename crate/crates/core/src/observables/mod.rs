//! Corrected expectation values of diagonal observables.
//!
//! Measuring a Pauli string in its eigenbasis gives a ±1 value per outcome.
//! Folding the inverse error map into the observable yields a corrected
//! observable `Ô^c` whose average over the *distorted* frequencies equals the
//! true expectation, without reconstructing the full distribution.

mod bootstrap;
mod pauli;
mod sensitivity;
mod spin;
mod witness;

pub use bootstrap::{bootstrap_sigma, DEFAULT_RESAMPLES};
pub use pauli::{
    check_setting, correction_factor, expect_corrected, expect_exact, expect_raw, shot_mean, CorrectedObservable, Expectation,
    MeasurementSetting, Pauli, PauliString,
};
pub use sensitivity::{calibration_sensitivity, CalibrationSensitivity};
pub use spin::{
    jz_moments_corrected, spin_moments, squeezing_corrected, CorrectedMoments, SpinCounts, SpinMoments,
    SqueezingInput, SqueezingResult, MEAN_SPIN_TOLERANCE,
};
pub use witness::{
    class_projectors, combine_classes, witness_exact, witness_value, ClassProjector, WitnessResult, MAX_CLASS_SIZE,
};
