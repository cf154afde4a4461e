//! Detection-error mitigation for multi-qubit measurements.
//!
//! Detector bit flips distort measured outcome statistics by a known
//! stochastic map. Once the per-qubit flip rates are calibrated, this crate
//! inverts that map, either on whole distributions ([`reconstruct`],
//! [`collective`]) or folded into the observables of interest
//! ([`observables`]), and provides a small simulator ([`statesim`]) for
//! graph-state experiments.
//!
//! Bit convention: qubit `k` is bit `k` of an [`OutcomeIndex`]; bitstrings
//! are written qubit-0 leftmost.

pub mod collective;
pub mod error;
pub mod error_model;
pub mod formats;
pub mod observables;
pub mod outcome;
pub mod reconstruct;
pub mod statesim;

pub use collective::{build_inverse_response, build_response, unfold_collective, CollectiveCounts, CollectiveResponse};
pub use error::{Error, Result};
pub use error_model::{calibrate, CalibratedModel, CalibrationRun, DetectorModel, QubitRates, EPS_SINGULAR};
pub use observables::{expect_corrected, expect_raw, PauliString};
pub use outcome::OutcomeIndex;
pub use reconstruct::{correct, frequencies, CountsRecord, Distribution};
pub use statesim::{GraphKind, GraphSpec, NoiseSpec, ShotPlan};
