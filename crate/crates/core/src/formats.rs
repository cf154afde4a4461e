//! JSON file formats.
//!
//! * counts: `{"n": 3, "setting": "ZZZ", "counts": {"011": 12, …}}`, bitstrings
//!   qubit-0 leftmost
//! * collective counts: `[c_0, c_1, …, c_n]`
//! * detector model: `{"schema_version": 1, "qubits": [{"p0": …, "p1": …,
//!   "p0_sigma": …, "p1_sigma": …}, …]}` (sigmas optional)
//! * distribution: `{"schema_version": 1, "values": […], "sigmas": […],
//!   "shots": N, "clamped": […]}`

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::collective::CollectiveCounts;
use crate::error::{Error, Result};
use crate::error_model::{CalibratedModel, DetectorModel, QubitRates};
use crate::outcome::OutcomeIndex;
use crate::reconstruct::{CountsRecord, Distribution};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsFile {
    pub n: usize,
    pub setting: String,
    pub counts: BTreeMap<String, u64>,
}

impl CountsFile {
    pub fn to_record(&self) -> Result<CountsRecord> {
        let mut counts = BTreeMap::new();
        for (bits, &c) in &self.counts {
            let (idx, len) = OutcomeIndex::parse(bits)?;
            if len != self.n {
                return Err(Error::Parse(format!("bitstring `{bits}` has length {len}, expected {}", self.n)));
            }
            *counts.entry(idx).or_insert(0) += c;
        }
        CountsRecord::new(self.n, self.setting.clone(), counts)
    }

    pub fn from_record(record: &CountsRecord) -> Self {
        CountsFile {
            n: record.n(),
            setting: record.setting().to_string(),
            counts: record.counts().iter().map(|(o, &c)| (o.to_bitstring(record.n()), c)).collect(),
        }
    }
}

pub fn parse_counts(json: &str) -> Result<CountsRecord> {
    let file: CountsFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_record()
}

pub fn parse_collective_counts(json: &str) -> Result<CollectiveCounts> {
    let counts: Vec<u64> = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    CollectiveCounts::new(counts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitEntry {
    pub p0: f64,
    pub p1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1_sigma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u32,
    pub qubits: Vec<QubitEntry>,
}

impl ModelFile {
    pub fn from_model(model: &DetectorModel) -> Self {
        ModelFile {
            schema_version: SCHEMA_VERSION,
            qubits: model
                .rates()
                .iter()
                .map(|r| QubitEntry { p0: r.p0, p1: r.p1, p0_sigma: None, p1_sigma: None })
                .collect(),
        }
    }

    pub fn from_calibration(cal: &CalibratedModel) -> Self {
        let mut file = Self::from_model(&cal.model);
        for (k, q) in file.qubits.iter_mut().enumerate() {
            q.p0_sigma = Some(cal.p0_sigma[k]);
            q.p1_sigma = Some(cal.p1_sigma[k]);
        }
        file
    }

    pub fn to_model(&self) -> Result<DetectorModel> {
        DetectorModel::new(self.qubits.iter().map(|q| QubitRates::new(q.p0, q.p1)).collect::<Result<_>>()?)
    }
}

pub fn parse_model(json: &str) -> Result<DetectorModel> {
    let file: ModelFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_model()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionFile {
    pub schema_version: u32,
    pub values: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub shots: u64,
    #[serde(default)]
    pub clamped: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_number: Option<f64>,
}

impl From<&Distribution> for DistributionFile {
    fn from(d: &Distribution) -> Self {
        DistributionFile {
            schema_version: SCHEMA_VERSION,
            values: d.values.clone(),
            sigmas: d.sigmas.clone(),
            shots: d.shots,
            clamped: d.clamped.clone(),
            condition_number: None,
        }
    }
}
