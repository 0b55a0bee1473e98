// Copyright 2026 The qwalk Contributors
// SPDX-License-Identifier: Apache-2.0

//! JSON report formats. Complex numbers are `[re, im]` pairs; angles are
//! radians. Readers ignore fields they do not know.

use std::fs;
use std::path::Path;

use anyhow::Context;
use num_complex::Complex64;
use qwalk::measurement::{FidelityEstimate, MeasurementCounts};
use qwalk::optimizer::{EngineeringResult, OptimizerConfig};
use qwalk::photonic::CircuitElement;
use qwalk::{CoinKet, CoinParams, Lattice};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
pub const FIDELITY_THRESHOLD: f64 = 0.999;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    /// RFC 3339, UTC.
    pub timestamp: String,
    pub master_seed: u64,
    /// Target spec as text.
    pub target: String,
    pub lattice: Lattice,
    pub target_amplitudes: Vec<Complex64>,
    pub optimizer: OptimizerConfig,
    pub result: EngineeringResult,
    /// Projected walker state of the best coin sequence.
    pub output_amplitudes: Vec<Complex64>,
    /// `P_i` of the output state in the Gram-Schmidt basis built on the
    /// target; `P_0` is the fidelity.
    pub basis_probabilities: Vec<f64>,
    pub optics: Option<OpticsReport>,
    pub measurement: Option<MeasurementReport>,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticsReport {
    pub elements: Vec<CircuitElement>,
    pub projection: CoinKet,
    /// Fidelity between the physically simulated and the ideal output.
    pub fidelity_to_ideal: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementReport {
    pub shots: u64,
    pub seed: u64,
    pub resamples: usize,
    pub counts: MeasurementCounts,
    pub estimate: FidelityEstimate,
}

/// Output of `qwalk simulate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub timestamp: String,
    pub coins: Vec<CoinParams>,
    pub projection: CoinKet,
    pub physical: bool,
    pub lattice: Lattice,
    pub amplitudes: Vec<Complex64>,
    pub probability: f64,
    pub target: Option<String>,
    pub fidelity: Option<f64>,
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    crate::output::ensure_parent(path)?;
    fs::write(path, to_json(value)?).with_context(|| format!("writing {}", path.display()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
