// Copyright 2026 The rcs-verify Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Batch run configuration, read from TOML or JSON.
//!
//! ```toml
//! schema_version = 1
//! metrics = ["heatmap", "spectrum", "wdist"]
//!
//! [[inputs]]
//! kind = "uniform"
//! n = 53
//! m = 1000000
//!
//! [[inputs]]
//! kind = "file"
//! path = "measurement-n53-m20-s0-e0-pABCDCDAB.txt"
//!
//! [params]
//! k = 106
//! estimator = "median"
//! ```

use std::path::{Path, PathBuf};

use rcs_core::{CircuitSpec, OutlierEstimator};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub inputs: Vec<InputSpec>,
    #[serde(default = "Metric::defaults")]
    pub metrics: Vec<Metric>,
    #[serde(default)]
    pub params: Params,
    /// Ideal distribution for XEB. Circuit inputs fall back to their own circuit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<IdealSpec>,
}

/// One sample to analyse. Synthetic inputs without a seed take the global seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InputSpec {
    File {
        path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    Uniform {
        n: usize,
        m: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Spoof {
        n: usize,
        m: usize,
        prefix: usize,
        #[serde(default)]
        value: u8,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    /// Bit strings drawn from a simulated circuit.
    Circuit {
        circuit: CircuitSpec,
        m: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

impl InputSpec {
    pub fn label(&self) -> String {
        match self {
            InputSpec::File { path, label, .. } => label.clone().unwrap_or_else(|| {
                path.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string())
            }),
            InputSpec::Uniform { n, m, seed, label } => label
                .clone()
                .unwrap_or_else(|| format!("uniform-n{n}-M{m}-seed{}", seed.unwrap_or(0))),
            InputSpec::Spoof {
                n,
                m,
                prefix,
                value,
                seed,
                label,
            } => label
                .clone()
                .unwrap_or_else(|| format!("spoof-n{n}-M{m}-seed{}-prefix{prefix}x{value}", seed.unwrap_or(0))),
            InputSpec::Circuit { circuit, m, seed, label } => label.clone().unwrap_or_else(|| {
                format!(
                    "circuit-n{}-m{}-s{}-M{m}-seed{}",
                    circuit.n_qubits,
                    circuit.m_cycles,
                    circuit.seed,
                    seed.unwrap_or(0)
                )
            }),
        }
    }

    fn fill_seed(&mut self, global: u64) {
        match self {
            InputSpec::Uniform { seed, .. } | InputSpec::Spoof { seed, .. } | InputSpec::Circuit { seed, .. } => {
                seed.get_or_insert(global);
            }
            InputSpec::File { .. } => {}
        }
    }

    fn resolve_path(&mut self, base: &Path) {
        if let InputSpec::File { path, .. } = self {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Xeb,
    Nist,
    Heatmap,
    Spectrum,
    Wdist,
}

impl Metric {
    pub const ALL: [Metric; 5] = [Metric::Xeb, Metric::Nist, Metric::Heatmap, Metric::Spectrum, Metric::Wdist];

    fn defaults() -> Vec<Metric> {
        vec![Metric::Nist, Metric::Heatmap, Metric::Spectrum, Metric::Wdist]
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Xeb => "xeb",
            Metric::Nist => "nist",
            Metric::Heatmap => "heatmap",
            Metric::Spectrum => "spectrum",
            Metric::Wdist => "wdist",
        }
    }
}

/// Every tunable; all of them are echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Params {
    /// Slice height for the spectrum; `None` means `2n` per input.
    pub k: Option<usize>,
    pub estimator: OutlierEstimator,
    pub nist_alpha: f64,
    /// Order of the Wasserstein distance.
    pub wasserstein_alpha: f64,
    /// Label of the input every other input is compared with; all pairs when unset.
    pub reference: Option<String>,
    /// Keep only the first records of every input.
    pub max_records: Option<usize>,
    /// Bytes a single file may occupy in memory before it is streamed.
    pub memory_budget: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            k: None,
            estimator: OutlierEstimator::Median,
            nist_alpha: rcs_core::nist::DEFAULT_ALPHA,
            wasserstein_alpha: 1.0,
            reference: None,
            max_records: None,
            memory_budget: rcs_core::samples::DEFAULT_MEMORY_BUDGET,
        }
    }
}

// Serde fills missing params field by field.
impl<'de> Deserialize<'de> for Params {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Partial {
            k: Option<usize>,
            estimator: Option<OutlierEstimator>,
            nist_alpha: Option<f64>,
            wasserstein_alpha: Option<f64>,
            reference: Option<String>,
            max_records: Option<usize>,
            memory_budget: Option<usize>,
        }
        let p = Partial::deserialize(d)?;
        let base = Params::default();
        Ok(Params {
            k: p.k,
            estimator: p.estimator.unwrap_or(base.estimator),
            nist_alpha: p.nist_alpha.unwrap_or(base.nist_alpha),
            wasserstein_alpha: p.wasserstein_alpha.unwrap_or(base.wasserstein_alpha),
            reference: p.reference,
            max_records: p.max_records,
            memory_budget: p.memory_budget.unwrap_or(base.memory_budget),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum IdealSpec {
    /// Binary or CSV probability table written by `simulate`.
    ProbFile { path: PathBuf },
    Circuit { circuit: CircuitSpec },
}

impl RunConfig {
    /// Parse by extension: `.json` is JSON, anything else TOML.
    pub fn load(path: impl AsRef<Path>) -> Result<RunConfig> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut config = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            serde_json::from_str::<RunConfig>(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str::<RunConfig>(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        };
        if let Some(base) = path.parent() {
            for input in &mut config.inputs {
                input.resolve_path(base);
            }
            if let Some(IdealSpec::ProbFile { path: p }) = &mut config.ideal {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(config)
    }

    /// Fill unset seeds and check the schema-level constraints.
    pub fn resolve(mut self, global_seed: u64) -> Result<RunConfig> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.inputs.is_empty() {
            return Err(CliError::Config("no inputs".into()));
        }
        if self.metrics.is_empty() {
            return Err(CliError::Config("no metrics requested".into()));
        }
        self.metrics.sort();
        self.metrics.dedup();
        let p = &self.params;
        if p.k == Some(0) {
            return Err(CliError::Config("params.k must be positive".into()));
        }
        if !(p.nist_alpha > 0.0 && p.nist_alpha < 1.0) {
            return Err(CliError::Config(format!("params.nist_alpha = {} outside (0, 1)", p.nist_alpha)));
        }
        if p.wasserstein_alpha.is_nan() || p.wasserstein_alpha < 1.0 {
            return Err(CliError::Config(format!(
                "params.wasserstein_alpha = {} must be >= 1",
                p.wasserstein_alpha
            )));
        }
        if self.metrics.contains(&Metric::Xeb)
            && self.ideal.is_none()
            && !self.inputs.iter().any(|i| matches!(i, InputSpec::Circuit { .. }))
        {
            return Err(CliError::Config(
                "xeb needs an ideal distribution: set [ideal] or add a circuit input".into(),
            ));
        }
        for input in &mut self.inputs {
            input.fill_seed(global_seed);
        }
        let mut labels: Vec<String> = self.inputs.iter().map(InputSpec::label).collect();
        if let Some(r) = &self.params.reference {
            if !labels.contains(r) {
                return Err(CliError::Config(format!("reference {r:?} is not an input label")));
            }
        }
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(CliError::Config("input labels must be unique".into()));
        }
        Ok(self)
    }
}
