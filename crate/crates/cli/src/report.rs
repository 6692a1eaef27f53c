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

//! Consolidated report and its JSON / text renderings.

use std::fmt::Write as _;
use std::io::Write;

use rcs_core::descriptor::DatasetDescriptor;
use rcs_core::{OutlierEstimator, Source, TestOutcome, XebResult};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub schema_version: u32,
    pub tool_version: String,
    /// Seconds since the Unix epoch; omitted with `--no-timestamp`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
    pub config: RunConfig,
    pub inputs: Vec<InputReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wasserstein: Option<WassersteinMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputReport {
    pub label: String,
    /// File path or generator description.
    pub origin: String,
    pub source: Source,
    /// SHA-256 of the file bytes, or of the text rendering for generated samples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<DatasetDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xeb: Option<XebEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nist: Option<Vec<TestOutcome>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heatmap_summary: Option<HeatmapSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum_summary: Option<SpectrumSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<MetricError>,
}

impl InputReport {
    pub fn new(label: String, origin: String, source: Source) -> Self {
        InputReport {
            label,
            origin,
            source,
            sha256: None,
            n: None,
            m: None,
            descriptor: None,
            xeb: None,
            nist: None,
            heatmap_summary: None,
            spectrum_summary: None,
            errors: Vec::new(),
        }
    }

    pub fn error(&mut self, metric: &str, message: impl ToString) {
        self.errors.push(MetricError {
            metric: metric.to_string(),
            message: message.to_string(),
        });
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricError {
    pub metric: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XebEntry {
    /// Where the ideal probabilities came from.
    pub ideal: String,
    #[serde(flatten)]
    pub result: XebResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapSummary {
    pub p1: f64,
    pub max_column_bias: f64,
    pub slices: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub k: usize,
    pub slices: usize,
    pub estimator: OutlierEstimator,
    pub outlier_peak: f64,
    pub mp_distance: f64,
    pub gamma: f64,
    /// KS distance of the bulk from the fitted law; absent when the fit is rejected.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks_bulk: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_support_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WassersteinMatrix {
    pub alpha: f64,
    pub normalization: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    pub entries: Vec<WassersteinEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WassersteinEntry {
    pub a: String,
    pub b: String,
    pub distance: f64,
    #[serde(rename = "M_used")]
    pub m_used: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated_from: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

pub fn emit_report(report: &MetricReport, format: Format, out: &mut dyn Write) -> Result<()> {
    let io = |source| CliError::Io {
        path: "<output>".into(),
        source,
    };
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out).map_err(io)
        }
        Format::Text => out.write_all(render_text(report).as_bytes()).map_err(io),
    }
}

fn fmt(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e4) {
        format!("{v:.4e}")
    } else {
        format!("{v:.5}")
    }
}

/// One row per input per metric.
pub fn render_text(report: &MetricReport) -> String {
    let mut rows: Vec<[String; 3]> = Vec::new();
    for input in &report.inputs {
        let l = &input.label;
        if let Some(x) = &input.xeb {
            rows.push([l.clone(), "xeb".into(), format!("F = {} +/- {}", fmt(x.result.fidelity), fmt(x.result.std_error))]);
        }
        if let Some(tests) = &input.nist {
            let ran: Vec<_> = tests.iter().filter(|t| !t.is_skipped()).collect();
            let passed = ran.iter().filter(|t| t.passed).count();
            let failed: Vec<&str> = ran.iter().filter(|t| !t.passed).map(|t| t.test_name.as_str()).collect();
            let mut cell = format!("{passed}/{} passed", ran.len());
            if !failed.is_empty() {
                let _ = write!(cell, " (failed: {})", failed.join(", "));
            }
            rows.push([l.clone(), "nist".into(), cell]);
        }
        if let Some(h) = &input.heatmap_summary {
            rows.push([
                l.clone(),
                "heatmap".into(),
                format!("p1 = {}, max column bias = {}", fmt(h.p1), fmt(h.max_column_bias)),
            ]);
        }
        if let Some(s) = &input.spectrum_summary {
            let mut cell = format!("peak = {}, mp_distance = {}", fmt(s.outlier_peak), fmt(s.mp_distance));
            if let Some(ks) = s.ks_bulk {
                let _ = write!(cell, ", ks_bulk = {}", fmt(ks));
            }
            rows.push([l.clone(), "spectrum".into(), cell]);
        }
        for e in &input.errors {
            rows.push([l.clone(), e.metric.clone(), format!("error: {}", e.message)]);
        }
    }
    if let Some(w) = &report.wasserstein {
        for e in &w.entries {
            rows.push([format!("{} | {}", e.a, e.b), "wdist".into(), format!("W{} = {}", w.alpha, fmt(e.distance))]);
        }
    }
    let width = |i: usize| rows.iter().map(|r| r[i].len()).max().unwrap_or(0);
    let (w0, w1) = (width(0).max(5), width(1).max(6));
    let mut out = format!("{:w0$}  {:w1$}  value\n", "input", "metric");
    for r in &rows {
        let _ = writeln!(out, "{:w0$}  {:w1$}  {}", r[0], r[1], r[2]);
    }
    out
}
