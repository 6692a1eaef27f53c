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

//! Batch comparison driver.

use std::io::Read;
use std::path::Path;

use rayon::prelude::*;
use rcs_core::samples::{parse_sample_file_with_budget, SampleReader};
use rcs_core::spectral::{HeatMapAccumulator, SpectrumAccumulator};
use rcs_core::transport::NORMALIZATION;
use rcs_core::{
    build_circuit, bulk_fit_report, gram_spectrum, heat_map, linear_xeb, parse_descriptor, run_battery,
    sample_bitstrings, simulate, slice_matrices, to_values, wasserstein, Error, HeatMap, ProbTable, SampleSet, Source,
    SpectrumResult,
};
use sha2::{Digest, Sha256};

use crate::config::{IdealSpec, InputSpec, Metric, RunConfig, SCHEMA_VERSION};
use crate::error::Result;
use crate::report::{
    HeatmapSummary, InputReport, MetricReport, SpectrumSummary, WassersteinEntry, WassersteinMatrix, XebEntry,
};

#[derive(Debug, Clone, Copy)]
pub struct CompareOptions {
    pub timestamp: bool,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions { timestamp: true }
    }
}

/// Run every requested metric on every input. Failures are recorded on the
/// affected input; only configuration errors abort the run.
pub fn run_compare(config: &RunConfig, options: CompareOptions) -> Result<MetricReport> {
    let ideal = config.ideal.as_ref().map(load_ideal);
    let results: Vec<(InputReport, Option<Vec<f64>>)> = config
        .inputs
        .par_iter()
        .map(|input| analyse_input(input, config, ideal.as_ref()))
        .collect();

    let (inputs, values): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let wasserstein = config
        .metrics
        .contains(&Metric::Wdist)
        .then(|| wasserstein_matrix(config, &inputs, &values));
    let timestamp_unix = options.timestamp.then(|| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs())
    });
    Ok(MetricReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp_unix,
        config: config.clone(),
        inputs,
        wasserstein,
    })
}

fn load_ideal(spec: &IdealSpec) -> std::result::Result<(ProbTable, String), String> {
    match spec {
        IdealSpec::ProbFile { path } => ProbTable::read(path)
            .map(|t| (t, format!("prob-file:{}", path.display())))
            .map_err(|e| e.to_string()),
        IdealSpec::Circuit { circuit } => circuit_table(circuit).map_err(|e| e.to_string()).map(|t| {
            let name = format!("circuit:n{}-m{}-s{}", circuit.n_qubits, circuit.m_cycles, circuit.seed);
            (t, name)
        }),
    }
}

fn circuit_table(spec: &rcs_core::CircuitSpec) -> rcs_core::Result<ProbTable> {
    let c = build_circuit(spec)?;
    Ok(simulate(&c.gates, spec.n_qubits)?.probabilities())
}

/// SHA-256 of the sample in file format.
fn sample_digest(sample: &SampleSet) -> String {
    let mut hasher = Sha256::new();
    let mut line = Vec::with_capacity(sample.n_qubits() + 1);
    for row in sample.rows() {
        line.clear();
        line.extend(row.iter().map(|b| b'0' + b));
        line.push(b'\n');
        hasher.update(&line);
    }
    hex::encode(hasher.finalize())
}

fn file_digest(path: &Path) -> std::io::Result<String> {
    let mut file = std::fs::File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 20];
    loop {
        let read = file.read(&mut buf)?;
        if read == 0 {
            break;
        }
        hasher.update(&buf[..read]);
    }
    Ok(hex::encode(hasher.finalize()))
}

enum Loaded {
    InMemory(SampleSet, Option<ProbTable>),
    /// Too large for the budget: only the streaming metrics are available.
    Streamed(HeatMap, Option<SpectrumResult>, Vec<f64>, usize, usize),
}

fn analyse_input(
    spec: &InputSpec,
    config: &RunConfig,
    ideal: Option<&std::result::Result<(ProbTable, String), String>>,
) -> (InputReport, Option<Vec<f64>>) {
    let label = spec.label();
    let (origin, source) = match spec {
        InputSpec::File { path, .. } => (
            path.display().to_string(),
            Source::infer_from_filename(&path.to_string_lossy()),
        ),
        InputSpec::Uniform { .. } => ("generate_uniform".to_string(), Source::UniformSynthetic),
        InputSpec::Spoof { .. } => ("generate_spoof".to_string(), Source::SpoofSynthetic),
        InputSpec::Circuit { .. } => ("sample_bitstrings".to_string(), Source::Simulator),
    };
    let mut report = InputReport::new(label.clone(), origin, source);
    if let InputSpec::File { path, .. } = spec {
        report.descriptor = Some(parse_descriptor(&path.to_string_lossy()));
        match file_digest(path) {
            Ok(h) => report.sha256 = Some(h),
            Err(e) => {
                report.error("load", Error::Io { path: path.clone(), source: e });
                return (report, None);
            }
        }
    }

    let loaded = match load_input(spec, config, &label) {
        Ok(l) => l,
        Err(e) => {
            report.error("load", e);
            return (report, None);
        }
    };
    let wants = |m: Metric| config.metrics.contains(&m);
    match loaded {
        Loaded::InMemory(sample, own_table) => {
            if report.sha256.is_none() {
                report.sha256 = Some(sample_digest(&sample));
            }
            report.n = Some(sample.n_qubits());
            report.m = Some(sample.n_records());
            if wants(Metric::Xeb) {
                xeb_for(&mut report, &sample, ideal, own_table.as_ref());
            }
            if wants(Metric::Nist) {
                report.nist = Some(run_battery(&sample, config.params.nist_alpha));
            }
            if wants(Metric::Heatmap) {
                report.heatmap_summary = Some(summarize_heatmap(&heat_map(&sample)));
            }
            if wants(Metric::Spectrum) {
                let k = config.params.k.unwrap_or(2 * sample.n_qubits());
                let spectrum = slice_matrices(&sample, k)
                    .and_then(|slices| gram_spectrum(&slices, config.params.estimator));
                match spectrum {
                    Ok(s) => report.spectrum_summary = Some(summarize_spectrum(&s)),
                    Err(e) => report.error("spectrum", e),
                }
            }
            let values = wants(Metric::Wdist).then(|| to_values(&sample).values);
            (report, values)
        }
        Loaded::Streamed(heat, spectrum, values, n, m) => {
            report.n = Some(n);
            report.m = Some(m);
            let too_big = "sample exceeds the memory budget; this metric needs it in memory";
            if wants(Metric::Xeb) {
                report.error("xeb", too_big);
            }
            if wants(Metric::Nist) {
                report.error("nist", too_big);
            }
            if wants(Metric::Heatmap) {
                report.heatmap_summary = Some(summarize_heatmap(&heat));
            }
            if wants(Metric::Spectrum) {
                match spectrum {
                    Some(s) => report.spectrum_summary = Some(summarize_spectrum(&s)),
                    None => report.error("spectrum", "too few records for one slice"),
                }
            }
            (report, wants(Metric::Wdist).then_some(values))
        }
    }
}

fn load_input(spec: &InputSpec, config: &RunConfig, label: &str) -> rcs_core::Result<Loaded> {
    let cap = config.params.max_records;
    let truncate = |s: SampleSet| match cap {
        Some(c) if c < s.n_records() => s.truncated(c),
        _ => Ok(s),
    };
    match spec {
        InputSpec::File { path, n, .. } => {
            match parse_sample_file_with_budget(path, *n, config.params.memory_budget) {
                Ok(s) => Ok(Loaded::InMemory(truncate(s.with_label(label))?, None)),
                Err(Error::MemoryBudget { .. }) => stream_file(path, *n, config, label),
                Err(e) => Err(e),
            }
        }
        InputSpec::Uniform { n, m, seed, .. } => {
            let s = rcs_core::generate_uniform(*n, *m, seed.unwrap_or(0))?;
            Ok(Loaded::InMemory(truncate(s.with_label(label))?, None))
        }
        InputSpec::Spoof {
            n,
            m,
            prefix,
            value,
            seed,
            ..
        } => {
            let s = rcs_core::generate_spoof(*n, *m, seed.unwrap_or(0), *prefix, *value)?;
            Ok(Loaded::InMemory(truncate(s.with_label(label))?, None))
        }
        InputSpec::Circuit { circuit, m, seed, .. } => {
            let table = circuit_table(circuit)?;
            let s = sample_bitstrings(&table, *m, seed.unwrap_or(0))?;
            Ok(Loaded::InMemory(truncate(s.with_label(label))?, Some(table)))
        }
    }
}

fn stream_file(path: &Path, n: Option<usize>, config: &RunConfig, label: &str) -> rcs_core::Result<Loaded> {
    log::info!("{}: over the memory budget, streaming", path.display());
    let mut reader = SampleReader::open(path, n)?;
    let mut heat: Option<HeatMapAccumulator> = None;
    let mut spectrum: Option<SpectrumAccumulator> = None;
    let mut values = Vec::new();
    let cap = config.params.max_records.unwrap_or(usize::MAX);
    let mut seen = 0;
    while seen < cap {
        let width = reader.n_qubits().unwrap_or(64).max(1);
        let rows = (config.params.memory_budget / 4 / width).clamp(1, cap - seen);
        let Some(block) = reader.next_block(rows, label)? else {
            break;
        };
        let n = block.n_qubits();
        seen += block.n_records();
        heat.get_or_insert_with(|| HeatMapAccumulator::new(n)).push(&block);
        spectrum
            .get_or_insert_with(|| SpectrumAccumulator::new(n, config.params.k.unwrap_or(2 * n)))
            .push(&block)?;
        values.extend(to_values(&block).values);
    }
    let n = reader.n_qubits().unwrap_or(0);
    let heat = heat.map(HeatMapAccumulator::finish).ok_or(Error::NoRecords { path: path.into() })?;
    let spectrum = spectrum.and_then(|s| s.finish(config.params.estimator).ok());
    Ok(Loaded::Streamed(heat, spectrum, values, n, seen))
}

fn xeb_for(
    report: &mut InputReport,
    sample: &SampleSet,
    ideal: Option<&std::result::Result<(ProbTable, String), String>>,
    own: Option<&ProbTable>,
) {
    let (table, name) = match (ideal, own) {
        (Some(Ok((t, name))), _) => (t, name.clone()),
        (Some(Err(e)), _) => return report.error("xeb", format!("ideal distribution unavailable: {e}")),
        (None, Some(t)) => (t, "own-circuit".to_string()),
        (None, None) => return report.error("xeb", "no ideal distribution for this input"),
    };
    match linear_xeb(sample, table) {
        Ok(result) => report.xeb = Some(XebEntry { ideal: name, result }),
        Err(e) => report.error("xeb", e),
    }
}

fn summarize_heatmap(h: &HeatMap) -> HeatmapSummary {
    HeatmapSummary {
        p1: h.p1,
        max_column_bias: h.max_column_bias(),
        slices: h.slices,
    }
}

fn summarize_spectrum(s: &SpectrumResult) -> SpectrumSummary {
    let mut warnings = s.warnings.clone();
    let fit = bulk_fit_report(s)
        .map_err(|e| warnings.push(format!("bulk fit rejected: {e}")))
        .ok();
    SpectrumSummary {
        k: s.k,
        slices: s.slices.len(),
        estimator: s.estimator,
        outlier_peak: s.outlier_peak,
        mp_distance: s.mp_distance,
        gamma: s.gamma,
        ks_bulk: fit.map(|f| f.ks_distance),
        in_support_fraction: fit.map(|f| f.in_support_fraction),
        warnings,
    }
}

fn wasserstein_matrix(config: &RunConfig, inputs: &[InputReport], values: &[Option<Vec<f64>>]) -> WassersteinMatrix {
    let alpha = config.params.wasserstein_alpha;
    let ready: Vec<usize> = (0..inputs.len()).filter(|&i| values[i].is_some()).collect();
    let pairs: Vec<(usize, usize)> = match &config.params.reference {
        Some(r) => match ready.iter().find(|&&i| &inputs[i].label == r) {
            Some(&ref_idx) => ready.iter().filter(|&&j| j != ref_idx).map(|&j| (ref_idx, j)).collect(),
            None => Vec::new(),
        },
        None => ready
            .iter()
            .enumerate()
            .flat_map(|(a, &i)| ready[a + 1..].iter().map(move |&j| (i, j)))
            .collect(),
    };
    let entries = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let (a, b) = (values[i].as_ref()?, values[j].as_ref()?);
            let w = wasserstein(a, b, alpha).ok()?;
            Some(WassersteinEntry {
                a: inputs[i].label.clone(),
                b: inputs[j].label.clone(),
                distance: w.distance,
                m_used: w.m_used,
                truncated_from: w.truncated_from,
            })
        })
        .collect();
    WassersteinMatrix {
        alpha,
        normalization: NORMALIZATION.to_string(),
        reference: config.params.reference.clone(),
        entries,
    }
}
