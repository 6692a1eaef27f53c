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

//! Dataset filename convention: `measurement-n<k>-m<k>-s<k>-e<k>-p<pattern>.txt`.

use std::path::Path;

use serde::{Deserialize, Serialize};

/// Parameters recovered from a dataset filename.
///
/// Fields that could not be recovered stay `None` and `warning` explains why.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DatasetDescriptor {
    pub filename: String,
    /// File stem, used as the sample label.
    pub label: String,
    pub n_qubits: Option<usize>,
    pub m_cycles: Option<usize>,
    pub seed: Option<u64>,
    pub elided_gates: Option<u64>,
    pub pattern: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl DatasetDescriptor {
    pub fn is_complete(&self) -> bool {
        self.warning.is_none()
    }
}

pub fn is_valid_pattern(p: &str) -> bool {
    !p.is_empty() && p.chars().all(|c| matches!(c, 'A' | 'B' | 'C' | 'D'))
}

/// Parse a dataset filename (a bare name or a path).
///
/// Never fails: names that do not follow the convention yield whatever
/// fields could be read plus a warning.
pub fn parse_descriptor(filename: &str) -> DatasetDescriptor {
    let base = Path::new(filename)
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or(filename);
    let stem = base.strip_suffix(".txt").unwrap_or(base);
    let mut d = DatasetDescriptor {
        filename: base.to_string(),
        label: stem.to_string(),
        ..Default::default()
    };
    let mut problems = Vec::new();

    let mut tokens = stem.split('-');
    let kind = tokens.next().unwrap_or("");
    if kind != "measurement" {
        problems.push(format!("prefix {kind:?} is not \"measurement\""));
    }
    for tok in tokens {
        let mut chars = tok.chars();
        let key = chars.next();
        let value = chars.as_str();
        let parsed = match key {
            Some('n') => parse_positive(value).map(|v| d.n_qubits = Some(v)),
            Some('m') => parse_positive(value).map(|v| d.m_cycles = Some(v)),
            Some('s') => value.parse::<u64>().ok().map(|v| d.seed = Some(v)),
            Some('e') => value.parse::<u64>().ok().map(|v| d.elided_gates = Some(v)),
            Some('p') if is_valid_pattern(value) => {
                d.pattern = Some(value.to_string());
                Some(())
            }
            _ => None,
        };
        if parsed.is_none() {
            problems.push(format!("unrecognized field {tok:?}"));
        }
    }

    let missing: Vec<&str> = [
        ("n", d.n_qubits.is_none()),
        ("m", d.m_cycles.is_none()),
        ("s", d.seed.is_none()),
        ("e", d.elided_gates.is_none()),
        ("p", d.pattern.is_none()),
    ]
    .into_iter()
    .filter_map(|(k, absent)| absent.then_some(k))
    .collect();
    if !missing.is_empty() {
        problems.push(format!("missing fields: {}", missing.join(",")));
    }
    if !problems.is_empty() {
        d.warning = Some(problems.join("; "));
    }
    d
}

fn parse_positive(s: &str) -> Option<usize> {
    s.parse::<usize>().ok().filter(|&v| v >= 1)
}
