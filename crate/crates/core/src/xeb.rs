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

//! Linear cross-entropy benchmark and classical distribution distances.

use serde::{Deserialize, Serialize};

use crate::circuit::ProbTable;
use crate::error::{Error, Result};
use crate::numeric::{stable_sum, CompensatedSum};
use crate::samples::SampleSet;

/// Linear XEB estimate `(2^n / M) sum_i p_ideal(x_i) - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XebResult {
    pub fidelity: f64,
    /// Standard error of the mean of the per-record terms `2^n p(x_i) - 1`.
    pub std_error: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub n: usize,
}

fn check_same_n(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

pub fn linear_xeb(sample: &SampleSet, ideal: &ProbTable) -> Result<XebResult> {
    let n = sample.n_qubits();
    check_same_n(n, ideal.n_qubits())?;
    let dim = (n as f64).exp2();
    let m = sample.n_records();
    let terms: Vec<f64> = (0..m)
        .map(|i| dim * ideal.get(sample.row_index(i) as usize) - 1.0)
        .collect();
    let mean = stable_sum(terms.iter().copied()) / m as f64;
    let std_error = if m > 1 {
        let ss: CompensatedSum = terms.iter().map(|t| (t - mean) * (t - mean)).collect();
        (ss.value() / (m - 1) as f64).sqrt() / (m as f64).sqrt()
    } else {
        0.0
    };
    Ok(XebResult {
        fidelity: mean,
        std_error,
        m,
        n,
    })
}

/// `D(p, q) = sum_x |p(x) - q(x)| / 2`.
pub fn kolmogorov_distance(p: &ProbTable, q: &ProbTable) -> Result<f64> {
    check_same_n(p.n_qubits(), q.n_qubits())?;
    let d = stable_sum(p.probs().iter().zip(q.probs()).map(|(a, b)| (a - b).abs())) / 2.0;
    Ok(d.clamp(0.0, 1.0))
}

/// `F(p, q) = sum_x sqrt(p(x) q(x))`.
pub fn bhattacharya_overlap(p: &ProbTable, q: &ProbTable) -> Result<f64> {
    check_same_n(p.n_qubits(), q.n_qubits())?;
    let f = stable_sum(p.probs().iter().zip(q.probs()).map(|(a, b)| (a * b).sqrt()));
    Ok(f.clamp(0.0, 1.0))
}
