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

//! Per-qubit and sliced bit-average heat maps.

use serde::{Deserialize, Serialize};

use crate::samples::SampleSet;

/// Bit-1 frequencies of a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatMap {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub per_qubit_mean: Vec<f64>,
    /// Row-major `n x n` mean of the `L = floor(M/n)` consecutive square
    /// slices; `None` when `M < n`.
    pub sliced_mean: Option<Vec<f64>>,
    /// `L`, the number of square slices averaged.
    pub slices: usize,
    /// Overall frequency of ones.
    pub p1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl HeatMap {
    /// `max_j |per_qubit_mean[j] - 1/2|`.
    pub fn max_column_bias(&self) -> f64 {
        self.per_qubit_mean
            .iter()
            .map(|p| (p - 0.5).abs())
            .fold(0.0, f64::max)
    }
}

/// Streaming heat-map builder; rows may arrive in any block sizes.
#[derive(Debug, Clone)]
pub struct HeatMapAccumulator {
    n: usize,
    rows: usize,
    column_ones: Vec<u64>,
    slice_totals: Vec<u64>,
    pending: Vec<u64>,
    pending_rows: usize,
    complete_slices: usize,
}

impl HeatMapAccumulator {
    pub fn new(n: usize) -> Self {
        HeatMapAccumulator {
            n,
            rows: 0,
            column_ones: vec![0; n],
            slice_totals: vec![0; n * n],
            pending: vec![0; n * n],
            pending_rows: 0,
            complete_slices: 0,
        }
    }

    pub fn push_row(&mut self, row: &[u8]) {
        debug_assert_eq!(row.len(), self.n);
        let offset = self.pending_rows * self.n;
        for (j, &b) in row.iter().enumerate() {
            self.column_ones[j] += b as u64;
            self.pending[offset + j] = b as u64;
        }
        self.rows += 1;
        self.pending_rows += 1;
        if self.pending_rows == self.n {
            for (t, p) in self.slice_totals.iter_mut().zip(&self.pending) {
                *t += p;
            }
            self.pending_rows = 0;
            self.complete_slices += 1;
        }
    }

    pub fn push(&mut self, block: &SampleSet) {
        for row in block.rows() {
            self.push_row(row);
        }
    }

    pub fn finish(self) -> HeatMap {
        let m = self.rows.max(1) as f64;
        let per_qubit_mean: Vec<f64> = self.column_ones.iter().map(|&c| c as f64 / m).collect();
        let total: u64 = self.column_ones.iter().sum();
        let p1 = total as f64 / (m * self.n as f64);
        let (sliced_mean, warning) = if self.complete_slices == 0 {
            (
                None,
                Some(format!(
                    "{} records cannot fill one {n}x{n} slice; sliced mean omitted",
                    self.rows,
                    n = self.n
                )),
            )
        } else {
            let l = self.complete_slices as f64;
            (Some(self.slice_totals.iter().map(|&t| t as f64 / l).collect()), None)
        };
        HeatMap {
            n: self.n,
            m: self.rows,
            per_qubit_mean,
            sliced_mean,
            slices: self.complete_slices,
            p1,
            warning,
        }
    }
}

pub fn heat_map(sample: &SampleSet) -> HeatMap {
    let mut acc = HeatMapAccumulator::new(sample.n_qubits());
    acc.push(sample);
    acc.finish()
}
