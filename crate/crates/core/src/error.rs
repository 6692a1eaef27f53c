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

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}, column {column}: invalid character {found:?} (expected '0' or '1')")]
    InvalidCharacter {
        path: PathBuf,
        line: usize,
        column: usize,
        found: char,
    },

    #[error("{path}: line {line} has {found} bits, expected {expected}")]
    InconsistentLength {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("{path}: no records")]
    NoRecords { path: PathBuf },

    #[error("qubit count mismatch: expected {expected}, found {found}")]
    QubitMismatch { expected: usize, found: usize },

    #[error("sample of {rows}x{cols} bits exceeds the memory budget of {budget} bytes")]
    MemoryBudget { rows: usize, cols: usize, budget: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{n} qubits exceeds the simulator cap of {cap}")]
    SimulatorCap { n: usize, cap: usize },

    #[error("gate {index} is not unitary (deviation {deviation:e})")]
    NonUnitaryGate { index: usize, deviation: f64 },

    #[error("pattern letter {letter:?} has no coupler set in this topology")]
    UndefinedPattern { letter: char },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("probability table is not normalized (sum = {sum})")]
    NotNormalized { sum: f64 },

    #[error("not enough rows: {rows} rows cannot fill a slice of {needed}")]
    TooFewRows { rows: usize, needed: usize },

    #[error("degenerate bulk spectrum: {0}")]
    DegenerateBulk(String),

    #[error("malformed probability file {path}: {reason}")]
    ProbFormat { path: PathBuf, reason: String },

    #[error("empty series")]
    EmptySeries,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
