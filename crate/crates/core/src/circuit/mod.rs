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

//! Pseudo-random circuits, exact state-vector simulation and Haar unitaries.
//!
//! A circuit has `m` cycles. Each cycle applies one gate drawn from
//! `{sqrt(X), sqrt(Y), sqrt(W)}` to every qubit, then the fixed two-qubit gate
//! on every coupler that the cycle's pattern letter activates. By default a
//! qubit never receives the same single-qubit gate in two consecutive cycles.

mod gates;
mod haar;
mod state;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use gates::{fsim, unitarity_deviation, FsimParams, Mat2, Mat4, SingleQubitGate};
pub use haar::{haar_unitary, unitary_error, MAX_HAAR_DIM};
pub use state::{
    sample_bitstrings, simulate, simulate_with_cap, ProbTable, StateVector, DEFAULT_SIMULATOR_CAP,
};

use crate::descriptor::is_valid_pattern;
use crate::error::{Error, Result};

/// Qubit coupling layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Topology {
    /// Qubits on a ring. Pattern `A` (and its alias `C`) activates bonds
    /// `(i, i+1)` with `i` even, `B` (alias `D`) those with `i` odd. The
    /// closing bond `(n-1, 0)` exists only for even `n >= 4`.
    #[default]
    Ring,
    /// Row-major `rows x cols` grid: `A`/`B` are horizontal bonds starting in
    /// an even/odd column, `C`/`D` vertical bonds starting in an even/odd row.
    Grid { rows: usize, cols: usize },
    /// Explicit coupler lists per pattern letter.
    Custom { couplers: BTreeMap<char, Vec<(usize, usize)>> },
}

impl Topology {
    /// Couplers activated by `letter` on `n` qubits.
    pub fn couplers(&self, n: usize, letter: char) -> Result<Vec<(usize, usize)>> {
        match self {
            Topology::Ring => {
                let parity = match letter {
                    'A' | 'C' => 0,
                    'B' | 'D' => 1,
                    _ => return Err(Error::UndefinedPattern { letter }),
                };
                let bonds = if n >= 4 && n.is_multiple_of(2) { n } else { n.saturating_sub(1) };
                Ok((parity..bonds)
                    .step_by(2)
                    .map(|i| (i, (i + 1) % n))
                    .collect())
            }
            Topology::Grid { rows, cols } => {
                let (rows, cols) = (*rows, *cols);
                if rows * cols != n {
                    return Err(Error::InvalidArgument(format!(
                        "grid {rows}x{cols} does not hold {n} qubits"
                    )));
                }
                let at = |r: usize, c: usize| r * cols + c;
                let mut out = Vec::new();
                match letter {
                    'A' | 'B' => {
                        let start = usize::from(letter == 'B');
                        for r in 0..rows {
                            for c in (start..cols.saturating_sub(1)).step_by(2) {
                                out.push((at(r, c), at(r, c + 1)));
                            }
                        }
                    }
                    'C' | 'D' => {
                        let start = usize::from(letter == 'D');
                        for r in (start..rows.saturating_sub(1)).step_by(2) {
                            for c in 0..cols {
                                out.push((at(r, c), at(r + 1, c)));
                            }
                        }
                    }
                    _ => return Err(Error::UndefinedPattern { letter }),
                }
                Ok(out)
            }
            Topology::Custom { couplers } => {
                let list = couplers
                    .get(&letter)
                    .ok_or(Error::UndefinedPattern { letter })?;
                let mut used = vec![false; n];
                for &(a, b) in list {
                    if a >= n || b >= n || a == b {
                        return Err(Error::InvalidArgument(format!(
                            "coupler ({a}, {b}) is invalid for {n} qubits"
                        )));
                    }
                    if used[a] || used[b] {
                        return Err(Error::InvalidArgument(format!(
                            "pattern {letter:?} uses a qubit twice"
                        )));
                    }
                    used[a] = true;
                    used[b] = true;
                }
                Ok(list.clone())
            }
        }
    }
}

/// Description of a pseudo-random circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub n_qubits: usize,
    pub m_cycles: usize,
    pub seed: u64,
    #[serde(default = "default_pattern")]
    pub pattern: String,
    #[serde(default)]
    pub topology: Topology,
    #[serde(default)]
    pub fsim: FsimParams,
    /// Forbid the same single-qubit gate on a qubit in consecutive cycles.
    #[serde(default = "default_true")]
    pub no_repeat: bool,
}

fn default_pattern() -> String {
    "ABCDCDAB".to_string()
}

fn default_true() -> bool {
    true
}

impl CircuitSpec {
    /// Ring topology, pattern `ABCDCDAB`, `fSim(pi/2, pi/6)`, no repetition.
    pub fn new(n_qubits: usize, m_cycles: usize, seed: u64) -> Self {
        CircuitSpec {
            n_qubits,
            m_cycles,
            seed,
            pattern: default_pattern(),
            topology: Topology::Ring,
            fsim: FsimParams::default(),
            no_repeat: true,
        }
    }

    pub fn with_topology(mut self, topology: Topology) -> Self {
        self.topology = topology;
        self
    }

    pub fn with_pattern(mut self, pattern: impl Into<String>) -> Self {
        self.pattern = pattern.into();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.m_cycles == 0 {
            return Err(Error::InvalidArgument(format!(
                "circuit needs n >= 1 and m >= 1 (got n = {}, m = {})",
                self.n_qubits, self.m_cycles
            )));
        }
        if !is_valid_pattern(&self.pattern) {
            return Err(Error::InvalidArgument(format!(
                "pattern {:?} is not a nonempty string over A-D",
                self.pattern
            )));
        }
        Ok(())
    }

    /// Pattern letter driving cycle `c` (the pattern repeats).
    pub fn letter(&self, cycle: usize) -> char {
        let bytes = self.pattern.as_bytes();
        bytes[cycle % bytes.len()] as char
    }
}

/// One gate application.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Single { qubit: usize, gate: SingleQubitGate },
    Fsim { a: usize, b: usize, params: FsimParams },
    Unitary1 { qubit: usize, matrix: Mat2 },
    Unitary2 { a: usize, b: usize, matrix: Mat4 },
}

impl Gate {
    pub fn is_single_qubit(&self) -> bool {
        matches!(self, Gate::Single { .. } | Gate::Unitary1 { .. })
    }
}

/// A built circuit: the flat gate list plus the per-cycle gate choices.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
    /// `choices[cycle][qubit]`.
    pub choices: Vec<Vec<SingleQubitGate>>,
}

impl Circuit {
    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| !g.is_single_qubit()).count()
    }
}

/// Expand a spec into its deterministic gate sequence.
pub fn build_circuit(spec: &CircuitSpec) -> Result<Circuit> {
    spec.validate()?;
    let n = spec.n_qubits;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut gates = Vec::new();
    let mut choices: Vec<Vec<SingleQubitGate>> = Vec::with_capacity(spec.m_cycles);
    for cycle in 0..spec.m_cycles {
        let previous = choices.last();
        let layer: Vec<SingleQubitGate> = (0..n)
            .map(|q| {
                let last = previous.map(|p| p[q]);
                match last {
                    Some(last) if spec.no_repeat => {
                        let allowed: Vec<_> = SingleQubitGate::ALL
                            .into_iter()
                            .filter(|&g| g != last)
                            .collect();
                        allowed[rng.random_range(0..allowed.len())]
                    }
                    _ => SingleQubitGate::ALL[rng.random_range(0..3)],
                }
            })
            .collect();
        gates.extend(layer.iter().enumerate().map(|(qubit, &gate)| Gate::Single { qubit, gate }));
        choices.push(layer);
        for (a, b) in spec.topology.couplers(n, spec.letter(cycle))? {
            gates.push(Gate::Fsim {
                a,
                b,
                params: spec.fsim,
            });
        }
    }
    Ok(Circuit {
        n_qubits: n,
        gates,
        choices,
    })
}
