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

//! Dense state-vector simulation, probability tables and exact sampling.
//!
//! Qubit 0 is the most significant bit of a basis-state index, matching the
//! left-to-right order of sample files.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::gates::{fsim, unitarity_deviation, Mat2, Mat4};
use super::Gate;
use crate::error::{Error, Result};
use crate::numeric::stable_sum;
use crate::samples::{SampleSet, Source, DEFAULT_MEMORY_BUDGET};

/// Default largest simulable register (2^24 amplitudes, 256 MiB).
pub const DEFAULT_SIMULATOR_CAP: usize = 24;

const NORM_TOLERANCE: f64 = 1e-10;
const UNITARITY_TOLERANCE: f64 = 1e-10;
const PARALLEL_MIN_QUBITS: usize = 14;

const PROB_MAGIC: &[u8; 8] = b"RCSPROB1";

/// `U |0...0>` as `2^n` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zero_state(n: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        StateVector { n, amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        stable_sum(self.amplitudes.iter().map(|a| a.norm_sqr()))
    }

    /// `p_x = |amplitude_x|^2`.
    pub fn probabilities(&self) -> ProbTable {
        ProbTable {
            n: self.n,
            probs: self.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    /// `theta_x = arg(amplitude_x)` in `[-pi, pi]`.
    pub fn phases(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.arg()).collect()
    }

    fn apply_single(&mut self, qubit: usize, m: &Mat2) {
        let stride = 1usize << (self.n - 1 - qubit);
        let kernel = |chunk: &mut [Complex64]| {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = m[0][0] * x + m[0][1] * y;
                *a1 = m[1][0] * x + m[1][1] * y;
            }
        };
        if self.n >= PARALLEL_MIN_QUBITS {
            self.amplitudes.par_chunks_mut(2 * stride).for_each(kernel);
        } else {
            self.amplitudes.chunks_mut(2 * stride).for_each(kernel);
        }
    }

    fn apply_two(&mut self, a: usize, b: usize, m: &Mat4) {
        let pa = self.n - 1 - a;
        let pb = self.n - 1 - b;
        let (lo, hi) = if pa < pb { (pa, pb) } else { (pb, pa) };
        let (ma, mb) = (1usize << pa, 1usize << pb);
        for j in 0..self.amplitudes.len() >> 2 {
            let base = insert_zero_bit(insert_zero_bit(j, lo), hi);
            let idx = [base, base | mb, base | ma, base | ma | mb];
            let v = idx.map(|i| self.amplitudes[i]);
            for (r, &i) in idx.iter().enumerate() {
                self.amplitudes[i] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
            }
        }
    }
}

#[inline]
fn insert_zero_bit(x: usize, pos: usize) -> usize {
    let low = x & ((1 << pos) - 1);
    ((x >> pos) << (pos + 1)) | low
}

/// Exact simulation of `gates` on `|0...0>` with the default cap.
pub fn simulate(gates: &[Gate], n: usize) -> Result<StateVector> {
    simulate_with_cap(gates, n, DEFAULT_SIMULATOR_CAP)
}

pub fn simulate_with_cap(gates: &[Gate], n: usize, cap: usize) -> Result<StateVector> {
    if n > cap {
        return Err(Error::SimulatorCap { n, cap });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("cannot simulate zero qubits".into()));
    }
    let check_qubit = |q: usize| {
        if q >= n {
            Err(Error::InvalidArgument(format!("qubit {q} out of range for {n} qubits")))
        } else {
            Ok(())
        }
    };
    let mut state = StateVector::zero_state(n);
    for (index, gate) in gates.iter().enumerate() {
        match gate {
            Gate::Single { qubit, gate } => {
                check_qubit(*qubit)?;
                state.apply_single(*qubit, &gate.matrix());
            }
            Gate::Unitary1 { qubit, matrix } => {
                check_qubit(*qubit)?;
                let deviation = unitarity_deviation(matrix);
                if deviation > UNITARITY_TOLERANCE {
                    return Err(Error::NonUnitaryGate { index, deviation });
                }
                state.apply_single(*qubit, matrix);
            }
            Gate::Fsim { a, b, params } => {
                check_qubit(*a)?;
                check_qubit(*b)?;
                if a == b {
                    return Err(Error::InvalidArgument(format!("gate {index} acts twice on qubit {a}")));
                }
                state.apply_two(*a, *b, &fsim(params.theta, params.phi));
            }
            Gate::Unitary2 { a, b, matrix } => {
                check_qubit(*a)?;
                check_qubit(*b)?;
                if a == b {
                    return Err(Error::InvalidArgument(format!("gate {index} acts twice on qubit {a}")));
                }
                let deviation = unitarity_deviation(matrix);
                if deviation > UNITARITY_TOLERANCE {
                    return Err(Error::NonUnitaryGate { index, deviation });
                }
                state.apply_two(*a, *b, matrix);
            }
        }
    }
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { sum: norm });
    }
    Ok(state)
}

/// Output distribution over all `2^n` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbTable {
    n: usize,
    probs: Vec<f64>,
}

impl ProbTable {
    /// Validate length `2^n`, non-negativity and normalization (1e-10).
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        if n == 0 || n >= usize::BITS as usize || probs.len() != 1usize << n {
            return Err(Error::InvalidArgument(format!(
                "table of {} entries does not match 2^{n}",
                probs.len()
            )));
        }
        if let Some(bad) = probs.iter().find(|p| **p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidArgument(format!("invalid probability {bad}")));
        }
        let sum = stable_sum(probs.iter().copied());
        if (sum - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        Ok(ProbTable { n, probs })
    }

    /// The uniform distribution `1/2^n`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 || n > 40 {
            return Err(Error::InvalidArgument(format!("uniform table for n = {n}")));
        }
        let p = (-(n as f64)).exp2();
        Ok(ProbTable {
            n,
            probs: vec![p; 1 << n],
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, x: usize) -> f64 {
        self.probs[x]
    }

    /// Binary layout: `RCSPROB1`, `u32` LE qubit count, `u32` zero, then
    /// `2^n` little-endian `f64`.
    pub fn write_binary(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        let io = |e| Error::io(path, e);
        out.write_all(PROB_MAGIC).map_err(io)?;
        out.write_all(&(self.n as u32).to_le_bytes()).map_err(io)?;
        out.write_all(&0u32.to_le_bytes()).map_err(io)?;
        for p in &self.probs {
            out.write_all(&p.to_le_bytes()).map_err(io)?;
        }
        out.flush().map_err(io)
    }

    /// CSV with header `index,bitstring,probability`; probabilities are
    /// written in shortest round-trip form.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        let io = |e| Error::io(path, e);
        writeln!(out, "index,bitstring,probability").map_err(io)?;
        for (x, p) in self.probs.iter().enumerate() {
            writeln!(out, "{x},{:0width$b},{p:e}", x, width = self.n).map_err(io)?;
        }
        out.flush().map_err(io)
    }

    /// Read either format, detected by the binary magic.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes).map_err(|e| Error::io(path, e))?;
        if bytes.starts_with(PROB_MAGIC) {
            Self::from_binary(path, &bytes)
        } else {
            Self::from_csv(path, BufReader::new(&bytes[..]))
        }
    }

    fn from_binary(path: &Path, bytes: &[u8]) -> Result<Self> {
        let bad = |reason: String| Error::ProbFormat {
            path: path.to_path_buf(),
            reason,
        };
        if bytes.len() < 16 {
            return Err(bad("truncated header".into()));
        }
        let n = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        if n == 0 || n > 40 {
            return Err(bad(format!("qubit count {n} out of range")));
        }
        let body = &bytes[16..];
        if body.len() != 8usize << n {
            return Err(bad(format!("expected {} probabilities, found {} bytes", 1u64 << n, body.len())));
        }
        let probs = body
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        ProbTable::new(n, probs)
    }

    fn from_csv<R: BufRead>(path: &Path, reader: R) -> Result<Self> {
        let bad = |reason: String| Error::ProbFormat {
            path: path.to_path_buf(),
            reason,
        };
        let mut probs = Vec::new();
        let mut n = None;
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let line = line.trim();
            if i == 0 || line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(bad(format!("line {}: expected 3 fields", i + 1)));
            }
            let index: usize = fields[0]
                .parse()
                .map_err(|_| bad(format!("line {}: bad index", i + 1)))?;
            let width = fields[1].len();
            if *n.get_or_insert(width) != width {
                return Err(bad(format!("line {}: inconsistent bitstring width", i + 1)));
            }
            if usize::from_str_radix(fields[1], 2).ok() != Some(index) || index != probs.len() {
                return Err(bad(format!("line {}: index {index} out of order", i + 1)));
            }
            let p: f64 = fields[2]
                .parse()
                .map_err(|_| bad(format!("line {}: bad probability", i + 1)))?;
            probs.push(p);
        }
        let n = n.ok_or_else(|| bad("no rows".into()))?;
        ProbTable::new(n, probs)
    }
}

/// `m` independent exact draws from `probs` by inverse-CDF lookup.
///
/// Row bits are the outcome index, qubit 0 (most significant) first.
pub fn sample_bitstrings(probs: &ProbTable, m: usize, seed: u64) -> Result<SampleSet> {
    let n = probs.n_qubits();
    if m == 0 {
        return Err(Error::InvalidArgument("cannot draw zero samples".into()));
    }
    if m.checked_mul(n).is_none_or(|t| t > DEFAULT_MEMORY_BUDGET) {
        return Err(Error::MemoryBudget {
            rows: m,
            cols: n,
            budget: DEFAULT_MEMORY_BUDGET,
        });
    }
    let mut cdf = Vec::with_capacity(probs.probs().len());
    let mut acc = 0.0;
    for &p in probs.probs() {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits = Vec::with_capacity(m * n);
    for _ in 0..m {
        let u = rng.random::<f64>() * total;
        let x = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        bits.extend((0..n).rev().map(|shift| ((x >> shift) & 1) as u8));
    }
    SampleSet::from_flat(bits, n, format!("simulator-n{n}-M{m}-seed{seed}"), Source::Simulator)
}
