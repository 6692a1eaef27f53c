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

//! Bit-string sample sets: validation, text I/O and synthetic generators.
//!
//! Bit order is fixed crate-wide: the leftmost character of a record is qubit 0,
//! and qubit 0 is the most significant bit when a record is read as an integer.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::descriptor::parse_descriptor;
use crate::error::{Error, Result};

/// Default cap on the in-memory size of a sample (one byte per bit).
pub const DEFAULT_MEMORY_BUDGET: usize = 2 << 30;

/// Where a sample came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Hardware,
    TensorNetwork,
    UniformSynthetic,
    SpoofSynthetic,
    Simulator,
    Unknown,
}

impl Source {
    /// Best guess from the dataset naming conventions.
    pub fn infer_from_filename(name: &str) -> Source {
        let base = Path::new(name)
            .file_name()
            .and_then(|s| s.to_str())
            .unwrap_or(name);
        if base.starts_with("measurement") {
            Source::Hardware
        } else if base.starts_with("samples") || base.starts_with("spoofing") {
            Source::TensorNetwork
        } else if base.contains("classical") {
            Source::UniformSynthetic
        } else {
            Source::Unknown
        }
    }
}

/// An immutable `M x n` matrix of measured bits.
///
/// Rows are records (one bit string each), columns are qubits. Storage is
/// row-major with one byte per bit, so `bits()` is also the concatenated
/// bit stream in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    bits: Vec<u8>,
    n: usize,
    m: usize,
    label: String,
    source: Source,
}

impl SampleSet {
    /// Build from a flat row-major buffer of 0/1 values.
    pub fn from_flat(bits: Vec<u8>, n: usize, label: impl Into<String>, source: Source) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("qubit count must be at least 1".into()));
        }
        if bits.is_empty() || !bits.len().is_multiple_of(n) {
            return Err(Error::InvalidArgument(format!(
                "buffer of {} bits is not a nonempty multiple of n = {n}",
                bits.len()
            )));
        }
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidArgument(format!(
                "entry {pos} has value {} (expected 0 or 1)",
                bits[pos]
            )));
        }
        let m = bits.len() / n;
        Ok(SampleSet {
            bits,
            n,
            m,
            label: label.into(),
            source,
        })
    }

    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R], label: impl Into<String>, source: Source) -> Result<Self> {
        let n = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut bits = Vec::with_capacity(rows.len() * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} bits, expected {n}",
                    row.len()
                )));
            }
            bits.extend_from_slice(row);
        }
        Self::from_flat(bits, n, label, source)
    }

    /// Qubit count `n`.
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Record count `M`.
    pub fn n_records(&self) -> usize {
        self.m
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Row-major bits; equivalently the concatenated stream of all records.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.bits[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, u8> {
        self.bits.chunks_exact(self.n)
    }

    /// Record `i` read as an integer, qubit 0 most significant.
    ///
    /// Only meaningful for `n <= 64`.
    pub fn row_index(&self, i: usize) -> u64 {
        self.row(i).iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// Keep the first `m` records.
    pub fn truncated(&self, m: usize) -> Result<SampleSet> {
        if m == 0 || m > self.m {
            return Err(Error::InvalidArgument(format!(
                "cannot truncate {} records to {m}",
                self.m
            )));
        }
        Ok(SampleSet {
            bits: self.bits[..m * self.n].to_vec(),
            n: self.n,
            m,
            label: self.label.clone(),
            source: self.source,
        })
    }

    /// The sample as file text: one record per line, LF terminated.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.m * (self.n + 1));
        for row in self.rows() {
            out.extend(row.iter().map(|&b| if b == 1 { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }
}

fn check_budget(rows: usize, cols: usize, budget: usize) -> Result<()> {
    match rows.checked_mul(cols) {
        Some(total) if total <= budget => Ok(()),
        _ => Err(Error::MemoryBudget { rows, cols, budget }),
    }
}

/// Parse a sample file with the default memory budget.
pub fn parse_sample_file(path: impl AsRef<Path>, expected_n: Option<usize>) -> Result<SampleSet> {
    parse_sample_file_with_budget(path, expected_n, DEFAULT_MEMORY_BUDGET)
}

pub fn parse_sample_file_with_budget(
    path: impl AsRef<Path>,
    expected_n: Option<usize>,
    budget: usize,
) -> Result<SampleSet> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = SampleReader::new(BufReader::new(file), path, expected_n);
    let mut bits = Vec::new();
    while let Some(line) = reader.next_record()? {
        if bits.len() + line.len() > budget {
            return Err(Error::MemoryBudget {
                rows: bits.len() / line.len() + 1,
                cols: line.len(),
                budget,
            });
        }
        bits.extend_from_slice(line);
    }
    let n = reader.n.ok_or_else(|| Error::NoRecords { path: path.to_path_buf() })?;
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("");
    let label = parse_descriptor(name).label;
    SampleSet::from_flat(bits, n, label, Source::infer_from_filename(name))
}

/// Incremental record reader for sample files.
///
/// Accepts LF or CRLF line endings, skips blank lines and strips trailing
/// whitespace. Used directly for block-wise streaming of files larger than
/// the memory budget.
pub struct SampleReader<R> {
    inner: R,
    path: PathBuf,
    line: String,
    record: Vec<u8>,
    line_no: usize,
    records: usize,
    n: Option<usize>,
}

impl SampleReader<BufReader<File>> {
    pub fn open(path: impl AsRef<Path>, expected_n: Option<usize>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(SampleReader::new(BufReader::new(file), path, expected_n))
    }
}

impl<R: BufRead> SampleReader<R> {
    pub fn new(inner: R, path: impl Into<PathBuf>, expected_n: Option<usize>) -> Self {
        SampleReader {
            inner,
            path: path.into(),
            line: String::new(),
            record: Vec::new(),
            line_no: 0,
            records: 0,
            n: expected_n,
        }
    }

    /// Qubit count, known after the first record (or given up front).
    pub fn n_qubits(&self) -> Option<usize> {
        self.n
    }

    /// Next record as 0/1 bytes, or `None` at end of input.
    pub fn next_record(&mut self) -> Result<Option<&[u8]>> {
        loop {
            self.line.clear();
            let read = self
                .inner
                .read_line(&mut self.line)
                .map_err(|e| Error::io(&self.path, e))?;
            if read == 0 {
                if self.records == 0 {
                    return Err(Error::NoRecords { path: self.path.clone() });
                }
                return Ok(None);
            }
            self.line_no += 1;
            let trimmed = self.line.trim_end();
            if trimmed.is_empty() {
                continue;
            }
            self.record.clear();
            for (col, ch) in trimmed.chars().enumerate() {
                match ch {
                    '0' => self.record.push(0),
                    '1' => self.record.push(1),
                    other => {
                        return Err(Error::InvalidCharacter {
                            path: self.path.clone(),
                            line: self.line_no,
                            column: col + 1,
                            found: other,
                        })
                    }
                }
            }
            match self.n {
                None => self.n = Some(self.record.len()),
                Some(expected) if expected != self.record.len() => {
                    if self.records == 0 {
                        return Err(Error::QubitMismatch {
                            expected,
                            found: self.record.len(),
                        });
                    }
                    return Err(Error::InconsistentLength {
                        path: self.path.clone(),
                        line: self.line_no,
                        expected,
                        found: self.record.len(),
                    });
                }
                Some(_) => {}
            }
            self.records += 1;
            return Ok(Some(&self.record));
        }
    }

    /// Read up to `max_rows` records as a block; `None` once the input is exhausted.
    pub fn next_block(&mut self, max_rows: usize, label: &str) -> Result<Option<SampleSet>> {
        let mut bits = Vec::new();
        let mut rows = 0;
        while rows < max_rows {
            match self.next_record()? {
                Some(rec) => bits.extend_from_slice(rec),
                None => break,
            }
            rows += 1;
        }
        if rows == 0 {
            return Ok(None);
        }
        let n = self.n.unwrap_or(0);
        SampleSet::from_flat(bits, n, label, Source::Unknown).map(Some)
    }
}

/// Write one record per line, `'0'`/`'1'` characters, LF terminated.
pub fn write_sample_file(sample: &SampleSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let mut line = Vec::with_capacity(sample.n_qubits() + 1);
    for row in sample.rows() {
        line.clear();
        line.extend(row.iter().map(|&b| b'0' + b));
        line.push(b'\n');
        out.write_all(&line).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

fn fill_fair_bits(rng: &mut ChaCha8Rng, out: &mut [u8]) {
    for chunk in out.chunks_mut(64) {
        let word = rng.next_u64();
        for (i, b) in chunk.iter_mut().enumerate() {
            *b = ((word >> i) & 1) as u8;
        }
    }
}

/// `M x n` i.i.d. fair bits from ChaCha8 seeded with `seed`.
pub fn generate_uniform(n: usize, m: usize, seed: u64) -> Result<SampleSet> {
    generate_uniform_with_budget(n, m, seed, DEFAULT_MEMORY_BUDGET)
}

pub fn generate_uniform_with_budget(n: usize, m: usize, seed: u64, budget: usize) -> Result<SampleSet> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "uniform sample needs n >= 1 and M >= 1 (got n = {n}, M = {m})"
        )));
    }
    check_budget(m, n, budget)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits = vec![0u8; m * n];
    fill_fair_bits(&mut rng, &mut bits);
    SampleSet::from_flat(bits, n, format!("uniform-n{n}-M{m}-seed{seed}"), Source::UniformSynthetic)
}

/// Fair bits with the first `prefix_len` columns pinned to `fixed_value`.
///
/// Columns at or beyond the prefix are identical to `generate_uniform` with
/// the same seed, so `prefix_len = 0` reproduces it exactly.
pub fn generate_spoof(n: usize, m: usize, seed: u64, prefix_len: usize, fixed_value: u8) -> Result<SampleSet> {
    if prefix_len > n {
        return Err(Error::InvalidArgument(format!(
            "prefix length {prefix_len} exceeds qubit count {n}"
        )));
    }
    if fixed_value > 1 {
        return Err(Error::InvalidArgument(format!("fixed value {fixed_value} is not a bit")));
    }
    let uniform = generate_uniform(n, m, seed)?;
    let mut bits = uniform.bits;
    for row in bits.chunks_exact_mut(n) {
        row[..prefix_len].fill(fixed_value);
    }
    SampleSet::from_flat(
        bits,
        n,
        format!("spoof-n{n}-M{m}-seed{seed}-prefix{prefix_len}x{fixed_value}"),
        Source::SpoofSynthetic,
    )
}
