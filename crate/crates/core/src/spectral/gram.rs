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

//! Gram-matrix spectra of row slices and the outlier distance from `n/4`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mp::MarchenkoPastur;
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigenvalues;
use crate::numeric::{ks_statistic, median_in_place};
use crate::samples::SampleSet;

/// Borrowed `k x n` block of consecutive records.
#[derive(Debug, Clone, Copy)]
pub struct SliceView<'a> {
    rows: &'a [u8],
    k: usize,
    n: usize,
}

impl<'a> SliceView<'a> {
    pub fn new(rows: &'a [u8], k: usize, n: usize) -> Result<Self> {
        if k == 0 || n == 0 || rows.len() != k * n {
            return Err(Error::InvalidArgument(format!(
                "slice buffer of {} bits is not {k}x{n}",
                rows.len()
            )));
        }
        Ok(SliceView { rows, k, n })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.rows[r * self.n + c]
    }

    pub fn ones(&self) -> u64 {
        self.rows.iter().map(|&b| b as u64).sum()
    }

    /// `(1/k) X^T X`.
    pub fn gram(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut counts = vec![0u32; n * n];
        let mut set = Vec::with_capacity(n);
        for row in self.rows.chunks_exact(n) {
            set.clear();
            set.extend(row.iter().enumerate().filter(|(_, &b)| b == 1).map(|(j, _)| j));
            for (a, &i) in set.iter().enumerate() {
                for &j in &set[a..] {
                    counts[i * n + j] += 1;
                }
            }
        }
        let k = self.k as f64;
        DMatrix::from_fn(n, n, |i, j| {
            let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
            counts[lo * n + hi] as f64 / k
        })
    }
}

/// Cut the sample into `floor(M/k)` disjoint consecutive `k x n` blocks.
pub fn slice_matrices(sample: &SampleSet, k: usize) -> Result<Vec<SliceView<'_>>> {
    let n = sample.n_qubits();
    let m = sample.n_records();
    if k == 0 {
        return Err(Error::InvalidArgument("slice height must be positive".into()));
    }
    if m < k {
        return Err(Error::TooFewRows { rows: m, needed: k });
    }
    sample
        .bits()
        .chunks_exact(k * n)
        .map(|rows| SliceView::new(rows, k, n))
        .collect()
}

/// How the per-slice largest eigenvalues are condensed into one peak.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutlierEstimator {
    #[default]
    Median,
    Mean,
}

/// Eigenvalues of one slice's Gram matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceSpectrum {
    pub index: usize,
    /// Ascending; the last entry is the slice's outlier.
    pub eigenvalues: Vec<f64>,
    pub ones: u64,
}

impl SliceSpectrum {
    pub fn outlier(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// Density histogram with explicit bin edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
}

impl Histogram {
    /// Freedman–Diaconis bins on `[lo, hi]`, capped at `max_bins`.
    pub fn freedman_diaconis(values: &[f64], lo: f64, hi: f64, max_bins: usize) -> Histogram {
        let mut sorted = values.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        let q = |p: f64| sorted[((sorted.len() - 1) as f64 * p).round() as usize];
        let iqr = if sorted.is_empty() { 0.0 } else { q(0.75) - q(0.25) };
        let width = 2.0 * iqr / (sorted.len().max(1) as f64).cbrt();
        let span = (hi - lo).max(f64::MIN_POSITIVE);
        let bins = if width > 0.0 {
            ((span / width).ceil() as usize).clamp(1, max_bins)
        } else {
            1
        };
        let step = span / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * step).collect();
        let mut counts = vec![0usize; bins];
        for &v in &sorted {
            if v < lo || v > hi {
                continue;
            }
            let b = (((v - lo) / step) as usize).min(bins - 1);
            counts[b] += 1;
        }
        let total = sorted.len().max(1) as f64;
        let density = counts.iter().map(|&c| c as f64 / (total * step)).collect();
        Histogram { edges, density }
    }
}

/// Spectra of all slices plus the outlier summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub n: usize,
    pub k: usize,
    /// `n / k`.
    pub gamma: f64,
    pub slices: Vec<SliceSpectrum>,
    pub estimator: OutlierEstimator,
    pub outlier_peak: f64,
    /// `|outlier_peak - n/4|`.
    pub mp_distance: f64,
    pub bulk_histogram: Histogram,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SpectrumResult {
    /// Every eigenvalue, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.slices.iter().flat_map(|s| s.eigenvalues.iter().copied()).collect();
        all.sort_unstable_by(f64::total_cmp);
        all
    }

    /// Eigenvalues other than each slice's largest, ascending.
    pub fn bulk(&self) -> Vec<f64> {
        let mut bulk: Vec<f64> = self
            .slices
            .iter()
            .flat_map(|s| s.eigenvalues[..s.eigenvalues.len() - 1].iter().copied())
            .collect();
        bulk.sort_unstable_by(f64::total_cmp);
        bulk
    }

    pub fn outliers(&self) -> Vec<f64> {
        self.slices.iter().map(SliceSpectrum::outlier).collect()
    }
}

const MAX_HISTOGRAM_BINS: usize = 2000;

fn slice_spectrum(index: usize, slice: &SliceView<'_>) -> Result<SliceSpectrum> {
    let eigenvalues = symmetric_eigenvalues(&slice.gram())?;
    Ok(SliceSpectrum {
        index,
        eigenvalues,
        ones: slice.ones(),
    })
}

/// Eigenvalues of `(1/k) X^T X` for every slice and the outlier statistics.
pub fn gram_spectrum(slices: &[SliceView<'_>], estimator: OutlierEstimator) -> Result<SpectrumResult> {
    let first = slices
        .first()
        .ok_or_else(|| Error::InvalidArgument("no slices to analyse".into()))?;
    let (k, n) = (first.k(), first.n());
    if slices.iter().any(|s| s.k() != k || s.n() != n) {
        return Err(Error::InvalidArgument("slices have differing shapes".into()));
    }
    let results: Vec<Result<SliceSpectrum>> = slices
        .par_iter()
        .enumerate()
        .map(|(i, s)| slice_spectrum(i, s))
        .collect();
    let mut spectra = Vec::with_capacity(results.len());
    let mut warnings = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(s) => spectra.push(s),
            Err(e) => warnings.push(format!("slice {i} skipped: {e}")),
        }
    }
    summarize(n, k, spectra, estimator, warnings)
}

fn summarize(
    n: usize,
    k: usize,
    slices: Vec<SliceSpectrum>,
    estimator: OutlierEstimator,
    warnings: Vec<String>,
) -> Result<SpectrumResult> {
    if slices.is_empty() {
        return Err(Error::InvalidArgument("every slice failed to converge".into()));
    }
    let mut outliers: Vec<f64> = slices.iter().map(SliceSpectrum::outlier).collect();
    let outlier_peak = match estimator {
        OutlierEstimator::Median => median_in_place(&mut outliers).unwrap(),
        OutlierEstimator::Mean => outliers.iter().sum::<f64>() / outliers.len() as f64,
    };
    let gamma = n as f64 / k as f64;
    let mut result = SpectrumResult {
        n,
        k,
        gamma,
        slices,
        estimator,
        outlier_peak,
        mp_distance: (outlier_peak - n as f64 / 4.0).abs(),
        bulk_histogram: Histogram {
            edges: vec![],
            density: vec![],
        },
        warnings,
    };
    let bulk = result.bulk();
    if !bulk.is_empty() {
        let mean = bulk.iter().sum::<f64>() / bulk.len() as f64;
        let edge = if mean > 0.0 && gamma <= 1.0 {
            mean * (1.0 + gamma.sqrt()).powi(2)
        } else {
            0.0
        };
        let top = edge.max(*bulk.last().unwrap());
        let hi = if top > 0.0 { top * 1.05 } else { 1.0 };
        result.bulk_histogram = Histogram::freedman_diaconis(&bulk, 0.0, hi, MAX_HISTOGRAM_BINS);
    }
    Ok(result)
}

/// Streaming spectrum builder: rows arrive in blocks, complete slices are
/// diagonalized as soon as they fill.
#[derive(Debug)]
pub struct SpectrumAccumulator {
    n: usize,
    k: usize,
    buffer: Vec<u8>,
    slices: Vec<SliceSpectrum>,
    warnings: Vec<String>,
    seen: usize,
}

impl SpectrumAccumulator {
    pub fn new(n: usize, k: usize) -> Self {
        SpectrumAccumulator {
            n,
            k,
            buffer: Vec::with_capacity(n * k),
            slices: Vec::new(),
            warnings: Vec::new(),
            seen: 0,
        }
    }

    pub fn push(&mut self, block: &SampleSet) -> Result<()> {
        if block.n_qubits() != self.n {
            return Err(Error::QubitMismatch {
                expected: self.n,
                found: block.n_qubits(),
            });
        }
        for row in block.rows() {
            self.buffer.extend_from_slice(row);
            if self.buffer.len() == self.n * self.k {
                let view = SliceView::new(&self.buffer, self.k, self.n)?;
                match slice_spectrum(self.seen, &view) {
                    Ok(s) => self.slices.push(s),
                    Err(e) => self.warnings.push(format!("slice {} skipped: {e}", self.seen)),
                }
                self.seen += 1;
                self.buffer.clear();
            }
        }
        Ok(())
    }

    pub fn finish(self, estimator: OutlierEstimator) -> Result<SpectrumResult> {
        if self.seen == 0 {
            return Err(Error::TooFewRows {
                rows: self.buffer.len() / self.n,
                needed: self.k,
            });
        }
        summarize(self.n, self.k, self.slices, estimator, self.warnings)
    }
}

/// Marchenko–Pastur fit of the bulk eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BulkFit {
    /// Fitted by matching the bulk mean, which equals `sigma2` under the law.
    pub sigma2: f64,
    pub gamma: f64,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    /// KS distance between the empirical bulk CDF and the fitted law.
    pub ks_distance: f64,
    /// Fraction of bulk eigenvalues inside `[lambda_minus, lambda_plus]`.
    pub in_support_fraction: f64,
    pub bulk_count: usize,
}

pub const MIN_BULK_EIGENVALUES: usize = 100;

pub fn bulk_fit_report(spectrum: &SpectrumResult) -> Result<BulkFit> {
    let bulk = spectrum.bulk();
    if bulk.len() < MIN_BULK_EIGENVALUES {
        return Err(Error::DegenerateBulk(format!(
            "{} bulk eigenvalues, need at least {MIN_BULK_EIGENVALUES}",
            bulk.len()
        )));
    }
    let (lo, hi) = (bulk[0], bulk[bulk.len() - 1]);
    let sigma2 = bulk.iter().sum::<f64>() / bulk.len() as f64;
    if hi - lo <= 1e-12 * hi.abs().max(1.0) || sigma2 <= 0.0 {
        return Err(Error::DegenerateBulk(format!(
            "bulk eigenvalues collapse to {lo:.3e}"
        )));
    }
    let mp = MarchenkoPastur::new(sigma2, spectrum.gamma.min(1.0))?;
    let (lambda_minus, lambda_plus) = mp.support();
    let ks_distance = ks_statistic(&bulk, |x| mp.cdf(x));
    let inside = bulk
        .iter()
        .filter(|&&x| x >= lambda_minus && x <= lambda_plus)
        .count();
    Ok(BulkFit {
        sigma2,
        gamma: mp.gamma(),
        lambda_minus,
        lambda_plus,
        ks_distance,
        in_support_fraction: inside as f64 / bulk.len() as f64,
        bulk_count: bulk.len(),
    })
}
