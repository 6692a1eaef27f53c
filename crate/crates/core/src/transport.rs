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

//! Optimal-transport distance between samples mapped to `[0, 1)`.
//!
//! Each record becomes `x = sum_j b_j 2^-(j+1)` with qubit 0 as the most
//! significant bit. On the line the optimal coupling of two equal-size
//! empirical measures pairs order statistics, so
//! `W_alpha = ((1/M) sum_i |a_(i) - b_(i)|^alpha)^(1/alpha)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::samples::SampleSet;

/// Scalar embedding of a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueSeries {
    pub values: Vec<f64>,
    pub n_source: usize,
}

/// Map each record to its binary fraction. Bits past the 53rd fall below
/// double precision and are dropped.
pub fn to_values(sample: &SampleSet) -> ValueSeries {
    let weights: Vec<f64> = (0..sample.n_qubits()).map(|j| 0.5f64.powi(j as i32 + 1)).collect();
    let values = sample
        .rows()
        .map(|row| {
            row.iter()
                .zip(&weights)
                .filter(|(&b, _)| b == 1)
                .map(|(_, w)| w)
                .sum()
        })
        .collect();
    ValueSeries {
        values,
        n_source: sample.n_qubits(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WassersteinResult {
    pub distance: f64,
    pub alpha: f64,
    #[serde(rename = "M_used")]
    pub m_used: usize,
    /// Set when the longer series was cut to the shorter length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated_from: Option<usize>,
    pub normalization: String,
}

pub const NORMALIZATION: &str = "uniform-1/M";

/// `W_alpha` between the empirical measures of `a` and `b`.
///
/// Series of unequal length are both cut to the shorter length (keeping the
/// leading records) and the cut is reported in `truncated_from`.
pub fn wasserstein(a: &[f64], b: &[f64], alpha: f64) -> Result<WassersteinResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySeries);
    }
    if !alpha.is_finite() || alpha < 1.0 {
        return Err(Error::InvalidArgument(format!("alpha must be >= 1, got {alpha}")));
    }
    let m = a.len().min(b.len());
    let truncated_from = (a.len() != b.len()).then(|| a.len().max(b.len()));
    if let Some(from) = truncated_from {
        log::warn!("wasserstein: truncating series of length {from} to {m}");
    }
    let mut xs = a[..m].to_vec();
    let mut ys = b[..m].to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    ys.sort_unstable_by(f64::total_cmp);
    let mut acc = CompensatedSum::new();
    for (x, y) in xs.iter().zip(&ys) {
        let d = (x - y).abs();
        acc.add(if alpha == 1.0 { d } else { d.powf(alpha) });
    }
    let mean = acc.value() / m as f64;
    let distance = if alpha == 1.0 { mean } else { mean.powf(1.0 / alpha) };
    Ok(WassersteinResult {
        distance,
        alpha,
        m_used: m,
        truncated_from,
        normalization: NORMALIZATION.to_string(),
    })
}

/// `W_alpha` between two samples after the binary-fraction embedding.
pub fn sample_wasserstein(a: &SampleSet, b: &SampleSet, alpha: f64) -> Result<WassersteinResult> {
    wasserstein(&to_values(a).values, &to_values(b).values, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{generate_uniform, Source};
    use proptest::prelude::*;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn brute_force(a: &[f64], b: &[f64], alpha: f64) -> f64 {
        permutations(a.len())
            .iter()
            .map(|p| {
                let cost: f64 = p.iter().enumerate().map(|(i, &j)| (a[i] - b[j]).abs().powf(alpha)).sum();
                (cost / a.len() as f64).powf(1.0 / alpha)
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn binary_fraction_embedding() {
        let s = SampleSet::from_rows(&[vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 0]], "t", Source::Unknown).unwrap();
        assert_eq!(to_values(&s).values, vec![0.625, 0.375, 0.0]);
    }

    #[test]
    fn matches_brute_force_coupling() {
        let a = [0.1, 0.9, 0.4, 0.35, 0.7];
        let b = [0.2, 0.0, 0.95, 0.5, 0.55];
        for alpha in [1.0, 1.5, 2.0, 3.0] {
            let w = wasserstein(&a, &b, alpha).unwrap().distance;
            assert!((w - brute_force(&a, &b, alpha)).abs() < 1e-12);
        }
    }

    #[test]
    fn point_masses() {
        let w = wasserstein(&[0.25; 4], &[0.75; 4], 2.0).unwrap();
        assert!((w.distance - 0.5).abs() < 1e-15);
        assert_eq!(w.normalization, "uniform-1/M");
    }

    #[test]
    fn truncation_is_reported() {
        let w = wasserstein(&[0.0, 0.5, 1.0], &[0.0, 0.5], 1.0).unwrap();
        assert_eq!(w.m_used, 2);
        assert_eq!(w.truncated_from, Some(3));
        assert_eq!(w.distance, 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(wasserstein(&[], &[0.1], 1.0), Err(Error::EmptySeries)));
        assert!(wasserstein(&[0.1], &[0.1], 0.5).is_err());
        assert!(wasserstein(&[0.1], &[0.1], f64::NAN).is_err());
    }

    #[test]
    fn independent_uniform_samples_are_close() {
        let a = generate_uniform(20, 20_000, 1).unwrap();
        let b = generate_uniform(20, 20_000, 2).unwrap();
        let w = sample_wasserstein(&a, &b, 1.0).unwrap().distance;
        assert!(w < 0.01, "{w}");
    }

    proptest! {
        #[test]
        fn brute_force_small(
            a in prop::collection::vec(0.0f64..1.0, 1..6),
            seed in any::<u64>(),
            alpha in 1.0f64..4.0,
        ) {
            let b: Vec<f64> = a.iter().enumerate()
                .map(|(i, x)| (x * 7.3 + i as f64 * 0.17 + (seed % 97) as f64 * 0.011) % 1.0)
                .collect();
            let w = wasserstein(&a, &b, alpha).unwrap().distance;
            prop_assert!((w - brute_force(&a, &b, alpha)).abs() < 1e-12);
        }

        #[test]
        fn metric_axioms(
            a in prop::collection::vec(0.0f64..1.0, 8),
            b in prop::collection::vec(0.0f64..1.0, 8),
            c in prop::collection::vec(0.0f64..1.0, 8),
            alpha in 1.0f64..3.0,
        ) {
            let d = |x: &[f64], y: &[f64]| wasserstein(x, y, alpha).unwrap().distance;
            prop_assert!(d(&a, &a).abs() < 1e-12);
            prop_assert!((d(&a, &b) - d(&b, &a)).abs() < 1e-12);
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
        }

        #[test]
        fn translation_shifts_by_at_most_offset(
            a in prop::collection::vec(0.0f64..0.5, 1..20),
            t in 0.0f64..0.5,
        ) {
            let b: Vec<f64> = a.iter().map(|x| x + t).collect();
            let w = wasserstein(&a, &b, 2.0).unwrap().distance;
            prop_assert!((w - t).abs() < 1e-12);
        }
    }
}
