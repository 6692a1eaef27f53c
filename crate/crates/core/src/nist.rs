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

//! A six-test subset of the NIST SP800-22 battery.
//!
//! Every test reads the row-major concatenation of a sample's records: the
//! first record's bits, then the second's, and so on, exactly as the file is
//! read top to bottom. Cumulative sums contributes a forward and a backward
//! outcome, so a full battery yields seven outcomes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use libm::erfc;
use statrs::function::gamma::gamma_ur;

use crate::samples::SampleSet;

pub const DEFAULT_ALPHA: f64 = 0.01;
pub const BLOCK_FREQUENCY_LEN: usize = 128;
pub const APPROXIMATE_ENTROPY_M: usize = 2;

/// Minimum stream lengths, following the SP800-22 input-size recommendations.
pub const MIN_MONOBIT: usize = 100;
pub const MIN_BLOCK_FREQUENCY: usize = 128;
pub const MIN_RUNS: usize = 100;
pub const MIN_LONGEST_RUN: usize = 128;
pub const MIN_CUSUM: usize = 100;
/// SP800-22 asks for `m < floor(log2 n) - 5`; for `m = 2` that is `n >= 256`.
pub const MIN_APPROXIMATE_ENTROPY: usize = 256;

/// Raw statistic and p-value of one test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestStat {
    pub statistic: f64,
    pub p_value: f64,
}

impl TestStat {
    fn new(statistic: f64, p_value: f64) -> Self {
        TestStat {
            statistic,
            p_value: p_value.clamp(0.0, 1.0),
        }
    }
}

/// Outcome of one test at significance `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub test_name: String,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    /// `p_value >= alpha`; always false for a skipped test.
    pub passed: bool,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl TestOutcome {
    pub fn from_stat(name: &str, stat: TestStat, alpha: f64) -> Self {
        TestOutcome {
            test_name: name.to_string(),
            statistic: Some(stat.statistic),
            p_value: Some(stat.p_value),
            passed: stat.p_value >= alpha,
            alpha,
            skipped: None,
        }
    }

    pub fn skipped(name: &str, reason: String, alpha: f64) -> Self {
        TestOutcome {
            test_name: name.to_string(),
            statistic: None,
            p_value: None,
            passed: false,
            alpha,
            skipped: Some(reason),
        }
    }

    pub fn is_skipped(&self) -> bool {
        self.skipped.is_some()
    }
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn ones(bits: &[u8]) -> usize {
    bits.iter().map(|&b| b as usize).sum()
}

/// Frequency (monobit): `p = erfc(|S| / sqrt(2n))` with `S = sum(2 b - 1)`.
pub fn monobit(bits: &[u8]) -> TestStat {
    let n = bits.len() as f64;
    let s = 2.0 * ones(bits) as f64 - n;
    let s_obs = s.abs() / n.sqrt();
    TestStat::new(s_obs, erfc(s_obs / std::f64::consts::SQRT_2))
}

/// Frequency within blocks of `block_len`; the incomplete tail is dropped.
pub fn block_frequency(bits: &[u8], block_len: usize) -> TestStat {
    let blocks = bits.len() / block_len;
    let chi2 = 4.0
        * block_len as f64
        * bits
            .chunks_exact(block_len)
            .map(|b| {
                let pi = ones(b) as f64 / block_len as f64;
                (pi - 0.5) * (pi - 0.5)
            })
            .sum::<f64>();
    TestStat::new(chi2, gamma_ur(blocks as f64 / 2.0, chi2 / 2.0))
}

/// Runs test, including the frequency prerequisite `|pi - 1/2| < 2/sqrt(n)`.
pub fn runs(bits: &[u8]) -> TestStat {
    let n = bits.len() as f64;
    let pi = ones(bits) as f64 / n;
    let v_obs = 1 + bits.windows(2).filter(|w| w[0] != w[1]).count();
    if (pi - 0.5).abs() >= 2.0 / n.sqrt() {
        return TestStat::new(v_obs as f64, 0.0);
    }
    let q = pi * (1.0 - pi);
    let p = erfc((v_obs as f64 - 2.0 * n * q).abs() / (2.0 * (2.0 * n).sqrt() * q));
    TestStat::new(v_obs as f64, p)
}

struct LongestRunTable {
    block_len: usize,
    min_class: usize,
    probabilities: &'static [f64],
}

const LONGEST_RUN_8: LongestRunTable = LongestRunTable {
    block_len: 8,
    min_class: 1,
    probabilities: &[0.2148, 0.3672, 0.2305, 0.1875],
};
const LONGEST_RUN_128: LongestRunTable = LongestRunTable {
    block_len: 128,
    min_class: 4,
    probabilities: &[0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124],
};
const LONGEST_RUN_10000: LongestRunTable = LongestRunTable {
    block_len: 10_000,
    min_class: 10,
    probabilities: &[0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727],
};

/// Longest run of ones per block, binned into the tabulated categories.
///
/// Block length is 8, 128 or 10^4 for streams of at least 128, 6272 and
/// 750 000 bits.
pub fn longest_run_of_ones(bits: &[u8]) -> TestStat {
    let table = if bits.len() >= 750_000 {
        &LONGEST_RUN_10000
    } else if bits.len() >= 6272 {
        &LONGEST_RUN_128
    } else {
        &LONGEST_RUN_8
    };
    let k = table.probabilities.len() - 1;
    let mut counts = vec![0usize; k + 1];
    for block in bits.chunks_exact(table.block_len) {
        let (mut run, mut best) = (0usize, 0usize);
        for &b in block {
            run = if b == 1 { run + 1 } else { 0 };
            best = best.max(run);
        }
        let class = best.clamp(table.min_class, table.min_class + k) - table.min_class;
        counts[class] += 1;
    }
    let blocks = (bits.len() / table.block_len) as f64;
    let chi2: f64 = counts
        .iter()
        .zip(table.probabilities)
        .map(|(&v, &pi)| {
            let expected = blocks * pi;
            (v as f64 - expected).powi(2) / expected
        })
        .sum();
    TestStat::new(chi2, gamma_ur(k as f64 / 2.0, chi2 / 2.0))
}

/// Cumulative sums, forward (`true`) or backward over the stream.
pub fn cumulative_sums(bits: &[u8], forward: bool) -> TestStat {
    let n = bits.len() as i64;
    let step = |b: &u8| 2 * (*b as i64) - 1;
    let mut s = 0i64;
    let mut z = 0i64;
    let mut visit = |b: &u8| {
        s += step(b);
        z = z.max(s.abs());
    };
    if forward {
        bits.iter().for_each(&mut visit);
    } else {
        bits.iter().rev().for_each(&mut visit);
    }
    let zf = z as f64;
    let sqrt_n = (n as f64).sqrt();
    // integer bounds truncate toward zero, as in the reference code
    let mut sum1 = 0.0;
    for k in ((-n / z + 1) / 4)..=((n / z - 1) / 4) {
        let k = k as f64;
        sum1 += normal_cdf((4.0 * k + 1.0) * zf / sqrt_n) - normal_cdf((4.0 * k - 1.0) * zf / sqrt_n);
    }
    let mut sum2 = 0.0;
    for k in ((-n / z - 3) / 4)..=((n / z - 1) / 4) {
        let k = k as f64;
        sum2 += normal_cdf((4.0 * k + 3.0) * zf / sqrt_n) - normal_cdf((4.0 * k + 1.0) * zf / sqrt_n);
    }
    TestStat::new(zf, 1.0 - sum1 + sum2)
}

fn phi_entropy(bits: &[u8], m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let n = bits.len();
    let mut counts = vec![0usize; 1 << m];
    let mut pattern = 0usize;
    let mask = (1usize << m) - 1;
    // prime with the first m-1 bits, then wrap around the end
    for &b in &bits[..m - 1] {
        pattern = (pattern << 1) | b as usize;
    }
    for i in 0..n {
        let b = bits[(i + m - 1) % n];
        pattern = ((pattern << 1) | b as usize) & mask;
        counts[pattern] += 1;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            p * p.ln()
        })
        .sum()
}

/// Approximate entropy with block length `m` (overlapping, wrapped).
pub fn approximate_entropy(bits: &[u8], m: usize) -> TestStat {
    let n = bits.len() as f64;
    let apen = phi_entropy(bits, m) - phi_entropy(bits, m + 1);
    let chi2 = 2.0 * n * (std::f64::consts::LN_2 - apen);
    TestStat::new(chi2, gamma_ur((1u64 << (m.max(1) - 1)) as f64, chi2 / 2.0))
}

type TestFn = fn(&[u8]) -> TestStat;

const BATTERY: [(&str, usize, TestFn); 7] = [
    ("monobit", MIN_MONOBIT, monobit),
    ("block_frequency", MIN_BLOCK_FREQUENCY, |b| block_frequency(b, BLOCK_FREQUENCY_LEN)),
    ("runs", MIN_RUNS, runs),
    ("longest_run_of_ones", MIN_LONGEST_RUN, longest_run_of_ones),
    ("cumulative_sums_forward", MIN_CUSUM, |b| cumulative_sums(b, true)),
    ("cumulative_sums_backward", MIN_CUSUM, |b| cumulative_sums(b, false)),
    ("approximate_entropy", MIN_APPROXIMATE_ENTROPY, |b| {
        approximate_entropy(b, APPROXIMATE_ENTROPY_M)
    }),
];

/// Run the battery on the sample's concatenated bit stream.
pub fn run_battery(sample: &SampleSet, alpha: f64) -> Vec<TestOutcome> {
    run_battery_on_stream(sample.bits(), alpha)
}

/// Run the battery on a raw 0/1 stream. Tests whose minimum length exceeds
/// the stream are reported as skipped.
pub fn run_battery_on_stream(bits: &[u8], alpha: f64) -> Vec<TestOutcome> {
    BATTERY
        .par_iter()
        .map(|&(name, min_len, test)| {
            if bits.len() < min_len {
                TestOutcome::skipped(
                    name,
                    format!("stream of {} bits is shorter than the minimum {min_len}", bits.len()),
                    alpha,
                )
            } else {
                TestOutcome::from_stat(name, test(bits), alpha)
            }
        })
        .collect()
}
