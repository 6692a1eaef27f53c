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


use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rcs_core::spectral::SpectrumAccumulator;
use rcs_core::{
    bulk_fit_report, generate_spoof, generate_uniform, gram_spectrum, heat_map, slice_matrices, OutlierEstimator,
    SampleReader, SampleSet, Source,
};

fn biased(n: usize, m: usize, p: f64, seed: u64) -> SampleSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits = (0..n * m).map(|_| rng.random_bool(p) as u8).collect();
    SampleSet::from_flat(bits, n, format!("biased-{p}"), Source::Unknown).unwrap()
}

fn peak(sample: &SampleSet, k: usize) -> f64 {
    gram_spectrum(&slice_matrices(sample, k).unwrap(), OutlierEstimator::Median)
        .unwrap()
        .outlier_peak
}

#[test]
fn psd_and_trace_over_many_slices() {
    let n = 24;
    let k = 2 * n;
    let sample = generate_uniform(n, k * 1200, 17).unwrap();
    let spec = gram_spectrum(&slice_matrices(&sample, k).unwrap(), OutlierEstimator::Median).unwrap();
    assert_eq!(spec.slices.len(), 1200);
    for s in &spec.slices {
        assert!(s.eigenvalues.iter().all(|&v| v >= -1e-10));
        assert!((s.trace() - s.ones as f64 / k as f64).abs() <= 1e-8);
    }
}

#[test]
fn outlier_grows_with_column_bias() {
    let n = 20;
    let peaks: Vec<f64> = [0.3, 0.4, 0.5, 0.6, 0.7, 0.8]
        .iter()
        .map(|&p| peak(&biased(n, 40 * 300, p, 5), 40))
        .collect();
    assert!(peaks.windows(2).all(|w| w[1] > w[0]), "{peaks:?}");
    // rank-one term n p^2 dominates
    assert!((peaks[2] - n as f64 / 4.0).abs() < 1.0);
}

#[test]
fn column_permutation_invariance() {
    let n = 12;
    let sample = generate_spoof(n, 24 * 50, 4, 3, 1).unwrap();
    let perm: Vec<usize> = vec![5, 0, 11, 3, 7, 1, 9, 2, 10, 4, 8, 6];
    let rows: Vec<Vec<u8>> = sample.rows().map(|r| perm.iter().map(|&j| r[j]).collect()).collect();
    let permuted = SampleSet::from_rows(&rows, "perm", Source::Unknown).unwrap();

    let a = gram_spectrum(&slice_matrices(&sample, 24).unwrap(), OutlierEstimator::Median).unwrap();
    let b = gram_spectrum(&slice_matrices(&permuted, 24).unwrap(), OutlierEstimator::Median).unwrap();
    for (x, y) in a.slices.iter().zip(&b.slices) {
        for (u, v) in x.eigenvalues.iter().zip(&y.eigenvalues) {
            assert!((u - v).abs() < 1e-10);
        }
    }
    let (ha, hb) = (heat_map(&sample), heat_map(&permuted));
    for (j, &src) in perm.iter().enumerate() {
        assert_eq!(hb.per_qubit_mean[j], ha.per_qubit_mean[src]);
    }
}

#[test]
fn uniform_sliced_mean_has_no_structure() {
    let n = 30;
    let sample = generate_uniform(n, n * 2000, 8).unwrap();
    let h = heat_map(&sample);
    let sigma = 0.5 / (h.slices as f64).sqrt();
    let worst = h
        .sliced_mean
        .as_ref()
        .unwrap()
        .iter()
        .map(|v| (v - 0.5).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 5.0 * sigma, "{worst} > 5 * {sigma}");
}

#[test]
fn spoof_columns_are_exact_and_rest_binomial() {
    let (n, m) = (40, 50_000);
    let h = heat_map(&generate_spoof(n, m, 2, 8, 0).unwrap());
    assert!(h.per_qubit_mean[..8].iter().all(|&v| v == 0.0));
    let sigma = 0.5 / (m as f64).sqrt();
    assert!(h.per_qubit_mean[8..].iter().all(|v| (v - 0.5).abs() <= 5.0 * sigma));
}

#[test]
fn bulk_of_uniform_bits_follows_mp() {
    let n = 30;
    let sample = generate_uniform(n, 2 * n * 400, 12).unwrap();
    let spec = gram_spectrum(&slice_matrices(&sample, 2 * n).unwrap(), OutlierEstimator::Median).unwrap();
    let fit = bulk_fit_report(&spec).unwrap();
    assert!((fit.sigma2 - 0.25).abs() < 0.01, "{fit:?}");
    assert!(fit.in_support_fraction > 0.97, "{fit:?}");
    assert!(fit.ks_distance < 0.05, "{fit:?}");
}

#[test]
fn streamed_file_matches_in_memory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    let sample = generate_uniform(16, 32 * 40 + 7, 3).unwrap();
    rcs_core::samples::write_sample_file(&sample, &path).unwrap();

    let mut reader = SampleReader::open(&path, None).unwrap();
    let mut acc = SpectrumAccumulator::new(16, 32);
    while let Some(block) = reader.next_block(100, "blk").unwrap() {
        acc.push(&block).unwrap();
    }
    let streamed = acc.finish(OutlierEstimator::Median).unwrap();
    let direct = gram_spectrum(&slice_matrices(&sample, 32).unwrap(), OutlierEstimator::Median).unwrap();
    assert_eq!(streamed.outlier_peak, direct.outlier_peak);
    assert_eq!(streamed.slices.len(), 40);
}
