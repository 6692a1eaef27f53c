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

//! Benchmark bodies, kept in a library so `benches/` stays a thin entry point.

use criterion::{BenchmarkId, Criterion, Throughput};
use rcs_core::nist::run_battery_on_stream;
use rcs_core::{
    build_circuit, generate_uniform, gram_spectrum, simulate, slice_matrices, to_values, wasserstein, CircuitSpec,
    OutlierEstimator,
};
use std::hint::black_box;

pub fn simulator(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    for n in [12usize, 16, 20] {
        let circuit = build_circuit(&CircuitSpec::new(n, 14, 0)).unwrap();
        group.throughput(Throughput::Elements(circuit.gates.len() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &circuit, |b, circuit| {
            b.iter(|| simulate(black_box(&circuit.gates), n).unwrap())
        });
    }
    group.finish();
}

pub fn spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("gram_spectrum");
    group.sample_size(10);
    let n = 53;
    for m in [10_600usize, 106_000] {
        let sample = generate_uniform(n, m, 1).unwrap();
        group.throughput(Throughput::Elements(m as u64));
        group.bench_with_input(BenchmarkId::from_parameter(m), &sample, |b, s| {
            b.iter(|| {
                let slices = slice_matrices(s, 2 * n).unwrap();
                gram_spectrum(&slices, OutlierEstimator::Median).unwrap()
            })
        });
    }
    group.finish();
}

pub fn transport(c: &mut Criterion) {
    let mut group = c.benchmark_group("wasserstein");
    for m in [10_000usize, 1_000_000] {
        let a = to_values(&generate_uniform(53, m, 1).unwrap()).values;
        let b = to_values(&generate_uniform(53, m, 2).unwrap()).values;
        group.throughput(Throughput::Elements(m as u64));
        group.bench_with_input(BenchmarkId::from_parameter(m), &(a, b), |bench, (a, b)| {
            bench.iter(|| wasserstein(black_box(a), black_box(b), 1.0).unwrap())
        });
    }
    group.finish();
}

pub fn battery(c: &mut Criterion) {
    let mut group = c.benchmark_group("nist_battery");
    group.sample_size(20);
    let stream = generate_uniform(100, 10_000, 3).unwrap();
    group.throughput(Throughput::Elements(stream.bits().len() as u64));
    group.bench_function("1e6_bits", |b| b.iter(|| run_battery_on_stream(black_box(stream.bits()), 0.01)));
    group.finish();
}
