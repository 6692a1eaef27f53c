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


//! Acceptance suite. Prints one line per criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rcs_core::circuit::{haar_unitary, unitary_error};
use rcs_core::linalg::householder_qr;
use rcs_core::nist::{monobit, run_battery_on_stream, runs, DEFAULT_ALPHA};
use rcs_core::numeric::ks_statistic;
use rcs_core::{
    build_circuit, bulk_fit_report, generate_spoof, generate_uniform, gram_spectrum, heat_map, linear_xeb,
    parse_sample_file, sample_bitstrings, sample_wasserstein, simulate, slice_matrices, wasserstein, BulkFit,
    CircuitSpec, OutlierEstimator, ProbTable, SampleSet, SpectrumResult,
};

const N_BIG: usize = 53;
const M_BIG: usize = 1_000_000;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    skipped: bool,
    detail: String,
}

fn pass_if(passed: bool, detail: String) -> Outcome {
    Outcome {
        passed,
        skipped: false,
        detail,
    }
}

fn uniform_big() -> &'static SampleSet {
    static CELL: OnceLock<SampleSet> = OnceLock::new();
    CELL.get_or_init(|| generate_uniform(N_BIG, M_BIG, 2024).unwrap())
}

fn spectrum_of(sample: &SampleSet) -> SpectrumResult {
    gram_spectrum(&slice_matrices(sample, 2 * sample.n_qubits()).unwrap(), OutlierEstimator::Median).unwrap()
}

/// Uniform spectrum computed on a single worker, with its wall time.
fn uniform_spectrum() -> &'static (SpectrumResult, BulkFit, Duration) {
    static CELL: OnceLock<(SpectrumResult, BulkFit, Duration)> = OnceLock::new();
    CELL.get_or_init(|| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        pool.install(|| {
            let start = Instant::now();
            let sample = generate_uniform(N_BIG, M_BIG, 2024).unwrap();
            let spec = spectrum_of(&sample);
            let fit = bulk_fit_report(&spec).unwrap();
            (spec, fit, start.elapsed())
        })
    })
}

fn circuit_table(n: usize, m: usize, seed: u64) -> ProbTable {
    let c = build_circuit(&CircuitSpec::new(n, m, seed)).unwrap();
    simulate(&c.gates, n).unwrap().probabilities()
}

fn uniform_xeb_zero_law() -> Outcome {
    let m = 100_000;
    let table = circuit_table(20, 14, 1);
    let samples = [
        generate_uniform(24, m, 1).unwrap(),
        generate_spoof(24, m, 2, 8, 0).unwrap(),
        sample_bitstrings(&table, m, 3).unwrap(),
    ];
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for s in &samples {
        let uniform = ProbTable::uniform(s.n_qubits()).unwrap();
        let start = Instant::now();
        let f = linear_xeb(s, &uniform).unwrap().fidelity;
        slowest = slowest.max(start.elapsed());
        worst = worst.max(f.abs());
    }
    pass_if(
        worst <= 1e-9 && slowest < Duration::from_secs(1),
        format!("max |F| = {worst:.1e}, slowest call {slowest:.2?}"),
    )
}

fn self_sampling_xeb() -> Outcome {
    let start = Instant::now();
    let mut sum = 0.0;
    let mut worst_z = 0.0f64;
    for seed in 0..10u64 {
        let table = circuit_table(12, 14, seed);
        let exact = 4096.0 * table.probs().iter().map(|p| p * p).sum::<f64>() - 1.0;
        let r = linear_xeb(&sample_bitstrings(&table, 100_000, 1000 + seed).unwrap(), &table).unwrap();
        sum += r.fidelity;
        worst_z = worst_z.max((r.fidelity - exact).abs() / r.std_error);
    }
    let mean = sum / 10.0;
    let elapsed = start.elapsed();
    pass_if(
        (mean - 1.0).abs() <= 0.02 && worst_z <= 3.0 && elapsed < Duration::from_secs(60),
        format!("mean F over 10 circuits = {mean:.4}, max |F - F_exact| = {worst_z:.2} std_error, {elapsed:.1?}"),
    )
}

fn porter_thomas() -> Outcome {
    let start = Instant::now();
    let table = circuit_table(12, 14, 0);
    let mut scaled: Vec<f64> = table.probs().iter().map(|p| p * 4096.0).collect();
    scaled.sort_unstable_by(f64::total_cmp);
    let pt = ks_statistic(&scaled, |x| 1.0 - (-x).exp());

    let dim = 16;
    let mut first: Vec<f64> = (0..10_000u64)
        .map(|seed| haar_unitary(dim, seed).unwrap()[(0, 0)].norm_sqr())
        .collect();
    first.sort_unstable_by(f64::total_cmp);
    let haar = ks_statistic(&first, |p| 1.0 - (1.0 - p).powi(dim as i32 - 1));
    let elapsed = start.elapsed();
    pass_if(
        pt < 0.02 && haar < 0.02 && elapsed < Duration::from_secs(120),
        format!("KS circuit = {pt:.4}, KS Haar N=16 = {haar:.4}, {elapsed:.1?}"),
    )
}

fn mp_distance_uniform() -> Outcome {
    let (spec, fit, elapsed) = uniform_spectrum();
    pass_if(
        (spec.mp_distance - 0.36).abs() <= 0.15
            && fit.in_support_fraction >= 0.99
            && *elapsed < Duration::from_secs(600),
        format!(
            "mp_distance = {:.4} (peak {:.4}), in-support = {:.4}, single worker {:.1?}",
            spec.mp_distance, spec.outlier_peak, fit.in_support_fraction, elapsed
        ),
    )
}

fn trace_identity() -> Outcome {
    let (spec, _, _) = uniform_spectrum();
    let worst = spec
        .slices
        .iter()
        .map(|s| (s.trace() - s.ones as f64 / spec.k as f64).abs())
        .fold(0.0, f64::max);
    pass_if(
        spec.slices.len() >= 1000 && worst <= 1e-8,
        format!("{} slices, max deviation {worst:.1e}", spec.slices.len()),
    )
}

fn spoof_separation() -> Outcome {
    let spoof = generate_spoof(N_BIG, M_BIG, 77, 8, 0).unwrap();
    let h = heat_map(&spoof);
    let fixed = h.per_qubit_mean.iter().filter(|&&v| v == 0.0 || v == 1.0).count();
    let (uniform_spec, _, _) = uniform_spectrum();
    let delta = spectrum_of(&spoof).mp_distance - uniform_spec.mp_distance;
    let other = generate_uniform(N_BIG, M_BIG, 99).unwrap();
    let w_spoof = sample_wasserstein(&spoof, uniform_big(), 1.0).unwrap().distance;
    let w_null = sample_wasserstein(&other, uniform_big(), 1.0).unwrap().distance;
    pass_if(
        fixed == 8 && h.per_qubit_mean[..8].iter().all(|&v| v == 0.0) && delta >= 0.5 && w_spoof >= 10.0 * w_null,
        format!("{fixed} fixed columns, delta mp = {delta:.3}, W1 spoof = {w_spoof:.4}, W1 null = {w_null:.2e}"),
    )
}

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

fn wasserstein_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_oracle = 0.0f64;
    for _ in 0..200 {
        let m = rng.random_range(1..=6);
        let a: Vec<f64> = (0..m).map(|_| rng.random()).collect();
        let b: Vec<f64> = (0..m).map(|_| rng.random()).collect();
        let brute = permutations(m)
            .iter()
            .map(|p| p.iter().enumerate().map(|(i, &j)| (a[i] - b[j]).abs()).sum::<f64>() / m as f64)
            .fold(f64::INFINITY, f64::min);
        worst_oracle = worst_oracle.max((wasserstein(&a, &b, 1.0).unwrap().distance - brute).abs());
    }
    let mut violations = 0;
    for _ in 0..1000 {
        let m = rng.random_range(1..=50);
        let mut draw = || -> Vec<f64> { (0..m).map(|_| rng.random()).collect() };
        let (x, y, z) = (draw(), draw(), draw());
        let d = |p: &[f64], q: &[f64]| wasserstein(p, q, 1.0).unwrap().distance;
        let ok = d(&x, &x) <= 1e-12
            && d(&x, &y) >= 0.0
            && (d(&x, &y) - d(&y, &x)).abs() <= 1e-12
            && d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-12;
        violations += (!ok) as usize;
    }
    pass_if(
        worst_oracle <= 1e-12 && violations == 0,
        format!("max |W1 - brute force| = {worst_oracle:.1e} over 200, {violations} axiom violations over 1000"),
    )
}

fn nist_battery() -> Outcome {
    let clean = (0..10u64)
        .filter(|&seed| {
            let bits = generate_uniform(100, 10_000, seed).unwrap();
            run_battery_on_stream(bits.bits(), DEFAULT_ALPHA).iter().all(|o| o.passed)
        })
        .count();
    let zeros = vec![0u8; 10_000];
    let zeros_fail = !run_battery_on_stream(&zeros, DEFAULT_ALPHA)
        .iter()
        .find(|o| o.test_name == "monobit")
        .unwrap()
        .passed;
    let alt: Vec<u8> = (0..10_000).map(|i| (i % 2) as u8).collect();
    let alt_mono = monobit(&alt).p_value;
    let alt_runs = runs(&alt).p_value;
    let example = monobit(&[1, 0, 1, 1, 0, 1, 0, 1, 0, 1]).p_value;
    pass_if(
        clean >= 8 && zeros_fail && alt_mono == 1.0 && alt_runs < DEFAULT_ALPHA && (example - 0.5271).abs() <= 1e-3,
        format!(
            "{clean}/10 streams pass all tests, zeros fail monobit = {zeros_fail}, alternating monobit p = {alt_mono}, runs p = {alt_runs:.1e}, example p = {example:.6}"
        ),
    )
}

fn nearby_unitary(u: &DMatrix<Complex64>, eps: f64, seed: u64) -> DMatrix<Complex64> {
    let z = haar_unitary(u.nrows(), seed).unwrap();
    let (mut q, r) = householder_qr(&(u + z * Complex64::new(eps, 0.0)));
    for j in 0..q.ncols() {
        let lambda = r[(j, j)] / r[(j, j)].norm();
        for i in 0..q.nrows() {
            q[(i, j)] *= lambda;
        }
    }
    q
}

fn gate_error_inequality() -> Outcome {
    let mut violations = 0;
    let mut tightest = 0.0f64;
    for trial in 0..100u64 {
        let dim = [2usize, 4, 8, 16][trial as usize % 4];
        let u = haar_unitary(dim, trial).unwrap();
        let v = if trial % 4 == 3 {
            haar_unitary(dim, 5000 + trial).unwrap()
        } else {
            nearby_unitary(&u, 0.02 * (trial % 10 + 1) as f64, 9000 + trial)
        };
        let e = unitary_error(&u, &v).unwrap();
        let worst = u
            .column(0)
            .iter()
            .zip(v.column(0).iter())
            .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
            .fold(0.0, f64::max);
        tightest = tightest.max(worst / (2.0 * e));
        violations += (worst > 2.0 * e) as usize;
    }
    pass_if(violations == 0, format!("{violations} violations in 100 pairs, max |dp| / 2E = {tightest:.3}"))
}

fn external_datasets() -> Outcome {
    let (Ok(hw), Ok(tn)) = (std::env::var("RCS_HARDWARE_M20"), std::env::var("RCS_SPOOF_M20")) else {
        return Outcome {
            passed: true,
            skipped: true,
            detail: "set RCS_HARDWARE_M20 and RCS_SPOOF_M20 to the m = 20 sample files".into(),
        };
    };
    let load = |p: &str| parse_sample_file(p, None).and_then(|s| if s.n_records() > M_BIG { s.truncated(M_BIG) } else { Ok(s) });
    let (hw, tn) = match (load(&hw), load(&tn)) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => return pass_if(false, format!("load failed: {:?} {:?}", a.err(), b.err())),
    };
    let (p_hw, p_tn) = (heat_map(&hw).p1, heat_map(&tn).p1);
    let classical = generate_uniform(hw.n_qubits(), hw.n_records(), 2024).unwrap();
    let w_hw = sample_wasserstein(&hw, &classical, 1.0).unwrap().distance;
    let w_tn = sample_wasserstein(&tn, &classical, 1.0).unwrap().distance;
    pass_if(
        (p_hw - 0.48360).abs() <= 1e-5 && (p_tn - 0.50004).abs() <= 1e-5 && w_tn < w_hw && w_hw <= 0.33,
        format!("p1 = {p_hw:.5} / {p_tn:.5}, W1 vs classical = {w_hw:.4} / {w_tn:.4}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("uniform-xeb-zero-law", uniform_xeb_zero_law),
        ("self-sampling-xeb", self_sampling_xeb),
        ("porter-thomas-and-haar", porter_thomas),
        ("mp-distance-uniform-bits", mp_distance_uniform),
        ("trace-identity", trace_identity),
        ("spoof-separation", spoof_separation),
        ("wasserstein-oracle", wasserstein_oracle),
        ("nist-battery", nist_battery),
        ("gate-error-inequality", gate_error_inequality),
        ("external-datasets", external_datasets),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let tag = match (out.skipped, out.passed) {
            (true, _) => "SKIP",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        failures += (!out.passed) as usize;
        println!("[{tag}] {:>2} {name}: {} ({:.1?})", i + 1, out.detail, start.elapsed());
    }
    println!("{} of {} criteria failed", failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
