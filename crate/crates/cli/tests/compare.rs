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


use rcs_cli::report::render_text;
use rcs_cli::{emit_report, run_compare, CompareOptions, Format, MetricReport, RunConfig};

fn config(text: &str, seed: u64) -> RunConfig {
    toml::from_str::<RunConfig>(text).unwrap().resolve(seed).unwrap()
}

const NO_TIME: CompareOptions = CompareOptions { timestamp: false };

fn json(report: &MetricReport) -> String {
    let mut buf = Vec::new();
    emit_report(report, Format::Json, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

const SYNTHETIC: &str = r#"
metrics = ["heatmap", "spectrum", "wdist"]

[[inputs]]
kind = "uniform"
n = 53
m = 200000
seed = 1
label = "uniform"

[[inputs]]
kind = "uniform"
n = 53
m = 200000
seed = 2
label = "uniform-2"

[[inputs]]
kind = "spoof"
n = 53
m = 200000
prefix = 8
seed = 3
label = "spoof"
"#;

#[test]
fn spoof_is_separated_from_uniform() {
    let report = run_compare(&config(SYNTHETIC, 0), NO_TIME).unwrap();
    let mp = |label: &str| {
        report
            .inputs
            .iter()
            .find(|i| i.label == label)
            .unwrap()
            .spectrum_summary
            .as_ref()
            .unwrap()
            .mp_distance
    };
    assert!(mp("spoof") > mp("uniform"));
    let w = report.wasserstein.as_ref().unwrap();
    assert_eq!(w.normalization, "uniform-1/M");
    let dist = |a: &str, b: &str| {
        w.entries
            .iter()
            .find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
            .unwrap()
            .distance
    };
    assert_eq!(w.entries.len(), 3);
    assert!(dist("uniform", "spoof") > dist("uniform", "uniform-2"));
    let spoof = report.inputs.iter().find(|i| i.label == "spoof").unwrap();
    assert!((spoof.heatmap_summary.as_ref().unwrap().max_column_bias - 0.5).abs() < 1e-15);
}

#[test]
fn reference_restricts_pairs() {
    let text = format!("{SYNTHETIC}\n[params]\nreference = \"uniform\"\nmax_records = 20000\n");
    let report = run_compare(&config(&text, 0), NO_TIME).unwrap();
    let w = report.wasserstein.unwrap();
    assert_eq!(w.entries.len(), 2);
    assert!(w.entries.iter().all(|e| e.a == "uniform" && e.m_used == 20000));
    assert!(report.inputs.iter().all(|i| i.m == Some(20000)));
}

#[test]
fn circuit_self_test_xeb() {
    let text = r#"
metrics = ["xeb", "heatmap"]

[[inputs]]
kind = "circuit"
m = 50000
seed = 5
[inputs.circuit]
n_qubits = 10
m_cycles = 14
seed = 3
"#;
    let report = run_compare(&config(text, 0), NO_TIME).unwrap();
    let xeb = report.inputs[0].xeb.as_ref().unwrap();
    assert_eq!(xeb.ideal, "own-circuit");
    // finite-size circuits scatter around 1 by about sqrt(20 / 2^n)
    assert!((xeb.result.fidelity - 1.0).abs() < 0.5, "{}", xeb.result.fidelity);
    assert!(xeb.result.std_error < 0.02);
    assert_eq!(report.inputs[0].source, rcs_core::Source::Simulator);
}

#[test]
fn explicit_ideal_from_prob_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = rcs_core::CircuitSpec::new(8, 12, 1);
    let c = rcs_core::build_circuit(&spec).unwrap();
    let table = rcs_core::simulate(&c.gates, 8).unwrap().probabilities();
    table.write_binary(dir.path().join("ideal.bin")).unwrap();
    let text = r#"
metrics = ["xeb"]

[ideal]
kind = "prob-file"
path = "ideal.bin"

[[inputs]]
kind = "uniform"
n = 8
m = 1000

[[inputs]]
kind = "uniform"
n = 9
m = 1000
"#;
    let cfg_path = dir.path().join("run.toml");
    std::fs::write(&cfg_path, text).unwrap();
    let cfg = RunConfig::load(&cfg_path).unwrap().resolve(4).unwrap();
    let report = run_compare(&cfg, NO_TIME).unwrap();
    let first = report.inputs[0].xeb.as_ref().unwrap();
    assert!(first.ideal.starts_with("prob-file:"));
    assert!(first.result.fidelity.abs() < 0.2);
    // qubit-count mismatch only affects the second input
    assert!(report.inputs[1].xeb.is_none());
    assert_eq!(report.inputs[1].errors[0].metric, "xeb");
}

#[test]
fn missing_file_is_isolated() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    rcs_core::samples::write_sample_file(&rcs_core::generate_uniform(12, 2000, 1).unwrap(), &good).unwrap();
    let text = format!(
        r#"
[[inputs]]
kind = "file"
path = "{}"

[[inputs]]
kind = "file"
path = "{}"

[[inputs]]
kind = "uniform"
n = 12
m = 2000
"#,
        good.display(),
        dir.path().join("missing.txt").display()
    );
    let report = run_compare(&config(&text, 0), NO_TIME).unwrap();
    let (ok, bad, gen) = (&report.inputs[0], &report.inputs[1], &report.inputs[2]);
    assert!(ok.errors.is_empty() && ok.nist.is_some() && ok.spectrum_summary.is_some());
    assert_eq!(ok.sha256.as_ref().unwrap().len(), 64);
    assert_eq!(bad.errors.len(), 1);
    assert_eq!(bad.errors[0].metric, "load");
    assert!(gen.errors.is_empty() && gen.heatmap_summary.is_some());
    assert_eq!(report.wasserstein.unwrap().entries.len(), 1);
}

#[test]
fn corrupt_file_is_isolated() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0101\n01a1\n").unwrap();
    let text = format!(
        "[[inputs]]\nkind = \"file\"\npath = \"{}\"\n\n[[inputs]]\nkind = \"uniform\"\nn = 4\nm = 500\n",
        bad.display()
    );
    let report = run_compare(&config(&text, 0), NO_TIME).unwrap();
    assert!(report.inputs[0].errors[0].message.contains("invalid character"));
    assert!(report.inputs[1].nist.is_some());
}

#[test]
fn streams_files_over_the_budget() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.txt");
    let sample = rcs_core::generate_uniform(16, 32 * 100, 2).unwrap();
    rcs_core::samples::write_sample_file(&sample, &path).unwrap();
    let base = format!(
        "metrics = [\"nist\", \"heatmap\", \"spectrum\", \"wdist\"]\n[[inputs]]\nkind = \"file\"\npath = \"{}\"\nlabel = \"f\"\n\n[[inputs]]\nkind = \"uniform\"\nn = 16\nm = 3200\nlabel = \"u\"\n",
        path.display()
    );
    let small = run_compare(&config(&format!("{base}[params]\nmemory_budget = 4096\n"), 0), NO_TIME).unwrap();
    let full = run_compare(&config(&base, 0), NO_TIME).unwrap();
    let (s, f) = (&small.inputs[0], &full.inputs[0]);
    assert_eq!(s.heatmap_summary, f.heatmap_summary);
    assert_eq!(
        s.spectrum_summary.as_ref().unwrap().outlier_peak,
        f.spectrum_summary.as_ref().unwrap().outlier_peak
    );
    assert_eq!(s.errors[0].metric, "nist");
    assert_eq!(small.wasserstein.unwrap().entries, full.wasserstein.unwrap().entries);
}

#[test]
fn deterministic_json_and_round_trip() {
    let text = "[[inputs]]\nkind = \"uniform\"\nn = 20\nm = 3000\n\n[[inputs]]\nkind = \"spoof\"\nn = 20\nm = 3000\nprefix = 2\n";
    let a = json(&run_compare(&config(text, 11), NO_TIME).unwrap());
    let b = json(&run_compare(&config(text, 11), NO_TIME).unwrap());
    assert_eq!(a, b);
    let back: MetricReport = serde_json::from_str(&a).unwrap();
    assert_eq!(json(&back), a);
    assert!(!a.contains("timestamp"));
    let stamped = json(&run_compare(&config(text, 11), CompareOptions::default()).unwrap());
    assert!(stamped.contains("timestamp_unix"));
}

#[test]
fn config_echo_lists_every_tunable() {
    let report = run_compare(&config("[[inputs]]\nkind = \"uniform\"\nn = 6\nm = 300\n", 0), NO_TIME).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json(&report)).unwrap();
    assert_eq!(v["schema_version"], 1);
    let params = &v["config"]["params"];
    for key in ["k", "estimator", "nist_alpha", "wasserstein_alpha", "reference", "max_records", "memory_budget"] {
        assert!(params.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["config"]["inputs"][0]["seed"], 0);
}

#[test]
fn text_report_has_row_per_metric() {
    let text = "metrics = [\"nist\", \"heatmap\", \"spectrum\"]\n[[inputs]]\nkind = \"uniform\"\nn = 8\nm = 400\nlabel = \"a\"\n\n[[inputs]]\nkind = \"uniform\"\nn = 8\nm = 400\nlabel = \"b\"\n";
    let report = run_compare(&config(text, 3), NO_TIME).unwrap();
    let rendered = render_text(&report);
    let rows: Vec<&str> = rendered.lines().skip(1).collect();
    assert_eq!(rows.len(), 6, "{rendered}");
    for label in ["a", "b"] {
        for metric in ["nist", "heatmap", "spectrum"] {
            assert!(rows.iter().any(|r| r.starts_with(label) && r.contains(metric)));
        }
    }
}
