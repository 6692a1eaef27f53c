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


use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rcs_cli::{emit_report, run_compare, CliError, CompareOptions, Format, Result, RunConfig};
use rcs_core::samples::write_sample_file;
use rcs_core::spectral::{write_matrix_csv, write_pgm};
use rcs_core::{
    build_circuit, bulk_fit_report, gram_spectrum, heat_map, linear_xeb, parse_sample_file, run_battery,
    sample_bitstrings, sample_wasserstein, simulate, slice_matrices, CircuitSpec, OutlierEstimator, ProbTable,
    Topology,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "rcs-verify", version, about = "Statistical checks for random-circuit sampling data")]
struct Cli {
    /// Default seed for synthetic inputs and sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Leave the timestamp out of reports so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch comparison described by a TOML or JSON file.
    Compare(CompareArgs),
    /// Simulate a circuit and write its probability table (and optionally samples).
    Simulate(SimulateArgs),
    /// Linear cross-entropy fidelity of a sample against an ideal table.
    Xeb {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long)]
        ideal: PathBuf,
    },
    /// Randomness test battery on the concatenated bit stream.
    Nist {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long, default_value_t = rcs_core::nist::DEFAULT_ALPHA)]
        alpha: f64,
    },
    /// Per-qubit and sliced bit-1 frequencies.
    Heatmap {
        #[arg(long)]
        sample: PathBuf,
        /// Write the n x n sliced mean as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the n x n sliced mean as an 8-bit PGM image.
        #[arg(long)]
        pgm: Option<PathBuf>,
    },
    /// Gram-matrix spectrum and outlier distance.
    Spectrum {
        #[arg(long)]
        sample: PathBuf,
        /// Slice height; defaults to 2n.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = Estimator::Median)]
        estimator: Estimator,
        /// Write every eigenvalue, one slice per row.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Wasserstein distance between two samples.
    Wdist {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Write a synthetic sample file.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Override params.k.
    #[arg(long)]
    k: Option<usize>,
    /// Override params.nist_alpha.
    #[arg(long)]
    nist_alpha: Option<f64>,
    /// Override params.wasserstein_alpha.
    #[arg(long)]
    alpha: Option<f64>,
    /// Override params.estimator.
    #[arg(long, value_enum)]
    estimator: Option<Estimator>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// Circuit seed; the global --seed drives sampling.
    #[arg(long, default_value_t = 0)]
    circuit_seed: u64,
    #[arg(long, default_value = "ABCDCDAB")]
    pattern: String,
    /// `ring` or `grid:RxC`.
    #[arg(long, default_value = "ring")]
    topology: String,
    /// Probability table output.
    #[arg(long)]
    probs: PathBuf,
    #[arg(long, value_enum, default_value_t = ProbFormat::Binary)]
    probs_format: ProbFormat,
    /// Sample file output.
    #[arg(long, requires = "samples")]
    samples_out: Option<PathBuf>,
    /// Number of bit strings to draw.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// Fix the first columns to --value.
    #[arg(long, default_value_t = 0)]
    prefix: usize,
    #[arg(long, default_value_t = 0)]
    value: u8,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Estimator {
    Median,
    Mean,
}

impl From<Estimator> for OutlierEstimator {
    fn from(e: Estimator) -> Self {
        match e {
            Estimator::Median => OutlierEstimator::Median,
            Estimator::Mean => OutlierEstimator::Mean,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbFormat {
    Binary,
    Csv,
}

fn parse_topology(s: &str) -> Result<Topology> {
    if s == "ring" {
        return Ok(Topology::Ring);
    }
    let dims = s.strip_prefix("grid:").and_then(|d| {
        let (r, c) = d.split_once('x')?;
        Some((r.parse().ok()?, c.parse().ok()?))
    });
    match dims {
        Some((rows, cols)) => Ok(Topology::Grid { rows, cols }),
        None => Err(CliError::Config(format!("topology {s:?}: expected ring or grid:RxC"))),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out).map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compare(args) => {
            let mut config = RunConfig::load(&args.config)?;
            if let Some(k) = args.k {
                config.params.k = Some(k);
            }
            if let Some(a) = args.nist_alpha {
                config.params.nist_alpha = a;
            }
            if let Some(a) = args.alpha {
                config.params.wasserstein_alpha = a;
            }
            if let Some(e) = args.estimator {
                config.params.estimator = e.into();
            }
            let config = config.resolve(cli.seed)?;
            let report = run_compare(
                &config,
                CompareOptions {
                    timestamp: !cli.no_timestamp,
                },
            )?;
            match args.output {
                Some(path) => {
                    let file = File::create(&path).map_err(|source| CliError::Io { path: path.clone(), source })?;
                    let mut out = BufWriter::new(file);
                    emit_report(&report, args.format, &mut out)?;
                    out.flush().map_err(|source| CliError::Io { path, source })
                }
                None => emit_report(&report, args.format, &mut std::io::stdout().lock()),
            }
        }
        Command::Simulate(args) => {
            let spec = CircuitSpec::new(args.n, args.m, args.circuit_seed)
                .with_pattern(args.pattern)
                .with_topology(parse_topology(&args.topology)?);
            let circuit = build_circuit(&spec)?;
            let table = simulate(&circuit.gates, spec.n_qubits)?.probabilities();
            match args.probs_format {
                ProbFormat::Binary => table.write_binary(&args.probs)?,
                ProbFormat::Csv => table.write_csv(&args.probs)?,
            }
            if let (Some(path), Some(m)) = (args.samples_out, args.samples) {
                write_sample_file(&sample_bitstrings(&table, m, cli.seed)?, path)?;
            }
            print_json(&serde_json::json!({
                "circuit": spec,
                "gates": circuit.gates.len(),
                "two_qubit_gates": circuit.two_qubit_count(),
            }))
        }
        Command::Xeb { sample, ideal } => {
            let s = parse_sample_file(&sample, None)?;
            print_json(&linear_xeb(&s, &ProbTable::read(&ideal)?)?)
        }
        Command::Nist { sample, alpha } => print_json(&run_battery(&parse_sample_file(&sample, None)?, alpha)),
        Command::Heatmap { sample, csv, pgm } => {
            let h = heat_map(&parse_sample_file(&sample, None)?);
            let grid: Option<Vec<Vec<f64>>> = h
                .sliced_mean
                .as_ref()
                .map(|flat| flat.chunks(h.n).map(<[f64]>::to_vec).collect());
            if csv.is_some() || pgm.is_some() {
                let rows = grid.ok_or_else(|| {
                    CliError::Config(format!("{}: fewer records than qubits, no sliced mean", sample.display()))
                })?;
                if let Some(path) = csv {
                    write_matrix_csv(path, &rows)?;
                }
                if let Some(path) = pgm {
                    write_pgm(path, &rows)?;
                }
            }
            print_json(&h)
        }
        Command::Spectrum {
            sample,
            k,
            estimator,
            csv,
        } => {
            let s = parse_sample_file(&sample, None)?;
            let k = k.unwrap_or(2 * s.n_qubits());
            let spec = gram_spectrum(&slice_matrices(&s, k)?, estimator.into())?;
            if let Some(path) = csv {
                let rows: Vec<Vec<f64>> = spec.slices.iter().map(|sl| sl.eigenvalues.clone()).collect();
                write_matrix_csv(path, &rows)?;
            }
            let ks_bulk = bulk_fit_report(&spec).ok().map(|f| f.ks_distance);
            print_json(&serde_json::json!({
                "outlier_peak": spec.outlier_peak,
                "mp_distance": spec.mp_distance,
                "gamma": spec.gamma,
                "ks_bulk": ks_bulk,
                "k": spec.k,
                "slices": spec.slices.len(),
            }))
        }
        Command::Wdist { a, b, alpha } => {
            let (sa, sb) = (parse_sample_file(&a, None)?, parse_sample_file(&b, None)?);
            let w = sample_wasserstein(&sa, &sb, alpha)?;
            print_json(&serde_json::json!({
                "distance": w.distance,
                "alpha": w.alpha,
                "M_used": w.m_used,
            }))
        }
        Command::Generate(args) => {
            let s = if args.prefix > 0 {
                rcs_core::generate_spoof(args.n, args.m, cli.seed, args.prefix, args.value)?
            } else {
                rcs_core::generate_uniform(args.n, args.m, cli.seed)?
            };
            write_sample_file(&s, &args.out)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            log::warn!("thread pool already initialised: {e}");
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
