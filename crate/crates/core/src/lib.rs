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

//! Verification metrics for random-circuit sampling data.
//!
//! The crate reads and generates bitstring samples, simulates small
//! circuits exactly, and scores samples with cross-entropy, statistical
//! randomness tests, Gram-matrix spectra and optimal-transport distances.
//!
//! Bit order everywhere: qubit 0 is the leftmost character in a sample file
//! and the most significant bit of a basis-state index.

pub mod circuit;
pub mod descriptor;
pub mod error;
pub mod linalg;
pub mod nist;
pub mod numeric;
pub mod samples;
pub mod spectral;
pub mod transport;
pub mod xeb;

pub use circuit::{
    build_circuit, haar_unitary, sample_bitstrings, simulate, Circuit, CircuitSpec, FsimParams, ProbTable,
    SingleQubitGate, StateVector, Topology,
};
pub use descriptor::{parse_descriptor, DatasetDescriptor};
pub use error::{Error, Result};
pub use nist::{run_battery, TestOutcome};
pub use samples::{generate_spoof, generate_uniform, parse_sample_file, SampleReader, SampleSet, Source};
pub use spectral::{
    bulk_fit_report, gram_spectrum, heat_map, slice_matrices, BulkFit, HeatMap, OutlierEstimator, SpectrumResult,
};
pub use transport::{sample_wasserstein, to_values, wasserstein, ValueSeries, WassersteinResult};
pub use xeb::{bhattacharya_overlap, kolmogorov_distance, linear_xeb, XebResult};
