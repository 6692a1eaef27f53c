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

//! Library side of the `rcs-verify` command: batch configuration, the
//! comparison driver and report rendering.

pub mod compare;
pub mod config;
pub mod error;
pub mod report;

pub use compare::{run_compare, CompareOptions};
pub use config::{IdealSpec, InputSpec, Metric, Params, RunConfig, SCHEMA_VERSION};
pub use error::{CliError, Result};
pub use report::{emit_report, render_text, Format, MetricReport};
