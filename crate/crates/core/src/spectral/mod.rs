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

//! Column statistics and Gram-matrix spectra of bitstring samples.

mod export;
mod gram;
mod heatmap;
mod mp;

pub use export::{write_matrix_csv, write_pgm};
pub use gram::{
    bulk_fit_report, gram_spectrum, slice_matrices, BulkFit, Histogram, OutlierEstimator, SliceSpectrum,
    SliceView, SpectrumAccumulator, SpectrumResult, MIN_BULK_EIGENVALUES,
};
pub use heatmap::{heat_map, HeatMap, HeatMapAccumulator};
pub use mp::{mp_density, MarchenkoPastur};
