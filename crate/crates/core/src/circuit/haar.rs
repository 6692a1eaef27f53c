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

//! Haar-random unitaries and the operator-norm gate error.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{householder_qr, spectral_norm};

/// Largest dimension accepted by [`haar_unitary`] (256 MiB of complex entries).
pub const MAX_HAAR_DIM: usize = 4096;

/// Haar-distributed `dim x dim` unitary.
///
/// Draws `Z` with i.i.d. standard complex normal entries, factors `Z = QR`
/// and returns `Q * Lambda` with `Lambda_ii = R_ii / |R_ii|`, which removes
/// the phase convention of the QR factorization.
pub fn haar_unitary(dim: usize, seed: u64) -> Result<DMatrix<Complex64>> {
    if dim == 0 || dim > MAX_HAAR_DIM {
        return Err(Error::InvalidArgument(format!(
            "Haar dimension {dim} outside 1..={MAX_HAAR_DIM}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re * scale, im * scale)
    });
    let (mut q, r) = householder_qr(&z);
    for j in 0..dim {
        let rjj = r[(j, j)];
        let norm = rjj.norm();
        let lambda = if norm > 0.0 { rjj / norm } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= lambda;
        }
    }
    Ok(q)
}

/// `E(U, V) = max_|psi> ||(U - V)|psi>||`, the spectral norm of `U - V`.
pub fn unitary_error(u: &DMatrix<Complex64>, v: &DMatrix<Complex64>) -> Result<f64> {
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch {
            left: u.nrows(),
            right: v.nrows(),
        });
    }
    if u.nrows() != u.ncols() {
        return Err(Error::DimensionMismatch {
            left: u.nrows(),
            right: u.ncols(),
        });
    }
    spectral_norm(&(u - v))
}
