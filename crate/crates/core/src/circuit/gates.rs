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

//! Gate matrices.
//!
//! With `W = (X + Y)/sqrt(2)`, every single-qubit gate here is the principal
//! square root of a Pauli-like involution `P` (with `P^2 = I`):
//!
//! ```text
//! sqrt(P) = ((1 + i) I + (1 - i) P) / 2
//!
//! sqrt(X) = 1/2 [[1+i, 1-i], [1-i, 1+i]]
//! sqrt(Y) = 1/2 [[1+i, -1-i], [1+i, 1+i]]
//! sqrt(W) = 1/2 [[1+i, -i*sqrt(2)], [sqrt(2), 1+i]]
//! ```
//!
//! The two-qubit gate is `fSim(theta, phi)`, in the basis `|00>, |01>, |10>, |11>`
//! with the first qubit most significant:
//!
//! ```text
//! [[1, 0,            0,            0          ],
//!  [0, cos(t),       -i sin(t),    0          ],
//!  [0, -i sin(t),    cos(t),       0          ],
//!  [0, 0,            0,            e^{-i phi} ]]
//! ```
//!
//! The default is `fSim(pi/2, pi/6)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type Mat2 = [[Complex64; 2]; 2];
pub type Mat4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// The random single-qubit gate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingleQubitGate {
    SqrtX,
    SqrtY,
    SqrtW,
}

impl SingleQubitGate {
    pub const ALL: [SingleQubitGate; 3] = [Self::SqrtX, Self::SqrtY, Self::SqrtW];

    pub fn matrix(self) -> Mat2 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let pauli = match self {
            Self::SqrtX => [[ZERO, ONE], [ONE, ZERO]],
            Self::SqrtY => [[ZERO, -I], [I, ZERO]],
            Self::SqrtW => [
                [ZERO, Complex64::new(s, -s)],
                [Complex64::new(s, s), ZERO],
            ],
        };
        principal_sqrt_of_involution(pauli)
    }
}

fn principal_sqrt_of_involution(p: Mat2) -> Mat2 {
    let a = Complex64::new(0.5, 0.5);
    let b = Complex64::new(0.5, -0.5);
    let mut out = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            let id = if r == c { ONE } else { ZERO };
            out[r][c] = a * id + b * p[r][c];
        }
    }
    out
}

/// Parameters of the fixed two-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FsimParams {
    pub theta: f64,
    pub phi: f64,
}

impl Default for FsimParams {
    fn default() -> Self {
        FsimParams {
            theta: std::f64::consts::FRAC_PI_2,
            phi: std::f64::consts::FRAC_PI_6,
        }
    }
}

pub fn fsim(theta: f64, phi: f64) -> Mat4 {
    let c = Complex64::new(theta.cos(), 0.0);
    let s = Complex64::new(0.0, -theta.sin());
    [
        [ONE, ZERO, ZERO, ZERO],
        [ZERO, c, s, ZERO],
        [ZERO, s, c, ZERO],
        [ZERO, ZERO, ZERO, Complex64::from_polar(1.0, -phi)],
    ]
}

/// Max-entry deviation of `M^H M` from the identity.
pub fn unitarity_deviation<const N: usize>(m: &[[Complex64; N]; N]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..N {
        for j in 0..N {
            let acc: Complex64 = m.iter().map(|row| row[i].conj() * row[j]).sum();
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((acc - target).norm());
        }
    }
    worst
}
