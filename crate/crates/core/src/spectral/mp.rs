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

//! Marchenko–Pastur law for `(1/k) X^T X` with `gamma = n/k`.
//!
//! ```text
//! rho(l) = sqrt((l+ - l)(l - l-)) / (2 pi sigma2 gamma l),   l in (l-, l+)
//! l+- = sigma2 (1 +- sqrt(gamma))^2
//! ```
//!
//! Integrals use the substitution `l(t) = l- + (l+ - l-)(1 - cos t)/2`,
//! `t in [0, pi]`, which turns the square-root edges (and the `1/l` pole at
//! `gamma = 1`) into a smooth integrand.

use crate::error::{Error, Result};

const CDF_PANELS: usize = 8192;

/// Density of the Marchenko–Pastur law; zero outside its support.
pub fn mp_density(lambda: f64, sigma2: f64, gamma: f64) -> Result<f64> {
    check_params(sigma2, gamma)?;
    let root = gamma.sqrt();
    Ok(density(lambda, sigma2, gamma, sigma2 * (1.0 - root).powi(2), sigma2 * (1.0 + root).powi(2)))
}

fn check_params(sigma2: f64, gamma: f64) -> Result<()> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma2 = {sigma2} must be positive")));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidArgument(format!("gamma = {gamma} outside (0, 1]")));
    }
    Ok(())
}

fn density(lambda: f64, sigma2: f64, gamma: f64, lower: f64, upper: f64) -> f64 {
    if lambda <= lower || lambda >= upper || lambda <= 0.0 {
        return 0.0;
    }
    ((upper - lambda) * (lambda - lower)).sqrt() / (2.0 * std::f64::consts::PI * sigma2 * gamma * lambda)
}

#[derive(Debug, Clone)]
pub struct MarchenkoPastur {
    sigma2: f64,
    gamma: f64,
    lower: f64,
    upper: f64,
    /// Cumulative mass at `t_i = i * pi / CDF_PANELS`.
    cumulative: Vec<f64>,
}

impl MarchenkoPastur {
    pub fn new(sigma2: f64, gamma: f64) -> Result<Self> {
        check_params(sigma2, gamma)?;
        let root = gamma.sqrt();
        let mut mp = MarchenkoPastur {
            sigma2,
            gamma,
            lower: sigma2 * (1.0 - root).powi(2),
            upper: sigma2 * (1.0 + root).powi(2),
            cumulative: Vec::new(),
        };
        mp.cumulative = mp.tabulate();
        Ok(mp)
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `(lambda_minus, lambda_plus)`.
    pub fn support(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn density(&self, lambda: f64) -> f64 {
        density(lambda, self.sigma2, self.gamma, self.lower, self.upper)
    }

    /// Integrand in `t`: `rho(l(t)) dl/dt`.
    fn integrand(&self, t: f64) -> f64 {
        let half = 0.5 * (self.upper - self.lower);
        let lambda = self.lower + half * (1.0 - t.cos());
        let s = t.sin();
        if lambda <= 0.0 {
            // gamma = 1 at t = 0: limit of sin^2 t / l(t) is 4 / l+
            return half * half * 4.0 / self.upper / (2.0 * std::f64::consts::PI * self.sigma2 * self.gamma);
        }
        half * half * s * s / (2.0 * std::f64::consts::PI * self.sigma2 * self.gamma * lambda)
    }

    fn tabulate(&self) -> Vec<f64> {
        // cumulative Simpson over pairs of half-panels
        let h = std::f64::consts::PI / CDF_PANELS as f64;
        let mut out = Vec::with_capacity(CDF_PANELS + 1);
        out.push(0.0);
        let mut acc = 0.0;
        for i in 0..CDF_PANELS {
            let a = i as f64 * h;
            let panel = h / 6.0 * (self.integrand(a) + 4.0 * self.integrand(a + 0.5 * h) + self.integrand(a + h));
            acc += panel;
            out.push(acc);
        }
        out
    }

    /// Total mass over the support; 1 up to quadrature error.
    pub fn total_mass(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn cdf(&self, lambda: f64) -> f64 {
        if lambda <= self.lower {
            return 0.0;
        }
        if lambda >= self.upper {
            return 1.0;
        }
        let x = 1.0 - 2.0 * (lambda - self.lower) / (self.upper - self.lower);
        let t = x.clamp(-1.0, 1.0).acos();
        let pos = t / std::f64::consts::PI * CDF_PANELS as f64;
        let i = (pos.floor() as usize).min(CDF_PANELS - 1);
        let frac = pos - i as f64;
        let value = self.cumulative[i] + frac * (self.cumulative[i + 1] - self.cumulative[i]);
        (value / self.total_mass()).clamp(0.0, 1.0)
    }

    /// Mean of the law, equal to `sigma2`.
    pub fn mean(&self) -> f64 {
        self.sigma2
    }
}
