//! Integration engine: adaptive Gauss–Kronrod panels, semi-infinite
//! mappings, the nested (λ, κ, ψ1) cavity integrals, Matsubara sums, and a
//! fixed-grid oracle used to certify the adaptive engine.

mod cavity;
mod gauss_kronrod;
mod matsubara;
mod oracle;

pub use cavity::{
    integrate_cavity, integrate_cavity_t0, integrate_energy_t0, oracle_cavity, psi_breakpoints, CavityIntegral,
    Observable, OracleGrid, LOW_TEMPERATURE_SWITCH,
};
pub use gauss_kronrod::{gk15, integrate_adaptive, integrate_adaptive_est};
pub use matsubara::matsubara_sum;
pub use oracle::{oracle_integrate, oracle_integrate_interval, oracle_integrate_semiinf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mapping of `[0, ∞)` onto `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mapping {
    /// `x = t / (1 − t)`.
    Rational,
    /// `x = −ln(1 − t)`.
    Exponential,
}

impl Mapping {
    /// `t(x)`.
    pub fn inverse(self, x: f64) -> f64 {
        match self {
            Mapping::Rational => x / (1.0 + x),
            Mapping::Exponential => -(-x).exp_m1(),
        }
    }

    /// `(x(t), dx/dt)`.
    pub fn apply(self, t: f64) -> (f64, f64) {
        let s = 1.0 - t;
        match self {
            Mapping::Rational => (t / s, 1.0 / (s * s)),
            Mapping::Exponential => (-(-t).ln_1p(), 1.0 / s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    pub mapping: Mapping,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-7, abs_tol: 1e-12, max_panels: 4096, mapping: Mapping::Rational }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidConfig("quadrature tolerances must be > 0".into()));
        }
        if self.max_panels == 0 {
            return Err(Error::InvalidConfig("max_panels must be >= 1".into()));
        }
        Ok(())
    }

    /// Tolerances handed to a nested integral one level down.
    pub(crate) fn inner(&self, factor: f64) -> QuadratureSpec {
        QuadratureSpec { rel_tol: self.rel_tol / factor, abs_tol: self.abs_tol / factor, ..*self }
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatsubaraSpec {
    pub max_terms: usize,
    pub tail_tol: f64,
}

impl Default for MatsubaraSpec {
    fn default() -> Self {
        MatsubaraSpec { max_terms: 10_000, tail_tol: 1e-9 }
    }
}

impl MatsubaraSpec {
    pub fn validate(&self) -> Result<()> {
        if self.max_terms == 0 || !(self.tail_tol > 0.0) {
            return Err(Error::InvalidConfig("matsubara max_terms >= 1 and tail_tol > 0 required".into()));
        }
        Ok(())
    }
}

/// Value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
}

impl Estimate {
    pub fn new(value: f64, err: f64) -> Self {
        Estimate { value, err }
    }

    pub fn exact(value: f64) -> Self {
        Estimate { value, err: 0.0 }
    }

    pub fn scale(self, s: f64) -> Self {
        Estimate { value: self.value * s, err: self.err * s.abs() }
    }
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = CompensatedSum::new();
    for x in it {
        s.add(x);
    }
    s.value()
}

/// `∫₀^∞ f(x) dx` through `spec.mapping`.
pub fn integrate_semiinf<F>(f: F, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let mapping = spec.mapping;
    integrate_adaptive(
        |t| {
            let (x, w) = mapping.apply(t);
            let v = f(x)?;
            Ok(if v == 0.0 { 0.0 } else { v * w })
        },
        &[0.0, 1.0],
        spec,
        false,
    )
}
