//! Physical constants and the natural-unit system used inside the engine.
//!
//! Inside the quadrature engine every length is measured in units of the
//! plate separation `L`, imaginary frequencies as `λ = uL/c`, in-plane
//! wavenumbers as `κ = QL`. Energies per unit area come out in `ħc/L³`,
//! pressures in `ħc/L⁴` and torques per unit area in `ħc/L³` per radian.

use std::f64::consts::PI;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const C_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalUnits {
    /// Plate separation, m.
    pub separation: f64,
}

impl NaturalUnits {
    pub fn new(separation: f64) -> Self {
        NaturalUnits { separation }
    }

    /// `ω0 = πc/L`, rad/s.
    pub fn omega0(&self) -> f64 {
        PI * C_LIGHT / self.separation
    }

    /// Natural frequency unit `c/L`, rad/s.
    pub fn frequency_unit(&self) -> f64 {
        C_LIGHT / self.separation
    }

    /// Dimensionless temperature `k_B T L / (ħ c)`.
    pub fn reduced_temperature(&self, kelvin: f64) -> f64 {
        K_B * kelvin * self.separation / (HBAR * C_LIGHT)
    }

    /// Kelvin corresponding to a reduced temperature.
    pub fn kelvin(&self, reduced: f64) -> f64 {
        reduced * HBAR * C_LIGHT / (K_B * self.separation)
    }

    /// `ħc/L³`: energy per area (J/m²) and torque per area (N/m).
    pub fn energy_per_area(&self) -> f64 {
        HBAR * C_LIGHT / self.separation.powi(3)
    }

    /// `ħc/L⁴`: pressure, N/m².
    pub fn force_per_area(&self) -> f64 {
        HBAR * C_LIGHT / self.separation.powi(4)
    }

    /// `ħc/L`: energy of the one-dimensional cavity, J.
    pub fn energy_1d(&self) -> f64 {
        HBAR * C_LIGHT / self.separation
    }
}
