//! Closed forms for perfectly conducting limits.

use crate::linalg::{Complex, Mat2C};

use super::Kinematics;

/// Wires that conduct perfectly along the optical axis and are inert
/// across it (`ε∥ → ∞`, `ε⊥ = 1`).
pub fn reflect_ideal_wires(kin: &Kinematics, psi: f64) -> Mat2C {
    let (s, c) = psi.sin_cos();
    let sin2psi = 2.0 * s * c;
    let cos = kin.cos;
    let cos2 = Complex::new(1.0, 0.0) - kin.sin2;
    let den = (Complex::new(1.0, 0.0) - kin.sin2 * (c * c)).inv();
    Mat2C::new(cos2 * (c * c), -cos * (sin2psi / 2.0), cos * (sin2psi / 2.0), Complex::new(-s * s, 0.0)).scale(den)
}

/// Isotropic perfect conductor.
pub fn perfect_mirror() -> Mat2C {
    Mat2C::from_real(1.0, 0.0, 0.0, -1.0)
}
