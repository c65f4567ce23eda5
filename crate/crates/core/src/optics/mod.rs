//! Reflection and transmission amplitude matrices of the cavity walls.
//!
//! All formulas are parametrized by the complex pair `(sin²θ, cosθ)` derived
//! from `(ω, Q)`, so the same code serves propagating, evanescent and
//! imaginary-frequency evaluation. Square roots follow one rule everywhere:
//! principal branch (`Re ≥ 0`) with `Im ≥ 0` on the negative real axis, and
//! normal wavevector components are oriented so that `Im k ≥ 0`.

mod ideal;
mod scalar;
mod tensor;
mod uniaxial;

pub use ideal::{perfect_mirror, reflect_ideal_wires};
pub use scalar::{scalar_reflect, scalar_reflect_film, scalar_reflect_film_from_eps, scalar_reflect_from_eps};
pub use tensor::{dielectric_tensor, gamma_matrix};
pub use uniaxial::{
    eigenmodes, eigenmodes_from_eps, film_interface_matrices, film_interface_matrices_from_eps, ij_quantities,
    reflect_film, reflect_film_from_eps, reflect_semi_infinite, reflect_semi_infinite_from_eps,
    reflect_semi_infinite_literal, Eigenmodes, InterfaceMatrices,
};

use crate::error::{Error, Result};
use crate::linalg::{Complex, Mat2C};
use crate::materials::{Branch, DispersionModel, FrequencyPoint, UniaxialMaterial};
use crate::units::C_LIGHT;

/// Square root on the principal branch, `Re ≥ 0`, with `Im ≥ 0` as the
/// tie-break on the negative real axis.
pub fn sqrt_branch(z: Complex) -> Complex {
    let w = z.sqrt();
    if w.re == 0.0 && w.im < 0.0 {
        -w
    } else {
        w
    }
}

/// Sign of `root` chosen so that the wavevector `q·root` has `Im ≥ 0`
/// (and `Re ≥ 0` when it is purely real).
pub(crate) fn orient_with(q: Complex, root: Complex) -> Complex {
    let k = q * root;
    if k.im < 0.0 || (k.im == 0.0 && k.re < 0.0) {
        -root
    } else {
        root
    }
}

/// Kinematic snapshot of one plane-wave component in the vacuum cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub f: FrequencyPoint,
    /// In-plane wavenumber `Q`, 1/m.
    pub q_par: f64,
    /// Free-space wavenumber `q = ω/c`, 1/m.
    pub q: Complex,
    /// Vacuum normal wavevector `k = √(q² − Q²)` with `Im k ≥ 0`, 1/m.
    pub k_vac: Complex,
    pub sin2: Complex,
    pub cos: Complex,
}

impl Kinematics {
    pub fn new(f: FrequencyPoint, q_par: f64) -> Result<Self> {
        f.validate()?;
        if !(q_par >= 0.0) || !q_par.is_finite() {
            return Err(Error::InvalidFrequency(format!("in-plane wavenumber must be >= 0, got {q_par}")));
        }
        if f.value == 0.0 {
            return Err(Error::InvalidFrequency("zero frequency has no angle of incidence".into()));
        }
        match f.branch {
            Branch::ImaginaryAxis => {
                let qn = f.value / C_LIGHT;
                let ratio = q_par / qn;
                let rho = qn.hypot(q_par);
                Ok(Kinematics {
                    f,
                    q_par,
                    q: Complex::new(0.0, qn),
                    k_vac: Complex::new(0.0, rho),
                    sin2: Complex::new(-ratio * ratio, 0.0),
                    cos: Complex::new(1.0f64.hypot(ratio), 0.0),
                })
            }
            Branch::RealAxis => {
                let q = Complex::new(f.value / C_LIGHT, 0.0);
                let k = orient_with(Complex::new(1.0, 0.0), sqrt_branch(q * q - q_par * q_par));
                Ok(Kinematics { f, q_par, q, k_vac: k, sin2: (q_par * q_par) / (q * q), cos: k / q })
            }
        }
    }

    pub fn imaginary(u: f64, q_par: f64) -> Result<Self> {
        Self::new(FrequencyPoint::imaginary(u), q_par)
    }

    pub fn real(omega: f64, q_par: f64) -> Result<Self> {
        Self::new(FrequencyPoint::real(omega), q_par)
    }

    /// Normal incidence (`Q = 0`).
    pub fn normal(f: FrequencyPoint) -> Result<Self> {
        Self::new(f, 0.0)
    }

    pub fn sin_theta(&self) -> Complex {
        sqrt_branch(self.sin2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    SemiInfinite,
    /// Free-standing film of the given thickness (m).
    Film {
        thickness: f64,
    },
    /// Perfectly conducting wires along the optical axis, inert across it.
    IdealWires,
}

/// One cavity wall. The in-plane orientation `ψ` is supplied per evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateSpec {
    pub material: UniaxialMaterial,
    pub geometry: Geometry,
}

impl PlateSpec {
    pub fn semi_infinite(material: UniaxialMaterial) -> Self {
        PlateSpec { material, geometry: Geometry::SemiInfinite }
    }

    pub fn film(material: UniaxialMaterial, thickness: f64) -> Self {
        PlateSpec { material, geometry: Geometry::Film { thickness } }
    }

    pub fn ideal_wires() -> Self {
        PlateSpec {
            material: UniaxialMaterial::new(DispersionModel::IdealConductor, DispersionModel::Vacuum),
            geometry: Geometry::IdealWires,
        }
    }

    pub fn perfect_mirror() -> Self {
        PlateSpec::semi_infinite(UniaxialMaterial::isotropic(DispersionModel::IdealConductor))
    }

    pub fn vacuum() -> Self {
        PlateSpec::semi_infinite(UniaxialMaterial::vacuum())
    }

    pub fn validate(&self) -> Result<()> {
        if let Geometry::Film { thickness } = self.geometry {
            if !(thickness >= 0.0) || !thickness.is_finite() {
                return Err(Error::InvalidConfig(format!("film thickness must be >= 0, got {thickness}")));
            }
        }
        if self.geometry == Geometry::IdealWires {
            return Ok(());
        }
        self.material.validate()?;
        self.resolve().map(|_| ())
    }

    /// The reflection is independent of `ψ` (isotropic or trivially zero).
    pub fn is_orientation_free(&self) -> bool {
        match self.resolve() {
            Ok(Resolved::Zero) | Ok(Resolved::PerfectMirror) => true,
            Ok(Resolved::IdealWires) => false,
            _ => self.material.is_isotropic(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.resolve(), Ok(Resolved::Zero))
    }

    fn resolve(&self) -> Result<Resolved> {
        use DispersionModel::IdealConductor as Ideal;
        if self.geometry == Geometry::IdealWires {
            return Ok(Resolved::IdealWires);
        }
        if self.material.is_vacuum() {
            return Ok(Resolved::Zero);
        }
        if let Geometry::Film { thickness } = self.geometry {
            if thickness == 0.0 {
                return Ok(Resolved::Zero);
            }
        }
        let m = &self.material;
        match (m.eps_par, m.eps_perp) {
            (Ideal, Ideal) => Ok(Resolved::PerfectMirror),
            (Ideal, perp) if perp.is_vacuum() && self.geometry == Geometry::SemiInfinite => Ok(Resolved::IdealWires),
            (Ideal, _) | (_, Ideal) => Err(Error::UnsupportedIdealLimit(
                "ideal conductor is supported only as (ideal, ideal) or semi-infinite (ideal, vacuum)".into(),
            )),
            _ => Ok(match self.geometry {
                Geometry::Film { thickness } => Resolved::Film(thickness),
                _ => Resolved::SemiInfinite,
            }),
        }
    }

    /// Reflection matrix seen from the cavity for optical-axis angle `psi`.
    pub fn reflection(&self, psi: f64, kin: &Kinematics) -> Result<Mat2C> {
        match self.resolve()? {
            Resolved::Zero => Ok(Mat2C::zero()),
            Resolved::PerfectMirror => Ok(perfect_mirror()),
            Resolved::IdealWires => Ok(reflect_ideal_wires(kin, psi)),
            Resolved::SemiInfinite => reflect_semi_infinite(&self.material, psi, kin),
            Resolved::Film(d) => reflect_film(&self.material, d, psi, kin),
        }
    }

    /// Closed-form `u → 0` limit at fixed `Q`, when the plate has one. Ideal
    /// wires reflect TM fully and TE not at all for every `ψ` off the
    /// measure-zero direction across the wires.
    pub fn static_limit(&self) -> Option<Mat2C> {
        match self.resolve().ok()? {
            Resolved::Zero => Some(Mat2C::zero()),
            Resolved::PerfectMirror => Some(perfect_mirror()),
            Resolved::IdealWires => Some(Mat2C::from_real(1.0, 0.0, 0.0, 0.0)),
            _ => None,
        }
    }

    /// Normal-incidence scalar coefficients `(r∥, r⊥)` in the electric-field
    /// convention, as used by the one-dimensional torque.
    pub fn scalar_pair(&self, f: FrequencyPoint) -> Result<(Complex, Complex)> {
        let one = |model: &DispersionModel| -> Result<Complex> {
            match self.geometry {
                Geometry::Film { thickness } => scalar_reflect_film(model, thickness, f),
                _ => scalar_reflect(model, f),
            }
        };
        match self.resolve()? {
            Resolved::Zero => Ok((Complex::new(0.0, 0.0), Complex::new(0.0, 0.0))),
            Resolved::PerfectMirror => Ok((Complex::new(-1.0, 0.0), Complex::new(-1.0, 0.0))),
            Resolved::IdealWires => Ok((Complex::new(-1.0, 0.0), Complex::new(0.0, 0.0))),
            _ => Ok((one(&self.material.eps_par)?, one(&self.material.eps_perp)?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Resolved {
    Zero,
    PerfectMirror,
    IdealWires,
    SemiInfinite,
    Film(f64),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_rule() {
        assert_eq!(sqrt_branch(Complex::new(-4.0, 0.0)), Complex::new(0.0, 2.0));
        assert_eq!(sqrt_branch(Complex::new(-4.0, -0.0)), Complex::new(0.0, 2.0));
        let w = sqrt_branch(Complex::new(-1.0, -1e-3));
        assert!(w.re >= 0.0);
    }

    #[test]
    fn imaginary_kinematics() {
        let u = 1.3e15;
        let q_par = 2.0e7;
        let kin = Kinematics::imaginary(u, q_par).unwrap();
        assert!(kin.k_vac.im > 0.0 && kin.k_vac.re == 0.0);
        assert!(kin.cos.re >= 1.0 && kin.cos.im == 0.0);
        assert!(kin.sin2.re <= 0.0 && kin.sin2.im == 0.0);
        // cos² + sin² = 1
        assert!((kin.cos * kin.cos + kin.sin2 - 1.0).norm() < 1e-12);
        // cosθ = k / q
        assert!((kin.k_vac / kin.q - kin.cos).norm() < 1e-12);
    }

    #[test]
    fn real_kinematics_evanescent() {
        let omega = 1e15;
        let q_par = 2.0 * omega / C_LIGHT;
        let kin = Kinematics::real(omega, q_par).unwrap();
        assert!(kin.k_vac.im > 0.0);
        let kin = Kinematics::real(omega, 0.5 * omega / C_LIGHT).unwrap();
        assert!(kin.k_vac.re > 0.0 && kin.k_vac.im == 0.0);
    }

    #[test]
    fn zero_frequency_rejected() {
        assert!(Kinematics::imaginary(0.0, 1.0).is_err());
    }

    #[test]
    fn plate_dispatch() {
        let kin = Kinematics::imaginary(1e15, 1e7).unwrap();
        assert_eq!(PlateSpec::vacuum().reflection(0.3, &kin).unwrap(), Mat2C::zero());
        assert_eq!(PlateSpec::perfect_mirror().reflection(0.3, &kin).unwrap(), perfect_mirror());
        let drude = UniaxialMaterial::new(DispersionModel::drude(1e16, None), DispersionModel::Vacuum);
        assert_eq!(PlateSpec::film(drude, 0.0).reflection(0.3, &kin).unwrap(), Mat2C::zero());
        let wires =
            PlateSpec::semi_infinite(UniaxialMaterial::new(DispersionModel::IdealConductor, DispersionModel::Vacuum));
        assert_eq!(wires.reflection(0.3, &kin).unwrap(), PlateSpec::ideal_wires().reflection(0.3, &kin).unwrap());
        let bad = PlateSpec::semi_infinite(UniaxialMaterial::new(
            DispersionModel::IdealConductor,
            DispersionModel::constant(2.0),
        ));
        assert!(matches!(bad.validate(), Err(Error::UnsupportedIdealLimit(_))));
        assert!(PlateSpec::film(drude, -1e-9).validate().is_err());
    }
}
