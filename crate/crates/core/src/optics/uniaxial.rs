//! Uniaxial slab with the optical axis in the surface plane: eigenmodes of
//! the 4×4 field equation, interface matrices, and the reflection of a
//! semi-infinite slab and of a free-standing film.
//!
//! The ordinary and extraordinary eigenvectors carry `tanψ` and `cotψ`
//! factors. They are used here rescaled, `V^o` by `cosψ` and `V^e` by
//! `sinψ`, which removes the poles at `ψ = 0, π/2`. The reflection matrices
//! seen from the cavity (`r02`, film `r2`) do not depend on the column
//! normalization; `r20`, `t20` and `t02` are expressed in the rescaled basis.

use crate::error::{Error, Result};
use crate::linalg::{mat2_inv, Complex, Mat2C, Vec4C};
use crate::materials::{eval_uniaxial, UniaxialMaterial};

use super::{orient_with, sqrt_branch, Kinematics};

/// `(I², J²)` with `n_o² = ε⊥`, `n_e² = ε∥`.
pub fn ij_quantities(eps_par: Complex, eps_perp: Complex, sin2: Complex, psi: f64) -> (Complex, Complex) {
    let (s, c) = psi.sin_cos();
    let i2 = eps_perp * eps_par - sin2 * (eps_perp * (s * s) + eps_par * (c * c));
    let j2 = eps_perp - sin2;
    (i2, j2)
}

/// Normal wavevectors and rescaled eigenvectors of the four bulk modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenmodes {
    pub k_o: Complex,
    pub k_e: Complex,
    /// `J = k_o / q`.
    pub j: Complex,
    /// `k_e / q = I / √ε⊥`.
    pub m: Complex,
    pub vo_plus: Vec4C,
    pub vo_minus: Vec4C,
    pub ve_plus: Vec4C,
    pub ve_minus: Vec4C,
}

impl Eigenmodes {
    fn s_matrices(&self) -> [Mat2C; 4] {
        let cols = |o: &Vec4C, e: &Vec4C, r0: usize, r1: usize| Mat2C::new(o.v[r0], e.v[r0], o.v[r1], e.v[r1]);
        [
            cols(&self.vo_plus, &self.ve_plus, 0, 3),
            cols(&self.vo_plus, &self.ve_plus, 1, 2),
            cols(&self.vo_minus, &self.ve_minus, 0, 3),
            cols(&self.vo_minus, &self.ve_minus, 1, 2),
        ]
    }
}

pub fn eigenmodes(mat: &UniaxialMaterial, psi: f64, kin: &Kinematics) -> Result<Eigenmodes> {
    let (eps_par, eps_perp) = eval_uniaxial(mat, kin.f)?;
    eigenmodes_from_eps(eps_par, eps_perp, psi, kin)
}

pub fn eigenmodes_from_eps(eps_par: Complex, eps_perp: Complex, psi: f64, kin: &Kinematics) -> Result<Eigenmodes> {
    let (i2, j2) = ij_quantities(eps_par, eps_perp, kin.sin2, psi);
    if eps_perp.norm() == 0.0 {
        return Err(Error::DegenerateEpsZZ);
    }
    let j = orient_with(kin.q, sqrt_branch(j2));
    let m = orient_with(kin.q, sqrt_branch(i2 / eps_perp));
    if j.norm() == 0.0 || m.norm() == 0.0 {
        return Err(Error::SingularInterface("grazing ordinary or extraordinary mode (J = 0 or I = 0)".into()));
    }
    let (s, c) = psi.sin_cos();
    let (s, c) = (Complex::new(s, 0.0), Complex::new(c, 0.0));
    let jinv = j.inv();
    let minv = m.inv();
    let o1 = s * jinv;
    let o2 = eps_perp * s * jinv * jinv;
    let o3 = c * jinv;
    let e1 = -j2 * c * minv / eps_perp;
    let e3 = s * minv;
    Ok(Eigenmodes {
        k_o: j * kin.q,
        k_e: m * kin.q,
        j,
        m,
        vo_plus: Vec4C::new(o1, o2, o3, c),
        vo_minus: Vec4C::new(-o1, o2, -o3, c),
        ve_plus: Vec4C::new(e1, -c, e3, s),
        ve_minus: Vec4C::new(-e1, -c, -e3, s),
    })
}

/// Front-surface matrices of a film (or of a semi-infinite slab).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceMatrices {
    pub r02: Mat2C,
    pub r20: Mat2C,
    pub t02: Mat2C,
    pub t20: Mat2C,
    pub k_o: Complex,
    pub k_e: Complex,
}

fn singular(what: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::SingularMatrix { det } => Error::SingularInterface(format!("{what}: |det| = {det:e}")),
        other => other,
    }
}

pub fn film_interface_matrices(mat: &UniaxialMaterial, psi: f64, kin: &Kinematics) -> Result<InterfaceMatrices> {
    let (eps_par, eps_perp) = eval_uniaxial(mat, kin.f)?;
    film_interface_matrices_from_eps(eps_par, eps_perp, psi, kin)
}

pub fn film_interface_matrices_from_eps(
    eps_par: Complex,
    eps_perp: Complex,
    psi: f64,
    kin: &Kinematics,
) -> Result<InterfaceMatrices> {
    let modes = eigenmodes_from_eps(eps_par, eps_perp, psi, kin)?;
    let [s1, s2, s3, s4] = modes.s_matrices();
    let cos = kin.cos;
    // Incidence from vacuum: ψ₊ = 2cosθ (s1 + cosθ s2)⁻¹ ξ_i, which is the same
    // as s1⁻¹ cosθ (I − r02) without inverting s1.
    let front_inv = mat2_inv(&(s1 + s2.scale(cos))).map_err(singular("s1 + s2 cos(theta)"))?;
    let t02 = front_inv.scale(cos * 2.0);
    let r02 = s2 * t02 - Mat2C::identity();
    let r20 = -(front_inv * (s3 + s4.scale(cos)));
    let t20 = s4 + s2 * r20;
    let out = InterfaceMatrices { r02, r20, t02, t20, k_o: modes.k_o, k_e: modes.k_e };
    if !(r02.is_finite() && r20.is_finite() && t02.is_finite() && t20.is_finite()) {
        return Err(Error::NonFinite("film_interface_matrices"));
    }
    Ok(out)
}

/// Reflection matrix of a semi-infinite uniaxial slab.
pub fn reflect_semi_infinite(mat: &UniaxialMaterial, psi: f64, kin: &Kinematics) -> Result<Mat2C> {
    let (eps_par, eps_perp) = eval_uniaxial(mat, kin.f)?;
    reflect_semi_infinite_from_eps(eps_par, eps_perp, psi, kin)
}

pub fn reflect_semi_infinite_from_eps(
    eps_par: Complex,
    eps_perp: Complex,
    psi: f64,
    kin: &Kinematics,
) -> Result<Mat2C> {
    let modes = eigenmodes_from_eps(eps_par, eps_perp, psi, kin)?;
    let [s1, s2, _, _] = modes.s_matrices();
    let front_inv = mat2_inv(&(s1 + s2.scale(kin.cos))).map_err(singular("s1 + s2 cos(theta)"))?;
    let r = (s2 * front_inv).scale(kin.cos * 2.0) - Mat2C::identity();
    if !r.is_finite() {
        return Err(Error::NonFinite("reflect_semi_infinite"));
    }
    Ok(r)
}

/// `r = (s2⁻¹ + s1⁻¹ cosθ)⁻¹ (s1⁻¹ cosθ − s2⁻¹)` evaluated term by term;
/// algebraically identical to [`reflect_semi_infinite`].
pub fn reflect_semi_infinite_literal(eps_par: Complex, eps_perp: Complex, psi: f64, kin: &Kinematics) -> Result<Mat2C> {
    let modes = eigenmodes_from_eps(eps_par, eps_perp, psi, kin)?;
    let [s1, s2, _, _] = modes.s_matrices();
    let s1i = mat2_inv(&s1).map_err(singular("s1"))?;
    let s2i = mat2_inv(&s2).map_err(singular("s2"))?;
    let a = s1i.scale(kin.cos);
    mat2_inv(&(s2i + a)).map_err(singular("s2^-1 + s1^-1 cos(theta)")).map(|m| m * (a - s2i))
}

/// Reflection matrix of a free-standing uniaxial film of thickness `d` (m),
/// summing the internal multiple reflections.
pub fn reflect_film(mat: &UniaxialMaterial, d: f64, psi: f64, kin: &Kinematics) -> Result<Mat2C> {
    let (eps_par, eps_perp) = eval_uniaxial(mat, kin.f)?;
    reflect_film_from_eps(eps_par, eps_perp, d, psi, kin)
}

pub fn reflect_film_from_eps(eps_par: Complex, eps_perp: Complex, d: f64, psi: f64, kin: &Kinematics) -> Result<Mat2C> {
    if !(d >= 0.0) {
        return Err(Error::InvalidConfig(format!("film thickness must be >= 0, got {d}")));
    }
    let im = film_interface_matrices_from_eps(eps_par, eps_perp, psi, kin)?;
    let phase = |k: Complex| (Complex::i() * k * d).exp();
    let kappa = Mat2C::diag(phase(im.k_o), phase(im.k_e));
    let rk = im.r20 * kappa;
    let round = mat2_inv(&(Mat2C::identity() - rk * rk)).map_err(|e| match e {
        Error::SingularMatrix { .. } => Error::ResonantFilm,
        other => other,
    })?;
    let r2 = im.r02 + im.t20 * kappa * rk * round * im.t02;
    if !r2.is_finite() {
        return Err(Error::NonFinite("reflect_film"));
    }
    Ok(r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{mat4_residual, re};
    use crate::materials::DispersionModel;
    use crate::optics::{dielectric_tensor, gamma_matrix, scalar_reflect, scalar_reflect_film};
    use crate::units::C_LIGHT;
    use std::f64::consts::PI;

    fn constant(p: f64, o: f64) -> UniaxialMaterial {
        UniaxialMaterial::new(DispersionModel::constant(p), DispersionModel::constant(o))
    }

    #[test]
    fn ij_examples() {
        assert_eq!(ij_quantities(re(1.0), re(1.0), re(0.0), 0.4), (re(1.0), re(1.0)));
        assert_eq!(ij_quantities(re(3.0), re(2.0), re(0.0), 0.4), (re(6.0), re(2.0)));
        assert_eq!(ij_quantities(re(3.0), re(2.0), re(1.0), 0.0), (re(3.0), re(1.0)));
    }

    #[test]
    fn eigenvalue_examples() {
        let kin = Kinematics::real(1e15, 0.0).unwrap();
        let m = eigenmodes_from_eps(re(2.0), re(2.0), 0.3, &kin).unwrap();
        assert!((m.k_o - kin.q * 2f64.sqrt()).norm() < 1e-9 * kin.q.norm());
        assert!((m.k_e - kin.q * 2f64.sqrt()).norm() < 1e-9 * kin.q.norm());

        let kin = Kinematics::real(1e15, 1e15 / C_LIGHT).unwrap();
        let m = eigenmodes_from_eps(re(3.0), re(2.0), 0.0, &kin).unwrap();
        assert!((m.k_o - kin.q).norm() < 1e-12 * kin.q.norm());
        assert!((m.k_e - kin.q * 1.5f64.sqrt()).norm() < 1e-12 * kin.q.norm());
    }

    #[test]
    fn eigenvector_residuals() {
        let u = 1e15;
        let q_par = u / C_LIGHT; // sin²θ = −1 on the imaginary branch
        for &(kin, psi) in &[
            (Kinematics::imaginary(u, q_par).unwrap(), 0.3),
            (Kinematics::real(u, 0.5 * u / C_LIGHT).unwrap(), 0.3),
            (Kinematics::imaginary(u, 3.0 * q_par).unwrap(), 1.2),
        ] {
            let (p, o) = (re(3.0), re(2.0));
            let g = gamma_matrix(&dielectric_tensor(p, o, psi), kin.sin_theta()).unwrap();
            let m = eigenmodes_from_eps(p, o, psi, &kin).unwrap();
            for (k, v) in [(m.k_o, m.vo_plus), (-m.k_o, m.vo_minus), (m.k_e, m.ve_plus), (-m.k_e, m.ve_minus)] {
                let res = mat4_residual(&g, kin.q, k, &v).unwrap() / kin.q.norm();
                assert!(res < 1e-12, "residual {res}");
            }
        }
    }

    #[test]
    fn vacuum_film_is_transparent() {
        let kin = Kinematics::imaginary(1e15, 4e6).unwrap();
        let im = film_interface_matrices_from_eps(re(1.0), re(1.0), 0.7, &kin).unwrap();
        assert!(im.r02.max_abs() < 1e-14);
        assert!(im.r20.max_abs() < 1e-14);
    }

    #[test]
    fn literal_and_single_inverse_forms_agree() {
        let kin = Kinematics::imaginary(2e15, 1.1e7).unwrap();
        for psi in [0.2, 0.9, 2.5] {
            let a = reflect_semi_infinite_from_eps(re(5.0), re(1.7), psi, &kin).unwrap();
            let b = reflect_semi_infinite_literal(re(5.0), re(1.7), psi, &kin).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-13);
        }
    }

    #[test]
    fn isotropic_normal_incidence_matches_scalar_fresnel() {
        let kin = Kinematics::real(1e15, 0.0).unwrap();
        let r = reflect_semi_infinite(&constant(4.0, 4.0), 0.0, &kin).unwrap();
        let rs = scalar_reflect(&DispersionModel::constant(4.0), kin.f).unwrap();
        assert!((rs - re(-1.0 / 3.0)).norm() < 1e-15);
        // p row uses the B_y spinor, which flips the sign of the E-field amplitude
        assert!((r.m[0][0] + rs).norm() < 1e-14);
        assert!((r.m[1][1] - rs).norm() < 1e-14);
        assert!(r.m[0][1].norm() < 1e-14 && r.m[1][0].norm() < 1e-14);
        let im = film_interface_matrices(&constant(4.0, 4.0), 0.0, &kin).unwrap();
        // internal reflection is diagonal in the (o, e) = (s, p) mode basis
        assert!(im.r20.m[0][1].norm() < 1e-14 && im.r20.m[1][0].norm() < 1e-14);
        assert!((im.r20.m[0][0].norm() - im.r02.m[1][1].norm()).abs() < 1e-14);
        assert!((im.r20.m[1][1].norm() - im.r02.m[0][0].norm()).abs() < 1e-14);
    }

    #[test]
    fn stokes_identity_at_zero_thickness() {
        let kin = Kinematics::imaginary(7e14, 9e6).unwrap();
        let r = reflect_film_from_eps(re(9.0), re(2.5), 0.0, 0.6, &kin).unwrap();
        assert!(r.max_abs() < 1e-10);
    }

    #[test]
    fn thick_film_tends_to_semi_infinite() {
        let kin = Kinematics::imaginary(7e14, 9e6).unwrap();
        let modes = eigenmodes_from_eps(re(9.0), re(2.5), 0.6, &kin).unwrap();
        let d = 40.0 / modes.k_o.im.min(modes.k_e.im);
        let film = reflect_film_from_eps(re(9.0), re(2.5), d, 0.6, &kin).unwrap();
        let semi = reflect_semi_infinite_from_eps(re(9.0), re(2.5), 0.6, &kin).unwrap();
        assert!(film.max_abs_diff(&semi) < 1e-8);
    }

    #[test]
    fn film_diagonal_matches_scalar_airy() {
        let omega = 3e15;
        let d = 40e-9;
        for kin in [Kinematics::imaginary(omega, 0.0).unwrap(), Kinematics::real(omega, 0.0).unwrap()] {
            let mat = UniaxialMaterial::new(
                DispersionModel::drude(5e15, Some(1e-14)),
                DispersionModel::drude(2e15, Some(1e-14)),
            );
            let r = reflect_film(&mat, d, 0.0, &kin).unwrap();
            let r_par = scalar_reflect_film(&mat.eps_par, d, kin.f).unwrap();
            let r_perp = scalar_reflect_film(&mat.eps_perp, d, kin.f).unwrap();
            assert!((r.m[0][0] + r_par).norm() < 1e-10);
            assert!((r.m[1][1] - r_perp).norm() < 1e-10);
        }
    }

    #[test]
    fn decoupling_angles_have_no_poles() {
        let kin = Kinematics::imaginary(1e15, 5e6).unwrap();
        for psi in [0.0, PI / 2.0] {
            let r = reflect_semi_infinite_from_eps(re(6.0), re(2.0), psi, &kin).unwrap();
            assert!(r.m[0][1].norm() < 1e-12 && r.m[1][0].norm() < 1e-12);
            let r_near = reflect_semi_infinite_from_eps(re(6.0), re(2.0), psi + 1e-9, &kin).unwrap();
            assert!(r.max_abs_diff(&r_near) < 1e-6);
        }
    }
}
