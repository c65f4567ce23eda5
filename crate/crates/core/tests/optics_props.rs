use std::f64::consts::PI;

use casimir::linalg::{mat2_det, mat2_inv, mat2_mul, mat2_trace, mat4_residual, Complex, Mat2C};
use casimir::materials::{eval_eps, DispersionModel, FrequencyPoint};
use casimir::optics::{
    dielectric_tensor, eigenmodes_from_eps, gamma_matrix, reflect_film_from_eps, reflect_semi_infinite_from_eps,
    scalar_reflect_film_from_eps, Kinematics,
};
use casimir::units::C_LIGHT;
use proptest::prelude::*;

fn eps() -> impl Strategy<Value = Complex> {
    (1.01f64..20.0, 0.0f64..5.0).prop_map(|(r, i)| Complex::new(r, i))
}

/// Imaginary-axis kinematics, or real-axis propagating incidence.
fn kinematics() -> impl Strategy<Value = Kinematics> {
    prop_oneof![
        (13.0f64..16.0, 0.0f64..5.0).prop_map(|(lu, s)| {
            let u = 10f64.powf(lu);
            Kinematics::imaginary(u, s * u / C_LIGHT).unwrap()
        }),
        (13.0f64..16.0, 0.0f64..0.99).prop_map(|(lw, s2)| {
            let w = 10f64.powf(lw);
            Kinematics::real(w, s2.sqrt() * w / C_LIGHT).unwrap()
        }),
    ]
}

fn mat2() -> impl Strategy<Value = Mat2C> {
    proptest::array::uniform8(-1.0f64..1.0).prop_map(|a| {
        Mat2C::new(
            Complex::new(a[0], a[1]),
            Complex::new(a[2], a[3]),
            Complex::new(a[4], a[5]),
            Complex::new(a[6], a[7]),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eigenmode_residuals(p in eps(), o in eps(), psi in 0.0..2.0 * PI, kin in kinematics()) {
        let g = gamma_matrix(&dielectric_tensor(p, o, psi), kin.sin_theta()).unwrap();
        let m = eigenmodes_from_eps(p, o, psi, &kin).unwrap();
        for (k, v) in [(m.k_o, m.vo_plus), (-m.k_o, m.vo_minus), (m.k_e, m.ve_plus), (-m.k_e, m.ve_minus)] {
            let res = mat4_residual(&g, kin.q, k, &v).unwrap() / kin.q.norm();
            prop_assert!(res < 1e-12, "residual {}", res);
        }
    }

    #[test]
    fn gamma_structural_zeros(p in eps(), o in eps(), psi in 0.0..2.0 * PI, kin in kinematics()) {
        let g = gamma_matrix(&dielectric_tensor(p, o, psi), kin.sin_theta()).unwrap();
        for (i, j) in [(0, 3), (1, 3), (2, 0), (2, 1), (2, 2), (3, 3)] {
            prop_assert_eq!(g.m[i][j], Complex::new(0.0, 0.0));
        }
    }

    #[test]
    fn stokes_identity(p in eps(), o in eps(), psi in 0.0..2.0 * PI, kin in kinematics()) {
        let r = reflect_film_from_eps(p, o, 0.0, psi, &kin).unwrap();
        prop_assert!(r.max_abs() < 1e-10, "{:?}", r);
    }

    #[test]
    fn thick_film_is_semi_infinite(p in eps(), o in eps(), psi in 0.0..2.0 * PI, lu in 13.0f64..16.0, s in 0.0f64..5.0) {
        let u = 10f64.powf(lu);
        let kin = Kinematics::imaginary(u, s * u / C_LIGHT).unwrap();
        let m = eigenmodes_from_eps(p, o, psi, &kin).unwrap();
        let d = 40.0 / m.k_o.im.min(m.k_e.im);
        let film = reflect_film_from_eps(p, o, d, psi, &kin).unwrap();
        let semi = reflect_semi_infinite_from_eps(p, o, psi, &kin).unwrap();
        prop_assert!(film.max_abs_diff(&semi) < 1e-8);
    }

    #[test]
    fn normal_incidence_film_is_scalar_airy(p in eps(), o in eps(), lu in 13.0f64..16.0, d in 1e-10f64..1e-6, imaginary: bool) {
        let w = 10f64.powf(lu);
        let f = if imaginary { FrequencyPoint::imaginary(w) } else { FrequencyPoint::real(w) };
        let kin = Kinematics::normal(f).unwrap();
        let r = reflect_film_from_eps(p, o, d, 0.0, &kin).unwrap();
        let rp = scalar_reflect_film_from_eps(p, d, f).unwrap();
        let ro = scalar_reflect_film_from_eps(o, d, f).unwrap();
        prop_assert!((r.m[0][0] + rp).norm() < 1e-10);
        prop_assert!((r.m[1][1] - ro).norm() < 1e-10);
        prop_assert!(r.m[0][1].norm() < 1e-10 && r.m[1][0].norm() < 1e-10);
    }

    #[test]
    fn reflection_is_pi_periodic_in_psi(p in eps(), o in eps(), psi in 0.0..PI, kin in kinematics()) {
        let a = reflect_semi_infinite_from_eps(p, o, psi, &kin).unwrap();
        let b = reflect_semi_infinite_from_eps(p, o, psi + PI, &kin).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-10 * (1.0 + a.max_abs()));
    }

    #[test]
    fn passive_reflection_is_bounded_on_imaginary_axis(p in eps(), o in eps(), psi in 0.0..2.0 * PI, lu in 13.0f64..16.0, s in 0.0f64..5.0) {
        let u = 10f64.powf(lu);
        let kin = Kinematics::imaginary(u, s * u / C_LIGHT).unwrap();
        let r = reflect_semi_infinite_from_eps(p.re.into(), o.re.into(), psi, &kin).unwrap();
        prop_assert!(r.spectral_norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn inverse_round_trip(m in mat2()) {
        let d = mat2_det(&m).norm();
        let cond = m.spectral_norm() * m.spectral_norm() / d.max(f64::MIN_POSITIVE);
        prop_assume!(cond < 1e6);
        let back = mat2_inv(&mat2_inv(&m).unwrap()).unwrap();
        for (x, y) in back.entries().iter().zip(m.entries()) {
            prop_assert!((x - y).norm() <= 1e-10 * m.max_abs());
        }
    }

    #[test]
    fn det_is_multiplicative(a in mat2(), b in mat2()) {
        let lhs = mat2_det(&mat2_mul(&a, &b));
        let rhs = mat2_det(&a) * mat2_det(&b);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn trace_is_similarity_invariant(m in mat2(), p in mat2()) {
        let d = mat2_det(&p).norm();
        prop_assume!(p.spectral_norm() * p.spectral_norm() / d.max(f64::MIN_POSITIVE) < 1e3);
        let t = mat2_trace(&mat2_mul(&mat2_mul(&p, &m), &mat2_inv(&p).unwrap()));
        prop_assert!((t - mat2_trace(&m)).norm() <= 1e-10 * (1.0 + m.max_abs()));
    }

    #[test]
    fn drude_on_imaginary_axis_is_real_and_decreasing(wp in 1e13f64..1e16, tau in prop::option::of(1e-16f64..1e-12), a in -6.0f64..6.0) {
        let m = DispersionModel::drude(wp, tau);
        let u1 = wp * 10f64.powf(a);
        let e1 = eval_eps(&m, FrequencyPoint::imaginary(u1)).unwrap();
        let e2 = eval_eps(&m, FrequencyPoint::imaginary(u1 * 1.1)).unwrap();
        prop_assert_eq!(e1.im, 0.0);
        prop_assert!(e1.re >= 1.0 && e2.re <= e1.re);
    }
}
