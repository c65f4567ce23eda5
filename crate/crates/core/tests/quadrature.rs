use std::f64::consts::PI;

use casimir::materials::{DispersionModel, UniaxialMaterial};
use casimir::optics::PlateSpec;
use casimir::quadrature::{
    integrate_adaptive, integrate_cavity, integrate_cavity_t0, oracle_cavity, oracle_integrate, MatsubaraSpec,
    Observable, OracleGrid, QuadratureSpec,
};
use casimir::spectral::CavityConfig;
use casimir::units::C_LIGHT;

const L: f64 = 1e-7;

fn omega0() -> f64 {
    PI * C_LIGHT / L
}

fn drude_wires() -> UniaxialMaterial {
    UniaxialMaterial::new(DispersionModel::drude(1.4 * omega0(), None), DispersionModel::drude(0.7 * omega0(), None))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn adaptive_matches_closed_forms() {
    let spec = QuadratureSpec::default().with_rel_tol(1e-12);
    let v = integrate_adaptive(|x: f64| Ok(x.sqrt()), &[0.0, 1.0], &spec, false).unwrap();
    assert!((v.value - 2.0 / 3.0).abs() < 1e-11);
    let v = integrate_adaptive(|x: f64| Ok((x * 40.0).sin()), &[0.0, 0.5, 1.0], &spec, true).unwrap();
    assert!((v.value - (1.0 - 40f64.cos()) / 40.0).abs() < 1e-11);
    let o = oracle_integrate(|x: f64| (-x).exp() * x * x, 2048);
    assert!((o - 2.0).abs() < 1e-8, "{o}");
}

#[test]
fn engine_matches_oracle_wires() {
    let cfg = CavityConfig::new(L, 0.0, PlateSpec::ideal_wires(), PlateSpec::ideal_wires());
    let e = integrate_cavity_t0(&cfg, Observable::Energy, &QuadratureSpec::default()).unwrap().estimate;
    let o = oracle_cavity(&cfg, Observable::Energy, &OracleGrid::default()).unwrap();
    assert!(rel(e.value, o) < 1e-5, "{} vs {}", e.value, o);
}

#[test]
fn engine_matches_oracle_drude_torque() {
    let cfg = CavityConfig::new(L, PI / 4.0, PlateSpec::semi_infinite(drude_wires()), PlateSpec::ideal_wires());
    let e = integrate_cavity_t0(&cfg, Observable::Torque, &QuadratureSpec::default()).unwrap().estimate;
    let o = oracle_cavity(&cfg, Observable::Torque, &OracleGrid::default()).unwrap();
    assert!(rel(e.value, o) < 1e-5, "{} vs {}", e.value, o);
    assert!(e.err <= 1e-5 * e.value.abs());
}

#[test]
fn engine_matches_oracle_matsubara() {
    let t = 0.5;
    let kelvin = t * casimir::units::HBAR * C_LIGHT / (casimir::units::K_B * L);
    let cfg =
        CavityConfig::new(L, PI / 4.0, PlateSpec::ideal_wires(), PlateSpec::ideal_wires()).with_temperature(kelvin);
    let spec = QuadratureSpec::default().with_rel_tol(1e-6);
    let e = integrate_cavity(&cfg, Observable::Energy, &spec, &MatsubaraSpec::default()).unwrap();
    assert!(e.matsubara_terms > 1);
    let o = oracle_cavity(&cfg, Observable::Energy, &OracleGrid::default()).unwrap();
    assert!(rel(e.estimate.value, o) < 1e-5, "{} vs {}", e.estimate.value, o);
}

#[test]
fn results_are_bitwise_deterministic() {
    let cfg = CavityConfig::new(L, 0.3, PlateSpec::film(drude_wires(), 2e-8), PlateSpec::ideal_wires());
    let spec = QuadratureSpec::default().with_rel_tol(1e-6);
    let a = integrate_cavity_t0(&cfg, Observable::Energy, &spec).unwrap();
    let b = integrate_cavity_t0(&cfg, Observable::Energy, &spec).unwrap();
    assert_eq!(a.estimate.value.to_bits(), b.estimate.value.to_bits());
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let c = pool.install(|| integrate_cavity_t0(&cfg, Observable::Energy, &spec)).unwrap();
    assert_eq!(a.estimate.value.to_bits(), c.estimate.value.to_bits());
}
