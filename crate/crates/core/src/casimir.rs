//! Observables of the cavity: energy, pressure and torque per unit area, the
//! one-dimensional torque, reflection anisotropy of films and the film
//! thickness that maximizes the torque.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::{DispersionModel, FrequencyPoint, UniaxialMaterial};
use crate::optics::{scalar_reflect_film, Geometry, PlateSpec};
use crate::quadrature::{integrate_cavity, integrate_semiinf, Estimate, MatsubaraSpec, Observable, QuadratureSpec};
use crate::spectral::CavityConfig;
use crate::units::C_LIGHT;

/// Accuracy settings shared by every observable.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Solver {
    pub quadrature: QuadratureSpec,
    pub matsubara: MatsubaraSpec,
}

impl Solver {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.quadrature.rel_tol = rel_tol;
        self
    }
}

/// One observable in natural units with its SI counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantity {
    pub value: f64,
    pub err_est: f64,
    pub si: f64,
    pub si_err_est: f64,
}

impl Quantity {
    fn new(est: Estimate, si_factor: f64) -> Self {
        Quantity { value: est.value, err_est: est.err, si: est.value * si_factor, si_err_est: est.err * si_factor }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metadata {
    pub separation_m: f64,
    pub gamma_rad: f64,
    pub temperature_k: f64,
    /// `k_B T L / (ħc)`.
    pub reduced_temperature: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Some node below `u = η c Q` used reflections frozen at `u = η c Q`.
    pub zero_mode_proxy: bool,
    pub matsubara_terms: usize,
}

/// Energy and torque per area in `ħc/L³`, pressure in `ħc/L⁴`; SI columns in
/// J/m², N/m² and N/m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observables {
    pub energy_per_area: Quantity,
    pub force_per_area: Quantity,
    pub torque_per_area: Quantity,
    pub metadata: Metadata,
}

fn metadata(cfg: &CavityConfig, solver: &Solver) -> Metadata {
    Metadata {
        separation_m: cfg.separation,
        gamma_rad: cfg.gamma,
        temperature_k: cfg.temperature,
        reduced_temperature: cfg.reduced_temperature(),
        rel_tol: solver.quadrature.rel_tol,
        abs_tol: solver.quadrature.abs_tol,
        zero_mode_proxy: false,
        matsubara_terms: 0,
    }
}

fn observe(cfg: &CavityConfig, obs: Observable, solver: &Solver, meta: &mut Metadata) -> Result<Quantity> {
    let r = integrate_cavity(cfg, obs, &solver.quadrature, &solver.matsubara)?;
    meta.zero_mode_proxy |= r.zero_mode_proxy;
    meta.matsubara_terms = meta.matsubara_terms.max(r.matsubara_terms);
    let units = cfg.units();
    let factor = match obs {
        Observable::Force => units.force_per_area(),
        _ => units.energy_per_area(),
    };
    Ok(Quantity::new(r.estimate, factor))
}

/// Casimir energy per unit area.
pub fn energy(cfg: &CavityConfig, solver: &Solver) -> Result<Quantity> {
    observe(cfg, Observable::Energy, solver, &mut metadata(cfg, solver))
}

/// Pressure `−∂(U/A)/∂L`; negative is attractive.
pub fn force(cfg: &CavityConfig, solver: &Solver) -> Result<Quantity> {
    observe(cfg, Observable::Force, solver, &mut metadata(cfg, solver))
}

/// Torque per unit area `−∂(U/A)/∂γ`.
pub fn torque(cfg: &CavityConfig, solver: &Solver) -> Result<Quantity> {
    observe(cfg, Observable::Torque, solver, &mut metadata(cfg, solver))
}

pub fn observables(cfg: &CavityConfig, solver: &Solver) -> Result<Observables> {
    let mut meta = metadata(cfg, solver);
    let energy_per_area = observe(cfg, Observable::Energy, solver, &mut meta)?;
    let force_per_area = observe(cfg, Observable::Force, solver, &mut meta)?;
    let torque_per_area = observe(cfg, Observable::Torque, solver, &mut meta)?;
    Ok(Observables { energy_per_area, force_per_area, torque_per_area, metadata: meta })
}

/// Torque of the one-dimensional cavity at `T = 0` in `ħc/L`, SI in J,
/// built from the normal-incidence coefficients `(r∥, r⊥)` of both plates.
pub fn torque_1d(cfg: &CavityConfig, solver: &Solver) -> Result<Quantity> {
    cfg.validate()?;
    if cfg.temperature != 0.0 {
        return Err(Error::InvalidConfig("the one-dimensional torque is defined at T = 0 only".into()));
    }
    let (s, c) = cfg.gamma.sin_cos();
    let sin2g = 2.0 * s * c;
    let units = cfg.units();
    if sin2g == 0.0 {
        return Ok(Quantity::new(Estimate::exact(0.0), units.energy_1d()));
    }
    let scale = units.frequency_unit();
    let integrand = |lambda: f64| -> Result<f64> {
        let e = (-2.0 * lambda).exp();
        if e == 0.0 {
            return Ok(0.0);
        }
        let f = FrequencyPoint::imaginary(lambda * scale);
        let (a_par, a_perp) = cfg.plate1.scalar_pair(f)?;
        let (b_par, b_perp) = cfg.plate2.scalar_pair(f)?;
        let cross = (a_par - a_perp) * (b_par - b_perp) * e;
        let den = cross * (s * s) + (1.0 - a_par * b_par * e) * (1.0 - a_perp * b_perp * e);
        Ok((cross / den).re)
    };
    let est = integrate_semiinf(integrand, &solver.quadrature)?;
    Ok(Quantity::new(est.scale(-sin2g / (2.0 * PI)), units.energy_1d()))
}

/// Normal-incidence film coefficients at one thickness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnisotropyRow {
    pub thickness: f64,
    pub r_par: f64,
    pub r_perp: f64,
    pub delta_r: f64,
}

/// `|r∥|`, `|r⊥|` and `|r∥ − r⊥|` of a free-standing film at real frequency
/// `omega` for each thickness in `d_grid`.
pub fn anisotropy_diagnostic(mat: &UniaxialMaterial, omega: f64, d_grid: &[f64]) -> Result<Vec<AnisotropyRow>> {
    mat.validate()?;
    let f = FrequencyPoint::real(omega);
    f.validate()?;
    d_grid
        .iter()
        .map(|&d| {
            let rp = scalar_reflect_film(&mat.eps_par, d, f)?;
            let ro = scalar_reflect_film(&mat.eps_perp, d, f)?;
            Ok(AnisotropyRow { thickness: d, r_par: rp.norm(), r_perp: ro.norm(), delta_r: (rp - ro).norm() })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorqueModel {
    /// Normal-incidence cavity, [`torque_1d`].
    OneDimensional,
    /// Full cavity, [`torque`].
    ThreeDimensional,
}

/// Bracket for the thickness search, m. `None` ends default to a factor 30
/// around the seed estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThicknessSearch {
    pub d_min: Option<f64>,
    pub d_max: Option<f64>,
    pub model: TorqueModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimumStatus {
    Interior,
    BoundaryMaximum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThicknessOptimum {
    pub status: OptimumStatus,
    pub model: TorqueModel,
    /// m.
    pub d_opt: f64,
    /// Natural units of the chosen model (`ħc/L³` or `ħc/L`).
    pub torque_at_opt: f64,
    /// Same plate as a semi-infinite slab.
    pub torque_asymptotic: f64,
    /// `|torque_at_opt / torque_asymptotic|`.
    pub ratio: f64,
    /// `2c²/(L ω_p⊥ ω_p∥)`, m; absent unless both responses are Drude.
    pub seed_estimate: Option<f64>,
    pub d_min: f64,
    pub d_max: f64,
    pub evaluations: usize,
}

/// Thickness at which a film between two skin depths is most anisotropic,
/// evaluated at `|ω| = c/L`.
pub fn thickness_seed(material: &UniaxialMaterial, separation: f64) -> Option<f64> {
    match (material.eps_par, material.eps_perp) {
        (DispersionModel::Drude { omega_p: wp_par, .. }, DispersionModel::Drude { omega_p: wp_perp, .. })
            if wp_par > 0.0 && wp_perp > 0.0 =>
        {
            Some(2.0 * C_LIGHT * C_LIGHT / (separation * wp_par * wp_perp))
        }
        _ => None,
    }
}

const SCAN_POINTS: usize = 9;
const GOLDEN_REL_TOL: f64 = 1e-3;
const SEED_FACTOR: f64 = 30.0;

/// Maximizes `|torque|` over the thickness of `plate2`: a log-spaced scan
/// followed by golden-section refinement in `ln d` to `1e−3` relative.
pub fn optimize_thickness(cfg: &CavityConfig, solver: &Solver, search: &ThicknessSearch) -> Result<ThicknessOptimum> {
    let material = match cfg.plate2.geometry {
        Geometry::Film { .. } => cfg.plate2.material,
        _ => return Err(Error::InvalidConfig("thickness optimization needs a film as plate2".into())),
    };
    let seed = thickness_seed(&material, cfg.separation);
    let (d_min, d_max) =
        match (search.d_min.or(seed.map(|s| s / SEED_FACTOR)), search.d_max.or(seed.map(|s| s * SEED_FACTOR))) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::InvalidConfig("d_min and d_max are required without Drude responses".into())),
        };
    if !(d_min > 0.0 && d_max > d_min && d_max.is_finite()) {
        return Err(Error::InvalidConfig(format!("need 0 < d_min < d_max, got [{d_min}, {d_max}]")));
    }
    let mut evaluations = 0;
    let mut eval = |plate2: PlateSpec| -> Result<f64> {
        evaluations += 1;
        let c = CavityConfig { plate2, ..*cfg };
        Ok(match search.model {
            TorqueModel::OneDimensional => torque_1d(&c, solver)?.value,
            TorqueModel::ThreeDimensional => torque(&c, solver)?.value,
        })
    };
    let mut at = |x: f64| eval(PlateSpec::film(material, x.exp()));

    let (lo, hi) = (d_min.ln(), d_max.ln());
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let xs: Vec<f64> = (0..SCAN_POINTS).map(|i| lo + step * i as f64).collect();
    let mut ys = Vec::with_capacity(SCAN_POINTS);
    for &x in &xs {
        ys.push(at(x)?);
    }
    let mut best = 0;
    for i in 1..SCAN_POINTS {
        if ys[i].abs() > ys[best].abs() {
            best = i;
        }
    }
    let (status, x_opt, y_opt) = if best == 0 || best == SCAN_POINTS - 1 {
        (OptimumStatus::BoundaryMaximum, xs[best], ys[best])
    } else {
        let (x, y) = golden_max(&mut at, xs[best - 1], xs[best + 1], (xs[best], ys[best]))?;
        (OptimumStatus::Interior, x, y)
    };
    let asymptotic = eval(PlateSpec::semi_infinite(material))?;
    Ok(ThicknessOptimum {
        status,
        model: search.model,
        d_opt: x_opt.exp(),
        torque_at_opt: y_opt,
        torque_asymptotic: asymptotic,
        ratio: (y_opt / asymptotic).abs(),
        seed_estimate: seed,
        d_min,
        d_max,
        evaluations,
    })
}

/// Golden-section search for the maximum of `|f|` on `[a, b]` in `ln d`,
/// stopping when the bracket is narrower than `GOLDEN_REL_TOL`. `known` is a
/// previously evaluated interior point, kept if it stays the best.
fn golden_max<F>(f: &mut F, mut a: f64, mut b: f64, known: (f64, f64)) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = known;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for (x, y) in [(c, fc), (d, fd)] {
        if y.abs() > best.1.abs() {
            best = (x, y);
        }
    }
    while b - a > GOLDEN_REL_TOL {
        if fc.abs() >= fd.abs() {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
            if fc.abs() > best.1.abs() {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
            if fd.abs() > best.1.abs() {
                best = (d, fd);
            }
        }
    }
    Ok(best)
}
