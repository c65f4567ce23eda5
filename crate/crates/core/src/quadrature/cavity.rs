//! Nested cavity integrals in natural units `λ = uL/c`, `κ = QL`.
//!
//! Order: `λ` outermost (or the Matsubara sum), then `κ`, then `ψ1` on
//! `[0, π)` doubled by the π-periodicity of the director. The `ψ1` range is
//! split at the angles where either plate decouples `s` and `p`; for
//! `κ ≫ λ` the integrand develops dips of width `w ~ λ/κ` exactly there.
//! Each half sub-range is integrated in `s` with `ψ = ψ_b ± w sinh s`, which
//! turns a Lorentzian dip of width `w` at the split point `ψ_b` into the
//! smooth `1/cosh s` and spaces nodes geometrically away from it.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gauss_kronrod::adapt;
use super::oracle::richardson;
use super::{integrate_adaptive_est, matsubara_sum, Estimate, Mapping, MatsubaraSpec, QuadratureSpec};
use crate::error::{Error, Result};
use crate::spectral::{
    dlogdelta_dgamma_noisy, l_dlogdelta_dl, log_delta, round_trip, CavityConfig, SpectralNode, ZERO_MODE_ETA,
};

/// Reduced temperatures below this use the `T = 0` integral.
pub const LOW_TEMPERATURE_SWITCH: f64 = 1e-3;

/// Relative agreement required between the zero-mode term at `η` and `η/2`.
const ZERO_MODE_AGREEMENT: f64 = 1e-6;

/// Tolerance tightening per nesting level.
const MIDDLE_FACTOR: f64 = 4.0;
const INNER_FACTOR: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// `U/A` in `ħc/L³`.
    Energy,
    /// `F/A` in `ħc/L⁴`.
    Force,
    /// `M/A` in `ħc/L³`.
    Torque,
}

/// Result of a cavity integral in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityIntegral {
    pub estimate: Estimate,
    /// Whether any node was evaluated at the zero-mode proxy frequency.
    pub zero_mode_proxy: bool,
    /// Matsubara terms summed (0 on the `T = 0` path).
    pub matsubara_terms: usize,
}

/// Sorted split points of `[0, π]` for the `ψ1` integral.
pub fn psi_breakpoints(gamma: f64) -> Vec<f64> {
    let mut pts = vec![0.0, PI / 2.0, (-gamma).rem_euclid(PI), (PI / 2.0 - gamma).rem_euclid(PI), PI];
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if let Some(last) = pts.last_mut() {
        *last = PI;
    }
    if PI - pts[pts.len() - 2] < 1e-12 {
        pts.remove(pts.len() - 2);
    }
    pts
}

fn trivially_zero(cfg: &CavityConfig, obs: Observable) -> bool {
    let (p1, p2) = (&cfg.plate1, &cfg.plate2);
    p1.is_zero()
        || p2.is_zero()
        || (obs == Observable::Torque && (p1.is_orientation_free() || p2.is_orientation_free()))
}

/// One half sub-range of `ψ1`: `ψ = anchor + dir·w·sinh s`, `s ∈ [0, s_max]`.
#[derive(Debug, Clone, Copy)]
struct PsiPiece {
    anchor: f64,
    dir: f64,
    w: f64,
    s_max: f64,
}

impl PsiPiece {
    /// `(ψ, dψ/dφ)`.
    fn map(&self, s: f64) -> (f64, f64) {
        (self.anchor + self.dir * self.w * s.sinh(), self.w * s.cosh())
    }
}

/// Dip width in `ψ1` at `(λ, κ)`, including the zero-mode proxy floor.
fn dip_width(lambda: f64, kappa: f64, eta: f64) -> f64 {
    if kappa == 0.0 {
        return 1.0;
    }
    (lambda.max(eta * kappa) / kappa).clamp(1e-12, 1.0)
}

fn psi_pieces(breaks: &[f64], w: f64) -> Vec<PsiPiece> {
    let mut out = Vec::with_capacity(2 * breaks.len());
    for b in breaks.windows(2) {
        let half = 0.5 * (b[1] - b[0]);
        let s_max = (half / w).asinh();
        out.push(PsiPiece { anchor: b[0], dir: 1.0, w, s_max });
        out.push(PsiPiece { anchor: b[1], dir: -1.0, w, s_max });
    }
    out
}

struct Ctx<'a> {
    cfg: &'a CavityConfig,
    obs: Observable,
    eta: f64,
    proxy: &'a AtomicBool,
    breaks: Vec<f64>,
    orientation_free: bool,
    /// Both plates have closed-form static limits, so the integrand is
    /// independent of `ψ1` below the zero-mode threshold.
    static_below: bool,
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a CavityConfig, obs: Observable, eta: f64, proxy: &'a AtomicBool) -> Self {
        Ctx {
            cfg,
            obs,
            eta,
            proxy,
            breaks: psi_breakpoints(cfg.gamma),
            orientation_free: cfg.plate1.is_orientation_free() && cfg.plate2.is_orientation_free(),
            static_below: cfg.plate1.static_limit().is_some() && cfg.plate2.static_limit().is_some(),
        }
    }

    /// Integrand with the sign of the observable folded in.
    fn node_value(&self, lambda: f64, kappa: f64, psi1: f64) -> Result<Estimate> {
        let node = SpectralNode::natural(self.cfg, lambda, kappa, psi1, self.eta)?;
        if node.proxy {
            self.proxy.store(true, Ordering::Relaxed);
        }
        let (v, noise) = match self.obs {
            Observable::Energy => (log_delta(&round_trip(&node))?.re, 0.0),
            Observable::Force => (-l_dlogdelta_dl(&node)?.re, 0.0),
            Observable::Torque => {
                let (v, noise) = dlogdelta_dgamma_noisy(self.cfg, &node)?;
                (-v.re, noise)
            }
        };
        if !v.is_finite() {
            return Err(Error::NonFinite("cavity integrand"));
        }
        Ok(Estimate::new(v, noise))
    }

    /// `∫₀^{2π} dψ1`.
    fn psi_integral(&self, lambda: f64, kappa: f64, spec: &QuadratureSpec) -> Result<Estimate> {
        if self.orientation_free || (self.static_below && lambda < self.eta * kappa) {
            return Ok(self.node_value(lambda, kappa, 0.0)?.scale(2.0 * PI));
        }
        let inner = spec.inner(INNER_FACTOR);
        let pieces = psi_pieces(&self.breaks, dip_width(lambda, kappa, self.eta));
        // one adaptive run over the concatenated s ranges [i, i + 1), so the
        // tolerance is shared across pieces
        let f = |x: f64| -> Result<Estimate> {
            let i = (x.floor() as usize).min(pieces.len() - 1);
            let p = &pieces[i];
            let (psi, jac) = p.map((x - i as f64) * p.s_max);
            Ok(self.node_value(lambda, kappa, psi)?.scale(jac * p.s_max))
        };
        let knots: Vec<f64> = (0..=pieces.len()).map(|i| i as f64).collect();
        let (est, _) = adapt(&f, &knots, &inner, false)?;
        Ok(est.scale(2.0))
    }

    /// `∫₀^∞ κ dκ ∫₀^{2π} dψ1`.
    fn kappa_integral(&self, lambda: f64, spec: &QuadratureSpec, parallel: bool) -> Result<Estimate> {
        let middle = spec.inner(MIDDLE_FACTOR);
        let mapping = spec.mapping;
        let f = |t: f64| -> Result<Estimate> {
            let (kappa, w) = mapping.apply(t);
            if kappa == 0.0 {
                return Ok(Estimate::exact(0.0));
            }
            Ok(self.psi_integral(lambda, kappa, spec)?.scale(kappa * w))
        };
        let mut breaks = vec![0.0];
        for k in [lambda, lambda / self.eta] {
            let tk = mapping.inverse(k);
            if tk > 1e-6 && tk < 1.0 - 1e-6 {
                breaks.push(tk);
            }
        }
        breaks.push(1.0);
        let (est, _) = adapt(&f, &breaks, &middle, parallel)?;
        Ok(est)
    }
}

/// `T = 0` integral, natural units.
pub fn integrate_cavity_t0(cfg: &CavityConfig, obs: Observable, spec: &QuadratureSpec) -> Result<CavityIntegral> {
    spec.validate()?;
    if trivially_zero(cfg, obs) {
        return Ok(CavityIntegral { estimate: Estimate::exact(0.0), zero_mode_proxy: false, matsubara_terms: 0 });
    }
    let proxy = AtomicBool::new(false);
    let ctx = Ctx::new(cfg, obs, ZERO_MODE_ETA, &proxy);
    let mapping = spec.mapping;
    let f = |t: f64| -> Result<Estimate> {
        let (lambda, w) = mapping.apply(t);
        Ok(ctx.kappa_integral(lambda, spec, false)?.scale(w))
    };
    let est = integrate_adaptive_est(f, &[0.0, 1.0], spec, true)?;
    Ok(CavityIntegral {
        estimate: est.scale(1.0 / (8.0 * PI.powi(3))),
        zero_mode_proxy: proxy.load(Ordering::Relaxed),
        matsubara_terms: 0,
    })
}

/// `U/A` at `T = 0` in `ħc/L³`.
pub fn integrate_energy_t0(cfg: &CavityConfig, spec: &QuadratureSpec) -> Result<Estimate> {
    integrate_cavity_t0(cfg, Observable::Energy, spec).map(|c| c.estimate)
}

/// Temperature dispatch: Matsubara sum for `k_B T L/(ħc) ≥ 1e−3`, the
/// `T = 0` integral below.
pub fn integrate_cavity(
    cfg: &CavityConfig,
    obs: Observable,
    spec: &QuadratureSpec,
    mspec: &MatsubaraSpec,
) -> Result<CavityIntegral> {
    cfg.validate()?;
    let t = cfg.reduced_temperature();
    if t < LOW_TEMPERATURE_SWITCH {
        return integrate_cavity_t0(cfg, obs, spec);
    }
    spec.validate()?;
    mspec.validate()?;
    if trivially_zero(cfg, obs) {
        return Ok(CavityIntegral { estimate: Estimate::exact(0.0), zero_mode_proxy: false, matsubara_terms: 0 });
    }
    let prefactor = t / (4.0 * PI * PI);
    let proxy = AtomicBool::new(false);
    let ctx = Ctx::new(cfg, obs, ZERO_MODE_ETA, &proxy);
    let mut terms = 0;
    let est = matsubara_sum(
        |l| {
            terms = l + 1;
            let lambda = 2.0 * PI * l as f64 * t;
            let v = ctx.kappa_integral(lambda, spec, true)?.scale(prefactor);
            if l == 0 {
                let fine_flag = AtomicBool::new(false);
                let fine = Ctx::new(cfg, obs, 0.5 * ZERO_MODE_ETA, &fine_flag);
                let w = fine.kappa_integral(0.0, spec, true)?.scale(prefactor);
                let scale = v.value.abs().max(w.value.abs());
                if (v.value - w.value).abs() > ZERO_MODE_AGREEMENT * scale + spec.abs_tol {
                    return Err(Error::IllConditionedZeroMode { coarse: v.value, fine: w.value });
                }
            }
            Ok(v)
        },
        mspec,
        spec.abs_tol,
    )?;
    Ok(CavityIntegral { estimate: est, zero_mode_proxy: proxy.load(Ordering::Relaxed), matsubara_terms: terms })
}

/// Fixed grid for [`oracle_cavity`]: intervals per dimension (`n_psi` per
/// `ψ1` sub-range).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleGrid {
    pub n_lambda: usize,
    pub n_kappa: usize,
    pub n_psi: usize,
}

impl Default for OracleGrid {
    fn default() -> Self {
        OracleGrid { n_lambda: 96, n_kappa: 96, n_psi: 32 }
    }
}

fn oracle_psi(ctx: &Ctx, lambda: f64, kappa: f64, n: usize) -> Result<f64> {
    if ctx.orientation_free {
        return Ok(2.0 * PI * ctx.node_value(lambda, kappa, 0.0)?.value);
    }
    let mut total = 0.0;
    let n = n.max(2) & !1;
    for p in psi_pieces(&ctx.breaks, dip_width(lambda, kappa, ctx.eta)) {
        let h = p.s_max / n as f64;
        let vals = (0..=n)
            .map(|i| {
                let (psi, jac) = p.map(i as f64 * h);
                Ok(ctx.node_value(lambda, kappa, psi)?.value * jac)
            })
            .collect::<Result<Vec<_>>>()?;
        total += richardson(&vals, h);
    }
    Ok(2.0 * total)
}

fn oracle_kappa(ctx: &Ctx, lambda: f64, grid: &OracleGrid) -> Result<f64> {
    let n = grid.n_kappa.max(2) & !1;
    let h = 1.0 / n as f64;
    let vals = (0..=n)
        .map(|i| {
            let t = i as f64 * h;
            if t == 0.0 || t >= 1.0 {
                return Ok(0.0);
            }
            let (kappa, w) = Mapping::Rational.apply(t);
            let v = oracle_psi(ctx, lambda, kappa, grid.n_psi)?;
            Ok(if v == 0.0 { 0.0 } else { v * kappa * w })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(richardson(&vals, h))
}

/// Brute-force cavity integral in natural units: composite trapezoid with
/// one Richardson step on every axis, no adaptivity. `λ = s²/(1 − s²)`
/// clusters frequency nodes near zero.
pub fn oracle_cavity(cfg: &CavityConfig, obs: Observable, grid: &OracleGrid) -> Result<f64> {
    cfg.validate()?;
    if trivially_zero(cfg, obs) {
        return Ok(0.0);
    }
    let proxy = AtomicBool::new(false);
    let ctx = Ctx::new(cfg, obs, ZERO_MODE_ETA, &proxy);
    let t = cfg.reduced_temperature();
    if t >= LOW_TEMPERATURE_SWITCH {
        let mut sum = 0.0;
        for l in 0.. {
            let lambda = 2.0 * PI * l as f64 * t;
            let mut term = oracle_kappa(&ctx, lambda, grid)?;
            if l == 0 {
                term *= 0.5;
            }
            sum += term;
            if l > 0 && term.abs() <= 1e-13 * sum.abs() {
                break;
            }
        }
        return Ok(sum * t / (4.0 * PI * PI));
    }
    let n = grid.n_lambda.max(2) & !1;
    let h = 1.0 / n as f64;
    let vals = (0..=n)
        .into_par_iter()
        .map(|i| {
            let s = i as f64 * h;
            if s == 0.0 || s >= 1.0 {
                return Ok(0.0);
            }
            let d = 1.0 - s * s;
            let lambda = s * s / d;
            let jac = 2.0 * s / (d * d);
            let v = oracle_kappa(&ctx, lambda, grid)?;
            Ok(if v == 0.0 { 0.0 } else { v * jac })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(richardson(&vals, h) / (8.0 * PI.powi(3)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{DispersionModel, UniaxialMaterial};
    use crate::optics::PlateSpec;

    const L: f64 = 1e-7;

    #[test]
    fn breakpoints_cover_half_turn() {
        assert_eq!(psi_breakpoints(0.0), vec![0.0, PI / 2.0, PI]);
        let b = psi_breakpoints(PI / 4.0);
        assert_eq!(b.len(), 5);
        assert!((b[1] - PI / 4.0).abs() < 1e-15 && (b[3] - 3.0 * PI / 4.0).abs() < 1e-15);
        let b = psi_breakpoints(-PI / 2.0 + 1e-14);
        assert_eq!(b.len(), 3);
    }

    #[test]
    fn vacuum_plate_is_exactly_zero() {
        let cfg = CavityConfig::new(L, 0.3, PlateSpec::ideal_wires(), PlateSpec::vacuum());
        for obs in [Observable::Energy, Observable::Force, Observable::Torque] {
            let r = integrate_cavity_t0(&cfg, obs, &QuadratureSpec::default()).unwrap();
            assert_eq!(r.estimate, Estimate::exact(0.0));
        }
    }

    #[test]
    fn ideal_mirror_energy_and_pressure() {
        let cfg = CavityConfig::new(L, 0.0, PlateSpec::perfect_mirror(), PlateSpec::perfect_mirror());
        let spec = QuadratureSpec::default();
        let e = integrate_cavity_t0(&cfg, Observable::Energy, &spec).unwrap().estimate;
        let want = -PI.powi(2) / 720.0;
        assert!((e.value - want).abs() < 1e-6 * want.abs(), "{}", e.value);
        let f = integrate_cavity_t0(&cfg, Observable::Force, &spec).unwrap().estimate;
        let want = -PI.powi(2) / 240.0;
        assert!((f.value - want).abs() < 1e-6 * want.abs(), "{}", f.value);
    }

    #[test]
    fn isotropic_dielectric_has_no_torque() {
        let m = UniaxialMaterial::isotropic(DispersionModel::constant(3.0));
        let cfg = CavityConfig::new(L, 0.4, PlateSpec::semi_infinite(m), PlateSpec::ideal_wires());
        let r = integrate_cavity_t0(&cfg, Observable::Torque, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.estimate.value, 0.0);
    }
}
