//! Globally adaptive 15-point Gauss–Kronrod integration with QUADPACK error
//! estimates and deterministic bisection.

use rayon::prelude::*;

use super::{compensated_sum, Estimate, QuadratureSpec};
use crate::error::{Error, Result};

// Kronrod tables kept at their published precision
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    est: Estimate,
    /// Rounding floor of this panel's error estimate.
    floor: f64,
}

impl Panel {
    fn new<F>(f: &F, a: f64, b: f64, parallel: bool) -> Result<Panel>
    where
        F: Fn(f64) -> Result<Estimate> + Sync,
    {
        let (est, floor) = kronrod(f, a, b, parallel)?;
        Ok(Panel { a, b, est, floor })
    }
}

fn nodes(a: f64, b: f64) -> [f64; 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut x = [c; 15];
    for j in 0..7 {
        x[2 * j] = c - h * XGK[j];
        x[2 * j + 1] = c + h * XGK[j];
    }
    x
}

/// One 15-point Kronrod panel; `f` returns its own error estimate, which is
/// propagated with the Kronrod weights.
pub fn gk15<F>(f: &F, a: f64, b: f64, parallel: bool) -> Result<Estimate>
where
    F: Fn(f64) -> Result<Estimate> + Sync,
{
    kronrod(f, a, b, parallel).map(|(e, _)| e)
}

fn kronrod<F>(f: &F, a: f64, b: f64, parallel: bool) -> Result<(Estimate, f64)>
where
    F: Fn(f64) -> Result<Estimate> + Sync,
{
    let x = nodes(a, b);
    let vals: Vec<Estimate> = if parallel {
        x.par_iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?
    } else {
        x.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?
    };
    let h = 0.5 * (b - a);
    let fc = vals[14].value;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut inner = WGK[7] * vals[14].err;
    for j in 0..7 {
        let (f1, f2) = (vals[2 * j].value, vals[2 * j + 1].value);
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        inner += WGK[j] * (vals[2 * j].err + vals[2 * j + 1].err);
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((vals[2 * j].value - reskh).abs() + (vals[2 * j + 1].value - reskh).abs());
    }
    let (resk, resabs, resasc) = (resk * h, resabs * h.abs(), resasc * h.abs());
    let mut err = ((resk - resg * h).abs()).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    let value = resk;
    if !value.is_finite() || !err.is_finite() {
        return Err(Error::NonFinite("gk15"));
    }
    let inner = inner * h.abs();
    Ok((Estimate::new(value, err + inner), floor + inner))
}

/// Adaptive integration over consecutive `breakpoints`. Returns the estimate
/// and whether the tolerance was met. An error made up of rounding floors and
/// inherited inner errors cannot shrink by bisection and counts as met.
pub(crate) fn adapt<F>(f: &F, breakpoints: &[f64], spec: &QuadratureSpec, parallel: bool) -> Result<(Estimate, bool)>
where
    F: Fn(f64) -> Result<Estimate> + Sync,
{
    let mut panels = Vec::with_capacity(breakpoints.len().max(2) * 4);
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            panels.push(Panel::new(f, w[0], w[1], parallel)?);
        }
    }
    loop {
        let total = Estimate::new(
            compensated_sum(panels.iter().map(|p| p.est.value)),
            compensated_sum(panels.iter().map(|p| p.est.err)),
        );
        if total.err <= spec.target(total.value) {
            return Ok((total, true));
        }
        if total.err <= 2.0 * compensated_sum(panels.iter().map(|p| p.floor)) {
            return Ok((total, true));
        }
        if panels.len() >= spec.max_panels {
            return Ok((total, false));
        }
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.est.err > panels[worst].est.err {
                worst = i;
            }
        }
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            return Ok((total, false));
        }
        let left = Panel::new(f, p.a, mid, parallel)?;
        let right = Panel::new(f, mid, p.b, parallel)?;
        panels[worst] = left;
        panels.insert(worst + 1, right);
    }
}

/// Adaptive integral of an integrand that carries its own error estimate.
pub fn integrate_adaptive_est<F>(f: F, breakpoints: &[f64], spec: &QuadratureSpec, parallel: bool) -> Result<Estimate>
where
    F: Fn(f64) -> Result<Estimate> + Sync,
{
    let (est, ok) = adapt(&f, breakpoints, spec, parallel)?;
    if !ok {
        return Err(Error::NoConvergence {
            what: format!("adaptive quadrature exhausted {} panels", spec.max_panels),
            err_est: est.err,
            tol: spec.target(est.value),
        });
    }
    Ok(est)
}

/// Adaptive integral of a plain integrand.
pub fn integrate_adaptive<F>(f: F, breakpoints: &[f64], spec: &QuadratureSpec, parallel: bool) -> Result<Estimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    integrate_adaptive_est(|x| f(x).map(Estimate::exact), breakpoints, spec, parallel)
}
