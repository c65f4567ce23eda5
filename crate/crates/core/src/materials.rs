//! Frequency-dependent principal dielectric responses.
//!
//! Every model can be evaluated on the real frequency axis (diagnostics)
//! and on the imaginary axis `ω = iu`, where the Casimir integrals live.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{re, Complex};

/// Relative distance to an undamped resonance below which real-axis
/// evaluation is refused.
const RESONANCE_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    RealAxis,
    ImaginaryAxis,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyPoint {
    pub branch: Branch,
    /// `ω` on the real branch, `u` (with `ω = iu`) on the imaginary branch; rad/s.
    pub value: f64,
}

impl FrequencyPoint {
    pub fn real(omega: f64) -> Self {
        FrequencyPoint { branch: Branch::RealAxis, value: omega }
    }

    pub fn imaginary(u: f64) -> Self {
        FrequencyPoint { branch: Branch::ImaginaryAxis, value: u }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.value.is_finite() {
            return Err(Error::InvalidFrequency(format!("non-finite value {}", self.value)));
        }
        if self.branch == Branch::ImaginaryAxis && self.value < 0.0 {
            return Err(Error::InvalidFrequency(format!("negative imaginary frequency {}", self.value)));
        }
        Ok(())
    }

    /// Complex angular frequency `ω`.
    pub fn omega(&self) -> Complex {
        match self.branch {
            Branch::RealAxis => re(self.value),
            Branch::ImaginaryAxis => Complex::new(0.0, self.value),
        }
    }
}

/// Principal dielectric response model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DispersionModel {
    Vacuum,
    Constant(Complex),
    /// `ε = 1 − ω_p² / (ω² + iω/τ)`; `tau = None` means no dissipation.
    Drude {
        omega_p: f64,
        tau: Option<f64>,
    },
    /// Two undamped oscillators (IR and UV).
    TwoOscillator {
        c_ir: f64,
        omega_ir: f64,
        c_uv: f64,
        omega_uv: f64,
    },
    /// Perfect conductor; resolved by closed forms in the optics layer.
    IdealConductor,
}

impl DispersionModel {
    pub fn drude(omega_p: f64, tau: Option<f64>) -> Self {
        DispersionModel::Drude { omega_p, tau }
    }

    pub fn constant(eps: f64) -> Self {
        DispersionModel::Constant(re(eps))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DispersionModel::Drude { omega_p, tau } => {
                if !(omega_p >= 0.0) || !omega_p.is_finite() {
                    return Err(Error::InvalidConfig(format!("Drude omega_p must be >= 0, got {omega_p}")));
                }
                if let Some(t) = tau {
                    if !(t > 0.0) {
                        return Err(Error::InvalidConfig(format!("Drude tau must be > 0, got {t}")));
                    }
                }
            }
            DispersionModel::TwoOscillator { c_ir, omega_ir, c_uv, omega_uv } => {
                if !(c_ir >= 0.0 && c_uv >= 0.0) {
                    return Err(Error::InvalidConfig("oscillator strengths must be >= 0".into()));
                }
                if !(omega_ir > 0.0 && omega_uv > 0.0) {
                    return Err(Error::InvalidConfig("oscillator frequencies must be > 0".into()));
                }
            }
            DispersionModel::Constant(eps) => {
                if !(eps.re.is_finite() && eps.im.is_finite()) {
                    return Err(Error::InvalidConfig("constant permittivity must be finite".into()));
                }
            }
            DispersionModel::Vacuum | DispersionModel::IdealConductor => {}
        }
        Ok(())
    }

    /// True when the model is exactly `ε = 1`.
    pub fn is_vacuum(&self) -> bool {
        match *self {
            DispersionModel::Vacuum => true,
            DispersionModel::Constant(e) => e == re(1.0),
            DispersionModel::Drude { omega_p, .. } => omega_p == 0.0,
            DispersionModel::TwoOscillator { c_ir, c_uv, .. } => c_ir == 0.0 && c_uv == 0.0,
            DispersionModel::IdealConductor => false,
        }
    }

    /// Whether the response is free of dissipation (real on the imaginary axis
    /// and real on the real axis away from resonances).
    pub fn is_lossless(&self) -> bool {
        match *self {
            DispersionModel::Constant(e) => e.im == 0.0,
            DispersionModel::Drude { tau, .. } => tau.is_none(),
            _ => true,
        }
    }
}

pub fn eval_eps(model: &DispersionModel, f: FrequencyPoint) -> Result<Complex> {
    f.validate()?;
    let w = f.value;
    let eps = match (*model, f.branch) {
        (DispersionModel::Vacuum, _) => re(1.0),
        (DispersionModel::Constant(e), _) => e,
        (DispersionModel::IdealConductor, _) => return Err(Error::IdealConductorEval),
        (DispersionModel::Drude { omega_p: 0.0, .. }, _) => re(1.0),
        (DispersionModel::Drude { omega_p, tau }, Branch::ImaginaryAxis) => {
            let damping = tau.map_or(0.0, |t| w / t);
            let den = w * w + damping;
            if den == 0.0 {
                return Err(Error::ZeroFrequencyPole);
            }
            re(1.0 + omega_p * omega_p / den)
        }
        (DispersionModel::Drude { omega_p, tau }, Branch::RealAxis) => {
            if w == 0.0 {
                return Err(Error::ZeroFrequencyPole);
            }
            let den = Complex::new(w * w, tau.map_or(0.0, |t| w / t));
            re(1.0) - re(omega_p * omega_p) / den
        }
        (DispersionModel::TwoOscillator { c_ir, omega_ir, c_uv, omega_uv }, Branch::ImaginaryAxis) => {
            let x_ir = w / omega_ir;
            let x_uv = w / omega_uv;
            re(1.0 + c_ir / (1.0 + x_ir * x_ir) + c_uv / (1.0 + x_uv * x_uv))
        }
        (DispersionModel::TwoOscillator { c_ir, omega_ir, c_uv, omega_uv }, Branch::RealAxis) => {
            for res in [omega_ir, omega_uv] {
                if ((w - res) / res).abs() < RESONANCE_GUARD {
                    return Err(Error::EvalAtResonance { omega: w });
                }
            }
            let x_ir = w / omega_ir;
            let x_uv = w / omega_uv;
            re(1.0 + c_ir / (1.0 - x_ir * x_ir) + c_uv / (1.0 - x_uv * x_uv))
        }
    };
    if !(eps.re.is_finite() && eps.im.is_finite()) {
        return Err(Error::NonFinite("eval_eps"));
    }
    Ok(eps)
}

/// Uniaxial medium: `ε∥` along the optical axis (`n_e = √ε∥`) and `ε⊥`
/// perpendicular to it (`n_o = √ε⊥`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniaxialMaterial {
    pub eps_par: DispersionModel,
    pub eps_perp: DispersionModel,
}

impl UniaxialMaterial {
    pub fn new(eps_par: DispersionModel, eps_perp: DispersionModel) -> Self {
        UniaxialMaterial { eps_par, eps_perp }
    }

    pub fn isotropic(model: DispersionModel) -> Self {
        UniaxialMaterial { eps_par: model, eps_perp: model }
    }

    pub fn vacuum() -> Self {
        Self::isotropic(DispersionModel::Vacuum)
    }

    pub fn is_vacuum(&self) -> bool {
        self.eps_par.is_vacuum() && self.eps_perp.is_vacuum()
    }

    pub fn is_isotropic(&self) -> bool {
        self.eps_par == self.eps_perp
    }

    pub fn validate(&self) -> Result<()> {
        self.eps_par.validate()?;
        self.eps_perp.validate()
    }
}

/// `(ε∥, ε⊥)` at one frequency.
pub fn eval_uniaxial(mat: &UniaxialMaterial, f: FrequencyPoint) -> Result<(Complex, Complex)> {
    Ok((eval_eps(&mat.eps_par, f)?, eval_eps(&mat.eps_perp, f)?))
}
