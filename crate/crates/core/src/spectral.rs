//! Cavity round-trip matrix and the scalar integrands `log Δ`, `L ∂_L log Δ`
//! and `∂_γ log Δ` on the imaginary frequency axis.

use crate::error::{Error, Result};
use crate::linalg::{mat2_inv_with_floor, Complex, Mat2C, ONE, SINGULAR_FLOOR};
use crate::optics::{Kinematics, PlateSpec};
use crate::units::{NaturalUnits, C_LIGHT};

/// Below `u = η c Q` reflection matrices are evaluated at `u = η c Q`.
pub const ZERO_MODE_ETA: f64 = 1e-4;

/// Step of the centered difference in `ψ2`, rad.
pub const PSI_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityConfig {
    /// Plate separation `L`, m.
    pub separation: f64,
    /// Angle between the optical axes, rad.
    pub gamma: f64,
    /// Temperature, K.
    pub temperature: f64,
    pub plate1: PlateSpec,
    pub plate2: PlateSpec,
}

impl CavityConfig {
    pub fn new(separation: f64, gamma: f64, plate1: PlateSpec, plate2: PlateSpec) -> Self {
        CavityConfig { separation, gamma, temperature: 0.0, plate1, plate2 }
    }

    pub fn with_temperature(mut self, kelvin: f64) -> Self {
        self.temperature = kelvin;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn units(&self) -> NaturalUnits {
        NaturalUnits::new(self.separation)
    }

    /// `k_B T L / (ħ c)`.
    pub fn reduced_temperature(&self) -> f64 {
        self.units().reduced_temperature(self.temperature)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.separation > 0.0) || !self.separation.is_finite() {
            return Err(Error::InvalidConfig(format!("separation must be > 0, got {}", self.separation)));
        }
        if !self.gamma.is_finite() {
            return Err(Error::InvalidConfig("gamma must be finite".into()));
        }
        if !(self.temperature >= 0.0) || !self.temperature.is_finite() {
            return Err(Error::InvalidConfig(format!("temperature must be >= 0, got {}", self.temperature)));
        }
        self.plate1.validate()?;
        self.plate2.validate()
    }

    /// `ψ2 = −ψ1 − γ`.
    pub fn psi2(&self, psi1: f64) -> f64 {
        -psi1 - self.gamma
    }
}

/// One point `(u, Q, ψ1)` of the integration domain with cached reflections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralNode {
    /// Imaginary frequency, rad/s.
    pub u: f64,
    /// In-plane wavenumber, 1/m.
    pub q_par: f64,
    pub psi1: f64,
    pub r1: Mat2C,
    pub r2: Mat2C,
    /// `2L √(u²/c² + Q²)`.
    pub decay: f64,
    /// Kinematics at which `r1`, `r2` were evaluated.
    pub kin: Kinematics,
    /// `u < η c Q`: reflections are static limits or proxy evaluations.
    pub below_threshold: bool,
    /// Whether the zero-mode proxy frequency was used.
    pub proxy: bool,
}

impl SpectralNode {
    pub fn new(cfg: &CavityConfig, u: f64, q_par: f64, psi1: f64) -> Result<Self> {
        Self::with_eta(cfg, u, q_par, psi1, ZERO_MODE_ETA)
    }

    pub fn with_eta(cfg: &CavityConfig, u: f64, q_par: f64, psi1: f64, eta: f64) -> Result<Self> {
        let floor = eta * C_LIGHT * q_par;
        let below = u < floor;
        let u_eval = if below { floor } else { u };
        if u_eval == 0.0 {
            return Err(Error::InvalidFrequency("u = Q = 0 is not a valid spectral node".into()));
        }
        let kin = Kinematics::imaginary(u_eval, q_par)?;
        let r1 = plate_reflection(&cfg.plate1, psi1, &kin, below)?;
        let r2 = plate_reflection(&cfg.plate2, cfg.psi2(psi1), &kin, below)?;
        let proxy = below && !(cfg.plate1.static_limit().is_some() && cfg.plate2.static_limit().is_some());
        let decay = 2.0 * cfg.separation * (u / C_LIGHT).hypot(q_par);
        Ok(SpectralNode { u, q_par, psi1, r1, r2, decay, kin, below_threshold: below, proxy })
    }

    /// Node from natural variables `λ = uL/c`, `κ = QL`.
    pub fn natural(cfg: &CavityConfig, lambda: f64, kappa: f64, psi1: f64, eta: f64) -> Result<Self> {
        let l = cfg.separation;
        Self::with_eta(cfg, lambda * C_LIGHT / l, kappa / l, psi1, eta)
    }
}

/// Below the zero-mode threshold a closed-form static limit takes precedence
/// over the proxy frequency.
fn plate_reflection(plate: &PlateSpec, psi: f64, kin: &Kinematics, below: bool) -> Result<Mat2C> {
    match plate.static_limit() {
        Some(r) if below => Ok(r),
        _ => plate.reflection(psi, kin),
    }
}

/// `K = e^{−decay} r1 r2`.
pub fn round_trip(node: &SpectralNode) -> Mat2C {
    (node.r1 * node.r2).scale(Complex::new((-node.decay).exp(), 0.0))
}

/// `log det(I − K)`: `log1p` of `det K − Tr K` when `K` is small, the
/// factored determinant near a resonance where that sum cancels.
pub fn log_delta(k: &Mat2C) -> Result<Complex> {
    let z = k.det() - k.trace();
    if z.norm() < 0.5 {
        let modulus = 0.5 * (2.0 * z.re + z.norm_sqr()).ln_1p();
        return Ok(Complex::new(modulus, z.im.atan2(1.0 + z.re)));
    }
    let d = (ONE - k.m[0][0]) * (ONE - k.m[1][1]) - k.m[0][1] * k.m[1][0];
    if d.norm() < SINGULAR_FLOOR {
        return Err(Error::CavityResonance { det: d.norm() });
    }
    Ok(d.ln())
}

/// Closed form of `Tr(r1 r2)` for two ideal-wire plates.
pub fn alpha_squared(sin2: Complex, psi1: f64, psi2: f64, gamma: f64) -> Complex {
    let (c1, c2) = (psi1.cos(), psi2.cos());
    let num = Complex::new(gamma.cos(), 0.0) - sin2 * (c1 * c2);
    (num * num) / ((ONE - sin2 * (c1 * c1)) * (ONE - sin2 * (c2 * c2)))
}

fn resolvent(k: &Mat2C) -> Result<Mat2C> {
    mat2_inv_with_floor(&(Mat2C::identity() - *k), SINGULAR_FLOOR).map_err(|e| match e {
        Error::SingularMatrix { det } => Error::CavityResonance { det },
        other => other,
    })
}

/// `L ∂_L log Δ = decay · Tr((I − K)⁻¹ K)` at fixed `u`, `Q`.
pub fn l_dlogdelta_dl(node: &SpectralNode) -> Result<Complex> {
    let k = round_trip(node);
    Ok((resolvent(&k)? * k).trace() * node.decay)
}

/// `∂ log Δ / ∂L`, 1/m.
pub fn dlogdelta_dl(cfg: &CavityConfig, node: &SpectralNode) -> Result<Complex> {
    Ok(l_dlogdelta_dl(node)? / cfg.separation)
}

/// `∂ r2 / ∂ψ2` by centered difference.
pub fn dr2_dpsi2(cfg: &CavityConfig, node: &SpectralNode) -> Result<Mat2C> {
    dr2_dpsi2_noisy(cfg, node).map(|(d, _)| d)
}

/// Centered difference plus a bound on its rounding noise per entry.
fn dr2_dpsi2_noisy(cfg: &CavityConfig, node: &SpectralNode) -> Result<(Mat2C, f64)> {
    let psi2 = cfg.psi2(node.psi1);
    let plus = plate_reflection(&cfg.plate2, psi2 + PSI_STEP, &node.kin, node.below_threshold)?;
    let minus = plate_reflection(&cfg.plate2, psi2 - PSI_STEP, &node.kin, node.below_threshold)?;
    // rounding in the film and interface algebra scales with O(1) intermediates, not with |r2|
    let noise = 16.0 * f64::EPSILON * plus.max_abs().max(minus.max_abs()).max(1.0) / PSI_STEP;
    Ok(((plus - minus).scale(Complex::new(0.5 / PSI_STEP, 0.0)), noise))
}

/// `∂ log Δ / ∂γ = −Tr((I − K)⁻¹ e^{−decay} r1 ∂_γ r2)`, `∂_γ r2 = −∂r2/∂ψ2`.
pub fn dlogdelta_dgamma(cfg: &CavityConfig, node: &SpectralNode) -> Result<Complex> {
    dlogdelta_dgamma_noisy(cfg, node).map(|(v, _)| v)
}

/// As [`dlogdelta_dgamma`], with a bound on the finite-difference noise.
pub fn dlogdelta_dgamma_noisy(cfg: &CavityConfig, node: &SpectralNode) -> Result<(Complex, f64)> {
    if cfg.plate2.is_orientation_free() || cfg.plate1.is_zero() {
        return Ok((Complex::new(0.0, 0.0), 0.0));
    }
    let k = round_trip(node);
    let (d, noise) = dr2_dpsi2_noisy(cfg, node)?;
    let weight = (-node.decay).exp();
    let dk = (node.r1 * (-d)).scale(Complex::new(weight, 0.0));
    let res = resolvent(&k)?;
    let bound = 4.0 * weight * (res * node.r1).max_abs() * noise;
    Ok((-(res * dk).trace(), bound))
}
