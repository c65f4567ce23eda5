//! Normal-incidence scalar reflection amplitudes (electric-field convention).

use crate::error::{Error, Result};
use crate::linalg::{Complex, ONE};
use crate::materials::{eval_eps, DispersionModel, FrequencyPoint};
use crate::units::C_LIGHT;

use super::{orient_with, sqrt_branch};

/// `r = (1 − √ε) / (1 + √ε)`.
pub fn scalar_reflect_from_eps(eps: Complex) -> Result<Complex> {
    let n = sqrt_branch(eps);
    let den = ONE + n;
    if den.norm() == 0.0 {
        return Err(Error::SingularInterface("1 + n = 0".into()));
    }
    Ok((ONE - n) / den)
}

pub fn scalar_reflect(model: &DispersionModel, f: FrequencyPoint) -> Result<Complex> {
    scalar_reflect_from_eps(eval_eps(model, f)?)
}

/// Free-standing film of thickness `d` (m): `r (1 − e^{2ikd}) / (1 − r² e^{2ikd})`.
pub fn scalar_reflect_film_from_eps(eps: Complex, d: f64, f: FrequencyPoint) -> Result<Complex> {
    if !(d >= 0.0) {
        return Err(Error::InvalidConfig(format!("film thickness must be >= 0, got {d}")));
    }
    let q = f.omega() / C_LIGHT;
    let k = q * orient_with(q, sqrt_branch(eps));
    let r = scalar_reflect_from_eps(eps)?;
    let ph = (Complex::i() * k * (2.0 * d)).exp();
    let den = ONE - r * r * ph;
    if den.norm() == 0.0 {
        return Err(Error::ResonantFilm);
    }
    let out = r * (ONE - ph) / den;
    if !(out.re.is_finite() && out.im.is_finite()) {
        return Err(Error::NonFinite("scalar_reflect_film"));
    }
    Ok(out)
}

pub fn scalar_reflect_film(model: &DispersionModel, d: f64, f: FrequencyPoint) -> Result<Complex> {
    scalar_reflect_film_from_eps(eval_eps(model, f)?, d, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::re;

    #[test]
    fn fresnel_examples() {
        assert_eq!(scalar_reflect_from_eps(re(1.0)).unwrap(), re(0.0));
        assert!((scalar_reflect_from_eps(re(4.0)).unwrap() + 1.0 / 3.0).norm() < 1e-15);
    }

    #[test]
    fn film_limits() {
        let f = FrequencyPoint::imaginary(2e15);
        let eps = re(7.0);
        assert_eq!(scalar_reflect_film_from_eps(eps, 0.0, f).unwrap(), re(0.0));
        let thick = scalar_reflect_film_from_eps(eps, 1e-3, f).unwrap();
        assert!((thick - scalar_reflect_from_eps(eps).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn lossless_film_is_real_on_imaginary_axis() {
        let f = FrequencyPoint::imaginary(3e14);
        let drude = DispersionModel::drude(5e15, None);
        let r = scalar_reflect_film(&drude, 20e-9, f).unwrap();
        assert_eq!(r.im, 0.0);
        assert!(r.re < 0.0 && r.re > -1.0);
    }
}
