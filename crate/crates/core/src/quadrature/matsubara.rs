//! Primed sum over Matsubara terms.

use super::{CompensatedSum, Estimate, MatsubaraSpec};
use crate::error::{Error, Result};

/// Consecutive negligible terms required before truncation.
const QUIET_TERMS: usize = 3;

/// `Σ'_{ℓ≥0} term(ℓ)` with the `ℓ = 0` term halved. Terms below
/// `tail_tol·|partial sum| + abs_floor` count as negligible; the neglected
/// tail is bounded geometrically and added to the error.
pub fn matsubara_sum<F>(mut term: F, spec: &MatsubaraSpec, abs_floor: f64) -> Result<Estimate>
where
    F: FnMut(usize) -> Result<Estimate>,
{
    let mut sum = CompensatedSum::new();
    let mut err = CompensatedSum::new();
    let mut quiet = 0;
    let mut prev = f64::NAN;
    for l in 0..spec.max_terms {
        let mut t = term(l)?;
        if l == 0 {
            t = t.scale(0.5);
        }
        sum.add(t.value);
        err.add(t.err);
        let s = sum.value();
        if t.value.abs() <= spec.tail_tol * s.abs() + abs_floor {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= QUIET_TERMS {
            let ratio = (t.value / prev).abs();
            let tail =
                if ratio < 1.0 { t.value.abs() * ratio / (1.0 - ratio) } else { t.value.abs() * QUIET_TERMS as f64 };
            err.add(tail);
            return Ok(Estimate::new(s, err.value()));
        }
        prev = t.value;
    }
    Err(Error::NoConvergence {
        what: format!("Matsubara sum not converged after {} terms", spec.max_terms),
        err_est: prev.abs(),
        tol: spec.tail_tol * sum.value().abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_term_is_halved() {
        let e = matsubara_sum(|l| Ok(Estimate::exact(if l == 0 { 3.0 } else { 0.0 })), &MatsubaraSpec::default(), 0.0)
            .unwrap();
        assert_eq!(e.value, 1.5);
    }

    #[test]
    fn geometric_series() {
        let e = matsubara_sum(|l| Ok(Estimate::exact(0.5f64.powi(l as i32))), &MatsubaraSpec::default(), 0.0).unwrap();
        assert!((e.value - 1.5).abs() < 1e-8);
        assert!((e.value - 1.5).abs() <= e.err);
    }

    #[test]
    fn slow_series_reports_no_convergence() {
        let spec = MatsubaraSpec { max_terms: 50, ..Default::default() };
        let r = matsubara_sum(|l| Ok(Estimate::exact(1.0 / (1.0 + l as f64))), &spec, 0.0);
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }
}
