//! Fixed-grid composite trapezoid with one Richardson step. No adaptivity;
//! used only to certify the adaptive engine.

use super::{compensated_sum, Mapping};

/// `∫_a^b f` on `n` intervals (`n` even), with `(4 T_n − T_{n/2}) / 3`.
pub fn oracle_integrate_interval<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n.max(2) & !1;
    let h = (b - a) / n as f64;
    let vals: Vec<f64> = (0..=n).map(|i| f(a + h * i as f64)).collect();
    richardson(&vals, h)
}

pub(crate) fn richardson(vals: &[f64], h: f64) -> f64 {
    let n = vals.len() - 1;
    let ends = 0.5 * (vals[0] + vals[n]);
    let fine = h * (ends + compensated_sum(vals[1..n].iter().copied()));
    let coarse = 2.0 * h * (ends + compensated_sum(vals[2..n].iter().step_by(2).copied()));
    (4.0 * fine - coarse) / 3.0
}

/// `∫₀^∞ f` through `mapping` on `n` intervals of `t ∈ [0, 1]`; the
/// endpoint `t = 1` contributes zero.
pub fn oracle_integrate_semiinf<F: Fn(f64) -> f64>(f: F, mapping: Mapping, n: usize) -> f64 {
    oracle_integrate_interval(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let (x, w) = mapping.apply(t);
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v * w
            }
        },
        0.0,
        1.0,
        n,
    )
}

/// `∫₀^∞ f` with the default rational mapping.
pub fn oracle_integrate<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    oracle_integrate_semiinf(f, Mapping::Rational, n)
}
