//! Small dense complex matrices: 2×2 reflection/transmission amplitudes,
//! the 3×3 dielectric tensor and the 4×4 field-propagation matrix.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Default absolute floor on |det| below which a 2×2 matrix is treated as singular.
pub const SINGULAR_FLOOR: f64 = 1e-300;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// 2×2 complex matrix, row-major. As a reflection matrix the layout is
/// `[[pp, ps], [sp, ss]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2C {
    pub m: [[Complex; 2]; 2],
}

impl Mat2C {
    pub const fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Mat2C { m: [[a, b], [c, d]] }
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2C::new(re(a), re(b), re(c), re(d))
    }

    pub const fn zero() -> Self {
        Mat2C::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Mat2C::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn diag(a: Complex, d: Complex) -> Self {
        Mat2C::new(a, ZERO, ZERO, d)
    }

    #[inline]
    pub fn det(&self) -> Complex {
        mat2_det(self)
    }

    #[inline]
    pub fn trace(&self) -> Complex {
        mat2_trace(self)
    }

    pub fn inv(&self) -> Result<Mat2C> {
        mat2_inv(self)
    }

    pub fn scale(&self, s: Complex) -> Mat2C {
        let m = &self.m;
        Mat2C::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    /// Right-multiplication by `diag(a, b)` (scales the columns).
    pub fn scale_cols(&self, a: Complex, b: Complex) -> Mat2C {
        let m = &self.m;
        Mat2C::new(m[0][0] * a, m[0][1] * b, m[1][0] * a, m[1][1] * b)
    }

    pub fn entries(&self) -> [Complex; 4] {
        [self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]]
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2C) -> f64 {
        self.entries().iter().zip(other.entries().iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        // Eigenvalues of A^H A are (t ± sqrt(t² − 4|det|²)) / 2 with t = ‖A‖_F².
        let fro2: f64 = self.entries().iter().map(|z| z.norm_sqr()).sum();
        let d = self.det().norm_sqr();
        let disc = (fro2 * fro2 - 4.0 * d).max(0.0);
        ((fro2 + disc.sqrt()) / 2.0).sqrt()
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, rhs: Mat2C) -> Mat2C {
        mat2_mul(&self, &rhs)
    }
}

impl Add for Mat2C {
    type Output = Mat2C;
    fn add(self, o: Mat2C) -> Mat2C {
        let (a, b) = (&self.m, &o.m);
        Mat2C::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl Sub for Mat2C {
    type Output = Mat2C;
    fn sub(self, o: Mat2C) -> Mat2C {
        let (a, b) = (&self.m, &o.m);
        Mat2C::new(a[0][0] - b[0][0], a[0][1] - b[0][1], a[1][0] - b[1][0], a[1][1] - b[1][1])
    }
}

impl Neg for Mat2C {
    type Output = Mat2C;
    fn neg(self) -> Mat2C {
        self.scale(re(-1.0))
    }
}

pub fn mat2_det(m: &Mat2C) -> Complex {
    m.m[0][0] * m.m[1][1] - m.m[0][1] * m.m[1][0]
}

pub fn mat2_trace(m: &Mat2C) -> Complex {
    m.m[0][0] + m.m[1][1]
}

pub fn mat2_mul(a: &Mat2C, b: &Mat2C) -> Mat2C {
    let (a, b) = (&a.m, &b.m);
    Mat2C::new(
        a[0][0] * b[0][0] + a[0][1] * b[1][0],
        a[0][0] * b[0][1] + a[0][1] * b[1][1],
        a[1][0] * b[0][0] + a[1][1] * b[1][0],
        a[1][0] * b[0][1] + a[1][1] * b[1][1],
    )
}

pub fn mat2_inv(m: &Mat2C) -> Result<Mat2C> {
    mat2_inv_with_floor(m, SINGULAR_FLOOR)
}

pub fn mat2_inv_with_floor(m: &Mat2C, floor: f64) -> Result<Mat2C> {
    let det = m.det();
    let mag = det.norm();
    if !(mag > floor) || !mag.is_finite() {
        return Err(Error::SingularMatrix { det: mag });
    }
    let inv_det = det.inv();
    let a = &m.m;
    Ok(Mat2C::new(a[1][1] * inv_det, -a[0][1] * inv_det, -a[1][0] * inv_det, a[0][0] * inv_det))
}

/// 3×3 complex matrix (dielectric tensor).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3C {
    pub m: [[Complex; 3]; 3],
}

impl Mat3C {
    pub fn diag(a: Complex, b: Complex, c: Complex) -> Self {
        Mat3C { m: [[a, ZERO, ZERO], [ZERO, b, ZERO], [ZERO, ZERO, c]] }
    }

    pub fn max_abs_diff(&self, other: &Mat3C) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        worst
    }
}

/// Four-component field column `(E_x, B_y, E_y, −B_x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec4C {
    pub v: [Complex; 4],
}

impl Vec4C {
    pub const fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Vec4C { v: [a, b, c, d] }
    }

    pub fn norm(&self) -> f64 {
        self.v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex) -> Vec4C {
        Vec4C { v: self.v.map(|z| z * s) }
    }
}

/// 4×4 complex matrix, row-major; `m[i][j]` is Γ_{i+1, j+1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4C {
    pub m: [[Complex; 4]; 4],
}

impl Mat4C {
    pub const fn zero() -> Self {
        Mat4C { m: [[ZERO; 4]; 4] }
    }
}

pub fn mat4_apply(g: &Mat4C, v: &Vec4C) -> Vec4C {
    let mut out = [ZERO; 4];
    for (i, row) in g.m.iter().enumerate() {
        out[i] = row.iter().zip(v.v.iter()).map(|(a, b)| a * b).sum();
    }
    Vec4C { v: out }
}

/// Relative residual `‖(k·I − q·Γ)·v‖ / ‖v‖` of a candidate eigenpair.
pub fn mat4_residual(g: &Mat4C, q: Complex, k: Complex, v: &Vec4C) -> Result<f64> {
    let nv = v.norm();
    if nv == 0.0 {
        return Err(Error::ZeroVector);
    }
    let gv = mat4_apply(g, v);
    let r: f64 = (0..4).map(|i| (k * v.v[i] - q * gv.v[i]).norm_sqr()).sum::<f64>().sqrt();
    Ok(r / nv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: f64, b: f64, c: f64, d: f64) -> Mat2C {
        Mat2C::from_real(a, b, c, d)
    }

    #[test]
    fn det_examples() {
        assert_eq!(Mat2C::identity().det(), ONE);
        assert_eq!(m(1.0, 0.0, 0.0, -1.0).det(), re(-1.0));
        assert_eq!(m(1.0, 2.0, 3.0, 4.0).det(), re(-2.0));
    }

    #[test]
    fn inv_examples() {
        assert_eq!(Mat2C::identity().inv().unwrap(), Mat2C::identity());
        assert_eq!(m(2.0, 0.0, 0.0, 4.0).inv().unwrap(), m(0.5, 0.0, 0.0, 0.25));
        assert_eq!(m(1.0, 1.0, 0.0, 1.0).inv().unwrap(), m(1.0, -1.0, 0.0, 1.0));
    }

    #[test]
    fn inv_singular_is_error() {
        assert!(matches!(m(1.0, 2.0, 2.0, 4.0).inv(), Err(Error::SingularMatrix { .. })));
        assert!(mat2_inv_with_floor(&m(1e-3, 0.0, 0.0, 1e-3), 1e-5).is_err());
        assert!(mat2_inv_with_floor(&m(1e-3, 0.0, 0.0, 1e-3), 1e-7).is_ok());
    }

    #[test]
    fn inverse_is_within_roundoff() {
        let a = Mat2C::new(c(0.3, -1.2), c(2.0, 0.1), c(-0.7, 0.4), c(1.1, 0.9));
        let p = a * a.inv().unwrap();
        let eps = 8.0 * f64::EPSILON * 4.0;
        assert!(p.max_abs_diff(&Mat2C::identity()) < eps);
    }

    #[test]
    fn mul_and_trace_examples() {
        let a = Mat2C::new(c(1.0, 2.0), c(3.0, 0.0), c(0.0, -1.0), c(5.0, 5.0));
        assert_eq!(a * Mat2C::identity(), a);
        assert_eq!(Mat2C::diag(c(2.0, 1.0), c(3.0, -4.0)).trace(), c(5.0, -3.0));
        let r = m(1.0, 0.0, 0.0, -1.0);
        assert_eq!((r * r).trace(), re(2.0));
    }

    #[test]
    fn spectral_norm_of_diag() {
        assert!((m(3.0, 0.0, 0.0, -0.5).spectral_norm() - 3.0).abs() < 1e-14);
        // rotation has unit singular values
        let (s, co) = 0.3f64.sin_cos();
        assert!((m(co, -s, s, co).spectral_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn residual_trivial_cases() {
        let v = Vec4C::new(c(1.0, 2.0), c(0.0, 1.0), ONE, ZERO);
        assert_eq!(mat4_residual(&Mat4C::zero(), ONE, ZERO, &v).unwrap(), 0.0);
        let zero = Vec4C::new(ZERO, ZERO, ZERO, ZERO);
        assert!(matches!(mat4_residual(&Mat4C::zero(), ONE, ZERO, &zero), Err(Error::ZeroVector)));
    }
}
