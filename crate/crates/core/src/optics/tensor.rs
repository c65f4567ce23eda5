use crate::error::{Error, Result};
use crate::linalg::{Complex, Mat3C, Mat4C, ONE};

/// Dielectric tensor of a uniaxial medium whose optical axis lies in the
/// surface plane at angle `psi` from the plane of incidence (x–z).
pub fn dielectric_tensor(eps_par: Complex, eps_perp: Complex, psi: f64) -> Mat3C {
    let (s, c) = psi.sin_cos();
    let xx = eps_par * (c * c) + eps_perp * (s * s);
    let yy = eps_perp * (c * c) + eps_par * (s * s);
    let xy = (eps_perp - eps_par) * (s * c);
    let zero = Complex::new(0.0, 0.0);
    Mat3C { m: [[xx, xy, zero], [xy, yy, zero], [zero, zero, eps_perp]] }
}

/// Matrix `Γ` of `∂_z F = i q Γ F` for `F = (E_x, B_y, E_y, −B_x)`.
pub fn gamma_matrix(eps: &Mat3C, sin_theta: Complex) -> Result<Mat4C> {
    let e = &eps.m;
    let (xx, xy, xz) = (e[0][0], e[0][1], e[0][2]);
    let (yx, yy, yz) = (e[1][0], e[1][1], e[1][2]);
    let (zx, zy, zz) = (e[2][0], e[2][1], e[2][2]);
    if zz.norm() == 0.0 {
        return Err(Error::DegenerateEpsZZ);
    }
    let s = sin_theta;
    let s2 = s * s;
    let mut g = Mat4C::zero();
    g.m[0][0] = -s * zx / zz;
    g.m[0][1] = ONE - s2 / zz;
    g.m[0][2] = -s * zy / zz;
    g.m[1][0] = xx - xz * zx / zz;
    g.m[1][1] = -s * xz / zz;
    g.m[1][2] = xy - xz * zy / zz;
    g.m[2][3] = ONE;
    g.m[3][0] = yx - yz * zx / zz;
    g.m[3][1] = s * yz / zz;
    g.m[3][2] = yy - s2 - yz * zy / zz;
    Ok(g)
}
