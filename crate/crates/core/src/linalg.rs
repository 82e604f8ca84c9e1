//! Complex vector/matrix aliases and the few dense routines the optimizers need.

use std::f64::consts::TAU;

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CVec = DVector<C64>;
pub type CMat = DMatrix<C64>;

/// Relative singular-value cutoff used by [`pinv`].
pub const PINV_RELATIVE_CUTOFF: f64 = 1e-12;

/// Moore-Penrose pseudo-inverse via SVD.
///
/// Singular values below `PINV_RELATIVE_CUTOFF` times the largest one are
/// treated as zero. An all-zero input yields the all-zero transpose shape.
pub fn pinv(a: &CMat) -> CMat {
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return CMat::zeros(cols, rows);
    }
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("svd computed with u");
    let v_t = svd.v_t.expect("svd computed with v_t");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = sigma_max * PINV_RELATIVE_CUTOFF;

    let mut out = CMat::zeros(cols, rows);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            continue;
        }
        // out += v_k (1/s) u_k^H
        let v_k = v_t.row(k).adjoint();
        let u_k = u.column(k);
        out += (v_k * u_k.adjoint()).scale(1.0 / s);
    }
    out
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_phase(angle: f64) -> f64 {
    let w = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Smallest absolute difference between two angles on the circle.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = wrap_phase(a - b);
    d.min(TAU - d)
}

/// `e^{jθ}`.
#[inline]
pub fn unit_phasor(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}
