//! Small complex helpers that stay accurate far from the real axis.

use num_complex::Complex64;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// `e^w − 1` without cancellation near `w = 0`.
pub fn expm1(w: Complex64) -> Complex64 {
    let (x, y) = (w.re, w.im);
    let s = (0.5 * y).sin();
    let ex1 = x.exp_m1();
    Complex64::new(ex1 * y.cos() - 2.0 * s * s, (ex1 + 1.0) * y.sin())
}

/// `E = e^{±2iw}` with the sign chosen so that `|E| ≤ 1`, and that sign.
fn half_exp(w: Complex64) -> (Complex64, Complex64, f64) {
    let sign = if w.im >= 0.0 { 1.0 } else { -1.0 };
    let arg = I * w * (2.0 * sign);
    (arg.exp(), expm1(arg), sign)
}

pub fn cot(w: Complex64) -> Complex64 {
    let (e, em1, sign) = half_exp(w);
    I * (e + 1.0) / em1 * sign
}

pub fn csc2(w: Complex64) -> Complex64 {
    let (e, em1, _) = half_exp(w);
    -4.0 * e / (em1 * em1)
}

/// `(csc²w, cot w)` sharing one exponential.
pub fn csc2_cot(w: Complex64) -> (Complex64, Complex64) {
    let (e, em1, sign) = half_exp(w);
    (-4.0 * e / (em1 * em1), I * (e + 1.0) / em1 * sign)
}
