use super::{type_ii_residual, TypeIIParams};
use crate::elliptic::EllipticInvariants;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Classification {
    /// `b = c = s = u = v = y = z = 0`, `tw = A²`; `λ = t/A`.
    CgFamily {
        #[serde(with = "crate::serde_complex")]
        lambda: Complex64,
    },
    /// Real parameters with `w = t`, `y = −u`, `z = −v`.
    Rectangular,
    Other,
}

/// Sorts a feasible point into the known solution families.
///
/// Refuses points whose residual exceeds `tol·(1 + ‖p‖²)`.
pub fn classify_solution(
    p: &TypeIIParams,
    inv: &EllipticInvariants,
    tau: Complex64,
    tol: f64,
) -> Result<Classification> {
    let res = type_ii_residual(p, inv, tau);
    if !res.is_feasible(p, tol) {
        return Err(Error::Infeasible {
            residual: res.max_abs(),
            tol: tol * (1.0 + p.norm().powi(2)),
        });
    }
    let small = |z: Complex64| z.norm() <= tol;
    let zeros = [p.b, p.c, p.s, p.u, p.v, p.y, p.z];
    if zeros.iter().all(|&z| small(z)) && inv.g2.norm() > 0.0 {
        let a2 = 3.0 * PI / (2.0 * inv.g2);
        if (p.t * p.w - a2).norm() <= tol && a2.im.abs() <= tol {
            return Ok(Classification::CgFamily {
                lambda: p.t / a2.re.sqrt(),
            });
        }
    }
    let rect = p.max_imag() <= tol
        && small(p.w - p.t)
        && small(p.y + p.u)
        && small(p.z + p.v)
        && small(p.b);
    if rect {
        return Ok(Classification::Rectangular);
    }
    Ok(Classification::Other)
}
