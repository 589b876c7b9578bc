use super::TypeIIParams;
use crate::certify::TFunction;
use crate::elliptic::{EllipticInvariants, SeriesConfig};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Real solution with `t = w`, `u = −y`, `v = −z` on the lattice `(1, Ri)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectangularSolution {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "T")]
    pub t_ratio: f64,
    pub c: f64,
    pub t2: f64,
    pub u2: f64,
    pub s: f64,
    pub d: f64,
    pub v_over_u: f64,
    pub t: f64,
    pub u: f64,
    pub v: f64,
    /// `d − g₂t²/3`, the constant in the closed form of the first coordinate.
    pub e: f64,
    pub lhs: f64,
    pub rhs_coeff: f64,
}

impl RectangularSolution {
    pub fn params(&self) -> TypeIIParams {
        let re = |x: f64| Complex64::new(x, 0.0);
        TypeIIParams {
            a: re(-4.0 * self.t2),
            b: re(0.0),
            c: re(self.c),
            d: re(self.d),
            s: re(self.s),
            t: re(self.t),
            u: re(self.u),
            v: re(self.v),
            w: re(self.t),
            y: re(-self.u),
            z: re(-self.v),
        }
    }
}

/// Closed-form solution for `R > 1`. `inv` must be the invariants of `(1, Ri)`.
pub fn solve_rectangular(r: f64, inv: &EllipticInvariants) -> Result<RectangularSolution> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::Domain(format!("solve_rectangular needs R > 1, got {r}")));
    }
    let q = (-2.0 * PI * r).exp();
    match inv.q {
        Some(iq) if (iq - q).abs() <= 1e-12 * q => {}
        _ => {
            return Err(Error::Domain(format!(
                "invariants do not belong to the rectangular lattice R = {r}"
            )))
        }
    }
    let f = TFunction::new(r, &SeriesConfig::default())?;
    let lhs = f.lhs();
    let rhs = f.rhs_coeff();
    if rhs.abs() < 1e-12 {
        return Err(Error::Degenerate(format!(
            "denominator of u^2 vanishes at R = {r} ({rhs:e})"
        )));
    }
    let u2 = lhs / rhs;
    let c = r / PI * f.x + 1.0;
    let t2 = (c - u2) * f.t;
    if u2 < 0.0 || t2 < 0.0 {
        return Err(Error::NoRealSolution { u2, t2 });
    }
    let s = f.x + f.eta;
    let d = c * (f.eta - PI / r) + PI / r + f.g2 * t2 / 3.0;
    let v_over_u = f.eta - 2.0 * PI / r;
    let (t, u) = (t2.sqrt(), u2.sqrt());
    Ok(RectangularSolution {
        r,
        t_ratio: f.t,
        c,
        t2,
        u2,
        s,
        d,
        v_over_u,
        t,
        u,
        v: u * v_over_u,
        e: d - f.g2 * t2 / 3.0,
        lhs,
        rhs_coeff: rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::rectangular_invariants;
    use crate::solver::type_ii_residual;

    fn solve(r: f64) -> RectangularSolution {
        let inv = rectangular_invariants(r, &SeriesConfig::default()).unwrap();
        solve_rectangular(r, &inv).unwrap()
    }

    #[test]
    fn derived_params_are_feasible() {
        for &r in &[1.01, 1.3, 2.0, 5.0] {
            let sol = solve(r);
            let p = sol.params();
            let inv = rectangular_invariants(r, &SeriesConfig::default()).unwrap();
            let res = type_ii_residual(&p, &inv, Complex64::new(0.0, r));
            assert!(res.max_abs() < 1e-9, "R={r}: {:e}", res.max_abs());
            assert_eq!(p.b, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn rejects_wrong_invariants() {
        let inv = rectangular_invariants(2.0, &SeriesConfig::default()).unwrap();
        assert!(solve_rectangular(3.0, &inv).is_err());
        assert!(solve_rectangular(1.0, &inv).is_err());
    }
}
