use super::{type_ii_residual, TypeIIParams};
use crate::elliptic::{rectangular_invariants, EllipticInvariants, Lattice, SeriesConfig};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `|g₂| − 12|η₁η̄₁ − (π/Im τ)(η₁ + η̄₁)|`; a Type-I solution needs this to vanish.
pub fn type_i_residual(tau: Complex64, inv: &EllipticInvariants) -> f64 {
    let e = inv.eta1;
    let inner = e * e.conj() - (PI / tau.im) * (e + e.conj());
    inv.g2.norm() - 12.0 * inner.norm()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeIScan {
    pub r: Vec<f64>,
    pub residual: Vec<f64>,
    pub min_abs_residual: f64,
    pub argmin_r: f64,
    /// Grid intervals on which the residual changes sign.
    pub sign_changes: Vec<(f64, f64)>,
}

/// Evaluates [`type_i_residual`] on `τ = Ri` over an evenly spaced grid.
pub fn type_i_scan(r_min: f64, r_max: f64, points: usize, cfg: &SeriesConfig) -> Result<TypeIScan> {
    if !(r_min > 0.0 && r_max > r_min) || points < 2 {
        return Err(Error::Domain(format!(
            "need 0 < r_min < r_max and >= 2 points, got [{r_min}, {r_max}] with {points}"
        )));
    }
    let mut r = Vec::with_capacity(points);
    let mut residual = Vec::with_capacity(points);
    for i in 0..points {
        let x = r_min + (r_max - r_min) * i as f64 / (points - 1) as f64;
        let inv = rectangular_invariants(x, cfg)?;
        r.push(x);
        residual.push(type_i_residual(Complex64::new(0.0, x), &inv));
    }
    let (imin, min_abs) = residual
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v.abs()))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let sign_changes = (1..points)
        .filter(|&i| residual[i - 1].signum() != residual[i].signum())
        .map(|i| (r[i - 1], r[i]))
        .collect();
    Ok(TypeIScan {
        argmin_r: r[imin],
        r,
        residual,
        min_abs_residual: min_abs,
        sign_changes,
    })
}

/// Certificate that the Type-II system has no solution on `τ = e^{2πi/3}`.
///
/// With `g₂ = 0` and `η₁ = π/Im τ` the period equations force
/// `c = k s̄, d = 1/k, u = k z̄, v = ȳ/k` (`k = Im τ/π`), after which the fourth
/// algebraic equation reads `1/k + k|s|² + k|z|² + |y|²/k = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfeasibilityWitness {
    pub im_tau: f64,
    /// `π/Im τ`: the constant term of the forced identity, a strict lower bound
    /// for its left side.
    pub lower_bound: f64,
    /// `Im τ/π`, the constant as printed in the original argument.
    pub printed_bound: f64,
    pub g2_abs: f64,
    /// `η₁ − π/Im τ`; zero on this lattice, which is what makes the
    /// period equations collapse.
    pub eta1_defect: f64,
    pub type_i_residual: f64,
}

impl InfeasibilityWitness {
    /// Projects `p` onto the period constraints and returns the fourth
    /// algebraic residual, which equals [`Self::forced_identity`].
    pub fn projected_identity(&self, p: &TypeIIParams, inv: &EllipticInvariants, tau: Complex64) -> Complex64 {
        let k = self.im_tau / PI;
        let mut q = *p;
        q.c = k * p.s.conj();
        q.d = Complex64::new(1.0 / k, 0.0);
        q.u = k * p.z.conj();
        q.v = p.y.conj() / k;
        // alg[3] = d + cs + uz + vy − g₂tw; the g₂ term is zero up to rounding
        type_ii_residual(&q, inv, tau).alg[3] + inv.g2 * q.t * q.w
    }

    pub fn forced_identity(&self, s: Complex64, y: Complex64, z: Complex64) -> f64 {
        let k = self.im_tau / PI;
        1.0 / k + k * s.norm_sqr() + k * z.norm_sqr() + y.norm_sqr() / k
    }
}

pub fn equianharmonic_check(inv: &EllipticInvariants) -> Result<InfeasibilityWitness> {
    let lat = Lattice::equianharmonic();
    let tau = lat.tau();
    let scale = inv.g3.norm().powf(2.0 / 3.0).max(1.0);
    if inv.g2.norm() > 1e-8 * scale {
        return Err(Error::WrongLattice(format!(
            "g2 = {} is not zero; these are not equianharmonic invariants",
            inv.g2
        )));
    }
    let im_tau = tau.im;
    let eta1_defect = (inv.eta1 - Complex64::new(PI / im_tau, 0.0)).norm();
    if eta1_defect > 1e-8 {
        return Err(Error::WrongLattice(format!(
            "eta1 = {} differs from pi/Im(tau); the lattice is not normalised as (1, e^(2 pi i/3))",
            inv.eta1
        )));
    }
    Ok(InfeasibilityWitness {
        im_tau,
        lower_bound: PI / im_tau,
        printed_bound: im_tau / PI,
        g2_abs: inv.g2.norm(),
        eta1_defect,
        type_i_residual: type_i_residual(tau, inv),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::general_invariants;

    #[test]
    fn square_type_i_positive() {
        let inv = rectangular_invariants(1.0, &SeriesConfig::default()).unwrap();
        let r = type_i_residual(Complex64::i(), &inv);
        assert!((r - (inv.g2.re - 12.0 * PI * PI)).abs() < 1e-9);
        assert!(r > 50.0);
    }

    #[test]
    fn witness_on_equianharmonic() {
        let tau = Lattice::equianharmonic().tau();
        let inv = general_invariants(tau, &SeriesConfig::default()).unwrap();
        let w = equianharmonic_check(&inv).unwrap();
        assert!(w.lower_bound >= 3.0f64.sqrt() / (2.0 * PI));
        assert!(w.type_i_residual < 0.0);
        assert!((w.printed_bound - 3.0f64.sqrt() / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn wrong_lattice_rejected() {
        let inv = rectangular_invariants(1.0, &SeriesConfig::default()).unwrap();
        assert!(matches!(equianharmonic_check(&inv), Err(Error::WrongLattice(_))));
    }
}
