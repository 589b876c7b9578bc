use super::TypeIIParams;
use crate::elliptic::EllipticInvariants;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The one-parameter family on the square lattice with `A² = 3π/(2g₂)`.
///
/// The first coordinate is negated relative to the `f′ = −℘` form so that
/// `f′ = ℘ + s` with `s = 0`; this is an ambient isometry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareFamily {
    #[serde(with = "crate::serde_complex")]
    pub lambda: Complex64,
    #[serde(rename = "A")]
    pub a: f64,
    pub g2: f64,
}

impl SquareFamily {
    /// `inv` must be the square-lattice invariants (`g₂ > 0`, `g₃ = 0`).
    pub fn new(lambda: Complex64, inv: &EllipticInvariants) -> Result<Self> {
        if lambda.norm() == 0.0 || !lambda.re.is_finite() || !lambda.im.is_finite() {
            return Err(Error::Domain("lambda must be a nonzero finite complex number".into()));
        }
        let g2 = inv.g2.re;
        if !(g2 > 0.0) || inv.g2.im.abs() > 1e-9 * g2 {
            return Err(Error::WrongLattice(format!("square family needs real g2 > 0, got {}", inv.g2)));
        }
        Ok(SquareFamily {
            lambda,
            a: (3.0 * PI / (2.0 * g2)).sqrt(),
            g2,
        })
    }

    pub fn a_squared(&self) -> f64 {
        self.a * self.a
    }

    pub fn params(&self) -> TypeIIParams {
        let a2 = self.a_squared();
        TypeIIParams {
            a: Complex64::new(-4.0 * a2, 0.0),
            d: Complex64::new(a2 * self.g2, 0.0),
            t: self.lambda * self.a,
            w: self.a / self.lambda,
            ..Default::default()
        }
    }

    /// Same family with `A` replaced by `factor·A`, which breaks the period
    /// condition; used to exercise the residual checks.
    pub fn with_scaled_a(&self, factor: f64) -> Self {
        SquareFamily {
            a: self.a * factor,
            ..*self
        }
    }

    /// The second coordinate is `x ↦ λA·x + (A/λ̄)·x̄` applied to `℘`, an
    /// R-linear map of `C`; it has rank 1 (surface in an R³) iff `|λ| = 1`.
    pub fn second_coordinate_rank(&self, tol: f64) -> usize {
        let alpha = self.lambda * self.a;
        let beta = self.a / self.lambda.conj();
        let det = alpha.norm_sqr() - beta.norm_sqr();
        if det.abs() <= tol * (alpha.norm_sqr() + beta.norm_sqr()) {
            1
        } else {
            2
        }
    }

    pub fn lies_in_r3(&self) -> bool {
        self.second_coordinate_rank(1e-12) == 1
    }
}

pub fn square_family(lambda: Complex64, inv: &EllipticInvariants) -> Result<SquareFamily> {
    SquareFamily::new(lambda, inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{rectangular_invariants, SeriesConfig};
    use crate::solver::type_ii_residual;

    fn inv() -> EllipticInvariants {
        rectangular_invariants(1.0, &SeriesConfig::default()).unwrap()
    }

    #[test]
    fn family_is_feasible() {
        let inv = inv();
        for lambda in [
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::from_polar(1.0, PI / 7.0),
            Complex64::new(0.3, -1.7),
        ] {
            let fam = SquareFamily::new(lambda, &inv).unwrap();
            let r = type_ii_residual(&fam.params(), &inv, Complex64::i());
            assert!(r.max_abs() <= 1e-10, "lambda={lambda}: {:e}", r.max_abs());
        }
    }

    #[test]
    fn product_tw_is_a_squared() {
        let fam = SquareFamily::new(Complex64::new(2.0, 0.0), &inv()).unwrap();
        let p = fam.params();
        assert!((p.t * p.w - fam.a_squared()).norm() < 1e-15);
    }

    #[test]
    fn real_lambda_one_gives_real_params() {
        let fam = SquareFamily::new(Complex64::new(1.0, 0.0), &inv()).unwrap();
        let p = fam.params();
        assert_eq!(p.max_imag(), 0.0);
        assert_eq!(p.t, p.w);
    }

    #[test]
    fn r3_iff_unit_lambda() {
        let inv = inv();
        assert!(SquareFamily::new(Complex64::from_polar(1.0, 0.4), &inv).unwrap().lies_in_r3());
        assert!(!SquareFamily::new(Complex64::new(2.0, 0.0), &inv).unwrap().lies_in_r3());
    }

    #[test]
    fn zero_lambda_rejected() {
        assert!(SquareFamily::new(Complex64::new(0.0, 0.0), &inv()).is_err());
    }
}
