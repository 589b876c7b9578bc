//! The Type-II system: six algebraic equations coming from `e′f′ + g′h′ = 0`
//! and four period equations, in the eleven complex unknowns of
//!
//! ```text
//! e′ = a℘² + b℘′ + c℘ + d    f′ = ℘ + s
//! g′ = t℘′ + u℘ + v          h′ = w℘′ + y℘ + z
//! ```

mod classify;
mod obstruction;
mod rectangular;
mod refine;
mod square;

pub use classify::{classify_solution, Classification};
pub use obstruction::{equianharmonic_check, type_i_residual, type_i_scan, InfeasibilityWitness, TypeIScan};
pub use rectangular::{solve_rectangular, RectangularSolution};
pub use refine::{multi_start, random_start, refine_solution, MultiStartReport, RefineOptions, Refined, StartOutcome};
pub use square::{square_family, SquareFamily};

use crate::elliptic::EllipticInvariants;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TypeIIParams {
    #[serde(with = "crate::serde_complex")]
    pub a: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub b: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub c: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub d: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub s: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub t: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub u: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub v: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub w: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub y: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub z: Complex64,
}

pub const PARAM_NAMES: [&str; 11] = ["a", "b", "c", "d", "s", "t", "u", "v", "w", "y", "z"];

impl TypeIIParams {
    pub fn to_array(&self) -> [Complex64; 11] {
        [
            self.a, self.b, self.c, self.d, self.s, self.t, self.u, self.v, self.w, self.y, self.z,
        ]
    }

    pub fn from_array(x: [Complex64; 11]) -> Self {
        let [a, b, c, d, s, t, u, v, w, y, z] = x;
        TypeIIParams {
            a,
            b,
            c,
            d,
            s,
            t,
            u,
            v,
            w,
            y,
            z,
        }
    }

    /// The 22 real coordinates `(Re a, Im a, Re b, …)`.
    pub fn to_real(&self) -> [f64; 22] {
        let mut out = [0.0; 22];
        for (i, z) in self.to_array().iter().enumerate() {
            out[2 * i] = z.re;
            out[2 * i + 1] = z.im;
        }
        out
    }

    pub fn from_real(x: &[f64]) -> Self {
        assert_eq!(x.len(), 22, "expected 22 real coordinates");
        let mut arr = [Complex64::default(); 11];
        for (i, z) in arr.iter_mut().enumerate() {
            *z = Complex64::new(x[2 * i], x[2 * i + 1]);
        }
        Self::from_array(arr)
    }

    /// Euclidean norm over the 22 real coordinates.
    pub fn norm(&self) -> f64 {
        self.to_array().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.to_real().iter().all(|x| x.is_finite())
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imag(&self) -> f64 {
        self.to_array().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualVector {
    #[serde(with = "crate::serde_complex::seq")]
    pub alg: [Complex64; 6],
    #[serde(with = "crate::serde_complex::seq")]
    pub per1: [Complex64; 2],
    #[serde(with = "crate::serde_complex::seq")]
    pub per2: [Complex64; 2],
}

impl ResidualVector {
    pub fn components(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.alg.iter().chain(&self.per1).chain(&self.per2).copied()
    }

    pub fn max_abs(&self) -> f64 {
        self.components().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.components().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn to_real(&self) -> [f64; 20] {
        let mut out = [0.0; 20];
        for (i, z) in self.components().enumerate() {
            out[2 * i] = z.re;
            out[2 * i + 1] = z.im;
        }
        out
    }

    /// `max |component| ≤ tol·(1 + ‖p‖²)`.
    pub fn is_feasible(&self, p: &TypeIIParams, tol: f64) -> bool {
        self.max_abs() <= tol * (1.0 + p.norm().powi(2))
    }
}

/// Evaluates the ten equations; `inv` must belong to `tau`.
pub fn type_ii_residual(p: &TypeIIParams, inv: &EllipticInvariants, tau: Complex64) -> ResidualVector {
    let TypeIIParams {
        a,
        b,
        c,
        d,
        s,
        t,
        u,
        v,
        w,
        y,
        z,
    } = *p;
    let (g2, g3, eta) = (inv.g2, inv.g3, inv.eta1);
    let k = tau.im / PI;
    let one = Complex64::new(1.0, 0.0);
    let alg = [
        a + 4.0 * t * w,
        b + t * y + u * w,
        c + a * s + u * y,
        d + c * s + u * z + v * y - g2 * t * w,
        b * s + v * w + t * z,
        d * s + v * z - g3 * t * w,
    ];
    let per1 = [
        c - one + k * (eta.conj() - s.conj()),
        c * (one - k * eta) + k * (a * g2 / 12.0 + d) - one,
    ];
    let per2 = [
        u + y.conj() * (k * eta.conj() - one) - k * z.conj(),
        u * (one - k * eta) + k * v - y.conj(),
    ];
    ResidualVector { alg, per1, per2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{rectangular_invariants, SeriesConfig};

    #[test]
    fn zero_params_leave_period_constants() {
        let inv = rectangular_invariants(1.5, &SeriesConfig::default()).unwrap();
        let r = type_ii_residual(&TypeIIParams::default(), &inv, Complex64::new(0.0, 1.5));
        assert!(r.alg.iter().all(|z| z.norm() == 0.0));
        assert!(r.per1[1].norm() > 0.5);
    }

    #[test]
    fn real_round_trip() {
        let mut x = [0.0; 22];
        for (i, v) in x.iter_mut().enumerate() {
            *v = i as f64 - 3.5;
        }
        let p = TypeIIParams::from_real(&x);
        assert_eq!(p.to_real(), x);
        assert_eq!(TypeIIParams::from_array(p.to_array()), p);
    }
}
