//! Lattices `Z + τZ`, their invariants `g₂, g₃, η₁, η₂`, and pointwise
//! evaluation of `℘, ℘′, ℘″, ζ`.
//!
//! Two independent routes produce the invariants: Lambert q-series for
//! rectangular lattices ([`rectangular_invariants`]) and row-summed Eisenstein
//! lattice sums plus numerical cycle integration ([`general_invariants`]).

mod cycle;
mod eval;
mod qseries;
mod rows;

pub use cycle::{cycle_integral, CycleIntegral};
pub use eval::{weierstrass_eval, PValues, Weierstrass};
pub use qseries::{lambert_sums, rectangular_invariants, LambertSums};
pub use rows::{eisenstein_g4_g6, general_invariants};

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One of the two fundamental cycles of the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cycle {
    /// Along the period `1`.
    Gamma1,
    /// Along the period `τ`.
    Gamma2,
}

/// The lattice generated by `1` and `τ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    #[serde(with = "crate::serde_complex")]
    tau: Complex64,
    rectangular_r: Option<f64>,
}

impl Lattice {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(Error::Domain(format!("Im tau must be positive, got tau = {tau}")));
        }
        let rectangular_r = (tau.re == 0.0).then_some(tau.im);
        Ok(Lattice { tau, rectangular_r })
    }

    /// Rectangular lattice generated by `1` and `R·i`.
    pub fn rectangular(r: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, r))
    }

    pub fn square() -> Self {
        Lattice {
            tau: Complex64::i(),
            rectangular_r: Some(1.0),
        }
    }

    /// `τ = e^{2πi/3}`.
    pub fn equianharmonic() -> Self {
        Lattice {
            tau: Complex64::from_polar(1.0, 2.0 * PI / 3.0),
            rectangular_r: None,
        }
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn rectangular_r(&self) -> Option<f64> {
        self.rectangular_r
    }

    pub fn im_tau(&self) -> f64 {
        self.tau.im
    }

    pub fn period(&self, cycle: Cycle) -> Complex64 {
        match cycle {
            Cycle::Gamma1 => Complex64::new(1.0, 0.0),
            Cycle::Gamma2 => self.tau,
        }
    }

    /// Centre of the fundamental parallelogram, `(1 + τ)/2`.
    pub fn center(&self) -> Complex64 {
        (Complex64::new(1.0, 0.0) + self.tau) * 0.5
    }

    pub fn point(&self, m: i64, n: i64) -> Complex64 {
        Complex64::new(m as f64, 0.0) + self.tau * n as f64
    }

    /// Real coordinates `(x, y)` with `z = x + y·τ`.
    pub fn coords(&self, z: Complex64) -> (f64, f64) {
        let y = z.im / self.tau.im;
        (z.re - y * self.tau.re, y)
    }

    /// Splits `z = w + m + nτ` with `m + nτ` the lattice point nearest to `z`.
    pub fn reduce(&self, z: Complex64) -> (Complex64, i64, i64) {
        let (x, y) = self.coords(z);
        let (m0, n0) = (x.round() as i64, y.round() as i64);
        let mut best = (f64::INFINITY, m0, n0);
        for dn in -1..=1 {
            for dm in -1..=1 {
                let (m, n) = (m0 + dm, n0 + dn);
                let d = (z - self.point(m, n)).norm();
                if d < best.0 {
                    best = (d, m, n);
                }
            }
        }
        let (_, m, n) = best;
        (z - self.point(m, n), m, n)
    }

    pub fn nearest_point(&self, z: Complex64) -> Complex64 {
        let (w, _, _) = self.reduce(z);
        z - w
    }

    pub fn distance_to_lattice(&self, z: Complex64) -> f64 {
        self.reduce(z).0.norm()
    }

    /// Length of the shortest nonzero lattice vector.
    pub fn min_period(&self) -> f64 {
        let mut best = f64::INFINITY;
        for n in -3i64..=3 {
            for m in -3i64..=3 {
                if (m, n) != (0, 0) {
                    best = best.min(self.point(m, n).norm());
                }
            }
        }
        best
    }
}

/// `g₂, g₃` and the quasi-periods `η₁, η₂` of a lattice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticInvariants {
    #[serde(with = "crate::serde_complex")]
    pub g2: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub g3: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub eta1: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub eta2: Complex64,
    /// `e^{-2πR}` for rectangular lattices.
    pub q: Option<f64>,
}

impl EllipticInvariants {
    /// `|τη₁ − η₂ − 2πi|`.
    pub fn legendre_residual(&self, tau: Complex64) -> f64 {
        (tau * self.eta1 - self.eta2 - Complex64::new(0.0, 2.0 * PI)).norm()
    }

    /// Largest absolute deviation between two sets of invariants.
    pub fn max_deviation(&self, other: &EllipticInvariants) -> f64 {
        [
            (self.g2 - other.g2).norm(),
            (self.g3 - other.g3).norm(),
            (self.eta1 - other.eta1).norm(),
            (self.eta2 - other.eta2).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Real parts `(g₂, g₃, η₁)`, meaningful for rectangular lattices.
    pub fn real_parts(&self) -> (f64, f64, f64) {
        (self.g2.re, self.g3.re, self.eta1.re)
    }
}

/// Accuracy knobs shared by every series and quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    pub tol: f64,
    pub max_terms: usize,
    /// Maximal number of lattice rows summed on each side.
    pub lattice_cutoff: usize,
    pub cycle_samples: usize,
    pub pole_margin: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            tol: 1e-14,
            max_terms: 64,
            lattice_cutoff: 60,
            cycle_samples: 2048,
            pole_margin: 0.05,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_terms < 8 {
            return Err(Error::Domain(format!("max_terms must be >= 8, got {}", self.max_terms)));
        }
        if self.lattice_cutoff < 10 {
            return Err(Error::Domain(format!(
                "lattice_cutoff must be >= 10, got {}",
                self.lattice_cutoff
            )));
        }
        if self.cycle_samples < 16 || !self.cycle_samples.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "cycle_samples must be even and >= 16, got {}",
                self.cycle_samples
            )));
        }
        if !(self.pole_margin > 0.0) {
            return Err(Error::Domain("pole_margin must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_rejects_lower_half_plane() {
        assert!(Lattice::new(Complex64::new(0.3, -1.0)).is_err());
        assert!(Lattice::new(Complex64::new(0.3, 0.0)).is_err());
        assert!(Lattice::rectangular(-2.0).is_err());
    }

    #[test]
    fn rectangular_flag_tracks_real_part() {
        assert_eq!(Lattice::rectangular(2.0).unwrap().rectangular_r(), Some(2.0));
        assert_eq!(Lattice::new(Complex64::new(0.1, 2.0)).unwrap().rectangular_r(), None);
        assert_eq!(Lattice::equianharmonic().rectangular_r(), None);
    }

    #[test]
    fn reduce_finds_nearest_point() {
        let lat = Lattice::equianharmonic();
        let z = lat.point(3, -2) + Complex64::new(0.1, -0.05);
        let (w, m, n) = lat.reduce(z);
        assert_eq!((m, n), (3, -2));
        assert!((w - Complex64::new(0.1, -0.05)).norm() < 1e-12);
    }

    #[test]
    fn min_period_of_rectangles() {
        assert!((Lattice::rectangular(2.0).unwrap().min_period() - 1.0).abs() < 1e-15);
        assert!((Lattice::rectangular(0.5).unwrap().min_period() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(SeriesConfig::default().validate().is_ok());
        let bad = SeriesConfig {
            max_terms: 4,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SeriesConfig {
            lattice_cutoff: 5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SeriesConfig {
            tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
