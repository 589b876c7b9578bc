//! `N(R)`, `D(R)`, `T(R) = N/D` and the two combinations
//! `X = 1/(4T) − η`, `Y = η − g₂T/3` that drive the rectangular solution.
//!
//! All of these tend to finite limits (or zero) as `R → ∞` through
//! differences of `O(1)` quantities, so every value is assembled from its
//! deviation off the limit, which is an exact polynomial in the Lambert sums.

use crate::elliptic::{lambert_sums, SeriesConfig};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const ETA_INF: f64 = PI * PI / 3.0;
pub const G2_INF: f64 = 4.0 * PI * PI * PI * PI / 3.0;
pub const G3_INF: f64 = 8.0 * PI * PI * PI * PI * PI * PI / 27.0;
pub const N_INF: f64 = 8.0 * PI * PI * PI;
pub const D_INF: f64 = 32.0 * PI * PI * PI * PI * PI / 3.0;
pub const T_INF: f64 = 3.0 / (4.0 * PI * PI);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TFunction {
    pub r: f64,
    pub q: f64,
    /// Lambert sums `Σ n^k qⁿ/(1−qⁿ)`, `k = 1, 3, 5`.
    pub s1: f64,
    pub s3: f64,
    pub s5: f64,
    pub eta: f64,
    pub g2: f64,
    pub g3: f64,
    /// Deviations `η − π²/3`, `g₂ − 4π⁴/3`, `g₃ − 8π⁶/27`.
    pub d_eta: f64,
    pub d_g2: f64,
    pub d_g3: f64,
    /// `R(g₂ − 12η²) + 24ηπ`.
    pub n: f64,
    /// `R(12g₃ − 8g₂η) + 8g₂π`.
    pub d: f64,
    pub d_n: f64,
    pub d_d: f64,
    pub t: f64,
    pub d_t: f64,
    /// `1/(4T) − η`.
    pub x: f64,
    /// `η − g₂T/3`.
    pub y: f64,
}

impl TFunction {
    /// Valid for every `R ≥ 1`; at `R = 1` the denominator `D` vanishes and
    /// `T, X, Y` are infinite.
    pub fn new(r: f64, cfg: &SeriesConfig) -> Result<Self> {
        if !(r >= 1.0) || !r.is_finite() {
            return Err(Error::Domain(format!("T(R) needs R >= 1, got {r}")));
        }
        let q = (-2.0 * PI * r).exp();
        let s = lambert_sums(q, cfg)?;
        let pi2 = PI * PI;
        let d_eta = -8.0 * pi2 * s.s1;
        let d_g2 = 320.0 * pi2 * pi2 * s.s3;
        let d_g3 = -(8.0 * 504.0 / 27.0) * pi2 * pi2 * pi2 * s.s5;
        let eta = ETA_INF + d_eta;
        let g2 = G2_INF + d_g2;
        let g3 = G3_INF + d_g3;

        // N − N∞ and D − D∞; the R-proportional parts vanish at the limit.
        let d_n = r * (d_g2 - 24.0 * ETA_INF * d_eta - 12.0 * d_eta * d_eta) + 24.0 * PI * d_eta;
        let d_d = r * (12.0 * d_g3 - 8.0 * (G2_INF * d_eta + d_g2 * ETA_INF + d_g2 * d_eta))
            + 8.0 * PI * d_g2;
        let n = N_INF + d_n;
        let d = D_INF + d_d;
        let t = n / d;
        let d_t = (d_n - T_INF * d_d) / d;

        // D − 4Nη and 3ηD − g₂N both vanish at the limit.
        let dm4ne = d_d - 4.0 * (d_n * ETA_INF + N_INF * d_eta + d_n * d_eta);
        let x = dm4ne / (4.0 * n);
        let num_y = 3.0 * (d_eta * D_INF + ETA_INF * d_d + d_eta * d_d)
            - (d_g2 * N_INF + G2_INF * d_n + d_g2 * d_n);
        let y = num_y / (3.0 * d);

        Ok(TFunction {
            r,
            q,
            s1: s.s1,
            s3: s.s3,
            s5: s.s5,
            eta,
            g2,
            g3,
            d_eta,
            d_g2,
            d_g3,
            n,
            d,
            d_n,
            d_d,
            t,
            d_t,
            x,
            y,
        })
    }

    /// `(R/π)X² + 2(1 + (R/π)X)Y`.
    pub fn lhs(&self) -> f64 {
        let rx = self.r / PI * self.x;
        rx * self.x + 2.0 * (1.0 + rx) * self.y
    }

    /// `2(η − g₂T/3 − 2π/R)`.
    pub fn rhs_coeff(&self) -> f64 {
        2.0 * (self.y - 2.0 * PI / self.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::rectangular_invariants;

    #[test]
    fn matches_naive_formulas_near_one() {
        let cfg = SeriesConfig::default();
        for &r in &[1.05, 1.2, 1.5, 2.0] {
            let f = TFunction::new(r, &cfg).unwrap();
            let (g2, g3, eta) = rectangular_invariants(r, &cfg).unwrap().real_parts();
            let n = r * (g2 - 12.0 * eta * eta) + 24.0 * eta * PI;
            let d = r * (12.0 * g3 - 8.0 * g2 * eta) + 8.0 * g2 * PI;
            assert!((f.n - n).abs() < 1e-10 * n.abs());
            assert!((f.d - d).abs() < 1e-9 * d.abs().max(1.0));
            let t = n / d;
            assert!((f.x - (1.0 / (4.0 * t) - eta)).abs() < 1e-8);
            assert!((f.y - (eta - g2 * t / 3.0)).abs() < 1e-8);
        }
    }

    #[test]
    fn d_vanishes_at_one() {
        let f = TFunction::new(1.0, &SeriesConfig::default()).unwrap();
        assert!(f.d.abs() < 1e-8);
    }

    #[test]
    fn limits_at_large_r() {
        let f = TFunction::new(20.0, &SeriesConfig::default()).unwrap();
        assert!((f.n - N_INF).abs() < 1e-6);
        assert!((f.t - T_INF).abs() < 1e-8);
        assert!(f.x.abs() < 1e-40 && f.y.abs() < 1e-40);
    }

    #[test]
    fn rejects_r_below_one() {
        assert!(TFunction::new(0.99, &SeriesConfig::default()).is_err());
    }
}
