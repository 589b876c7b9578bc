use super::{EllipticInvariants, SeriesConfig};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `S_k = Σ_{n≥1} n^k qⁿ/(1−qⁿ)` for `k = 1, 3, 5`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambertSums {
    pub q: f64,
    pub s1: f64,
    pub s3: f64,
    pub s5: f64,
    pub terms: usize,
}

pub fn lambert_sums(q: f64, cfg: &SeriesConfig) -> Result<LambertSums> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::Domain(format!("q must lie in [0, 1), got {q}")));
    }
    let (mut s1, mut s3, mut s5) = (0.0, 0.0, 0.0);
    let mut qn = 1.0;
    for n in 1..=cfg.max_terms {
        qn *= q;
        let nf = n as f64;
        let base = qn / (1.0 - qn);
        let t1 = nf * base;
        let t3 = nf * nf * t1;
        let t5 = nf * nf * t3;
        s1 += t1;
        s3 += t3;
        s5 += t5;
        // the n⁵ sum is the slowest; stop when its term is negligible
        if t5 <= cfg.tol * s5 || t5 == 0.0 {
            return Ok(LambertSums {
                q,
                s1,
                s3,
                s5,
                terms: n,
            });
        }
    }
    let nf = cfg.max_terms as f64;
    Err(Error::Truncation {
        max_terms: cfg.max_terms,
        last_term: nf.powi(5) * qn / (1.0 - qn),
    })
}

/// Invariants of the lattice `(1, R·i)` from the Lambert q-series, `q = e^{−2πR}`.
///
/// For `R < 1` the lattice is rescaled to `(1, i/R)` first.
pub fn rectangular_invariants(r: f64, cfg: &SeriesConfig) -> Result<EllipticInvariants> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("R must be positive, got {r}")));
    }
    cfg.validate()?;
    if r < 1.0 {
        // (1, Ri) = Ri·(1, i/R): g_k scale by (Ri)^{-k}, and the period 1 is
        // the image of the second period of the dual lattice.
        let dual = rectangular_invariants(1.0 / r, cfg)?;
        let (g2d, g3d, eta1d) = dual.real_parts();
        let g2 = g2d / r.powi(4);
        let g3 = -g3d / r.powi(6);
        let eta1 = -eta1d / (r * r) + 2.0 * PI / r;
        return Ok(assemble(r, g2, g3, eta1));
    }
    let q = (-2.0 * PI * r).exp();
    let s = lambert_sums(q, cfg)?;
    let pi2 = PI * PI;
    let eta1 = pi2 / 3.0 * (1.0 - 24.0 * s.s1);
    let g2 = 4.0 * pi2 * pi2 / 3.0 * (1.0 + 240.0 * s.s3);
    let g3 = 8.0 * pi2 * pi2 * pi2 / 27.0 * (1.0 - 504.0 * s.s5);
    Ok(assemble(r, g2, g3, eta1))
}

fn assemble(r: f64, g2: f64, g3: f64, eta1: f64) -> EllipticInvariants {
    EllipticInvariants {
        g2: Complex64::new(g2, 0.0),
        g3: Complex64::new(g3, 0.0),
        eta1: Complex64::new(eta1, 0.0),
        // Legendre: η₂ = τη₁ − 2πi
        eta2: Complex64::new(0.0, r * eta1 - 2.0 * PI),
        q: Some((-2.0 * PI * r).exp()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_lattice_special_values() {
        let inv = rectangular_invariants(1.0, &SeriesConfig::default()).unwrap();
        assert!((inv.eta1.re - PI).abs() < 1e-12);
        assert!(inv.g3.re.abs() < 1e-10);
        assert!(inv.legendre_residual(Complex64::i()) < 1e-13);
    }

    #[test]
    fn dual_rectangle_matches_direct() {
        // R and 1/R near 1 both sit in the fast regime; compare the mapped value
        // against a direct q-series evaluation at R < 1 (still convergent).
        let cfg = SeriesConfig {
            max_terms: 400,
            ..Default::default()
        };
        let r = 0.8;
        let mapped = rectangular_invariants(r, &cfg).unwrap();
        let q = (-2.0 * PI * r).exp();
        let s = lambert_sums(q, &cfg).unwrap();
        let pi2 = PI * PI;
        let eta1 = pi2 / 3.0 * (1.0 - 24.0 * s.s1);
        let g2 = 4.0 * pi2 * pi2 / 3.0 * (1.0 + 240.0 * s.s3);
        let g3 = 8.0 * pi2 * pi2 * pi2 / 27.0 * (1.0 - 504.0 * s.s5);
        assert!((mapped.eta1.re - eta1).abs() < 1e-10);
        assert!((mapped.g2.re - g2).abs() < 1e-9 * g2);
        assert!((mapped.g3.re - g3).abs() < 1e-9 * g3.abs());
    }

    #[test]
    fn truncation_is_reported() {
        let cfg = SeriesConfig {
            max_terms: 8,
            ..Default::default()
        };
        assert!(matches!(
            lambert_sums(0.9, &cfg),
            Err(Error::Truncation { max_terms: 8, .. })
        ));
    }

    #[test]
    fn rejects_nonpositive_r() {
        assert!(rectangular_invariants(0.0, &SeriesConfig::default()).is_err());
        assert!(rectangular_invariants(f64::NAN, &SeriesConfig::default()).is_err());
    }
}
