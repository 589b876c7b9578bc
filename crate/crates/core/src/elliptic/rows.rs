//! Lattice sums arranged by rows `{m + nτ : m ∈ Z}`.
//!
//! Each row is summed in closed form with the cotangent identity
//! `Σ_m (x+m)^{-k} = π^k csc²(πx) P_{k-1}(cot πx)/(k-1)!`, so only the row
//! index needs truncating and the row contributions decay like `e^{-2πn Im τ}`.

use super::{cycle_integral, Cycle, EllipticInvariants, Lattice, SeriesConfig, Weierstrass};
use crate::cmath::csc2_cot;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const ZETA4: f64 = PI * PI * PI * PI / 90.0;
const ZETA6: f64 = PI * PI * PI * PI * PI * PI / 945.0;

/// `Σ_m (x+m)^{-4}` and `Σ_m (x+m)^{-6}`.
fn row_sums_4_6(x: Complex64) -> (Complex64, Complex64) {
    let (s2, c) = csc2_cot(PI * x);
    let c2 = c * c;
    let pi4 = PI.powi(4);
    let p3 = 6.0 * c2 + 2.0;
    let p5 = 120.0 * c2 * c2 + 120.0 * c2 + 16.0;
    (pi4 * s2 * p3 / 6.0, pi4 * PI * PI * s2 * p5 / 120.0)
}

/// Sums rows `n = 1, 2, …` of `f(n)` until two consecutive terms drop below
/// `tol·(scale + |sum|)`.
pub(crate) fn sum_rows<T, F>(cfg: &SeriesConfig, scale: f64, mut f: F) -> Result<T>
where
    T: Default + std::ops::AddAssign + Copy,
    F: FnMut(i64) -> (T, f64),
{
    let mut acc = T::default();
    let mut total = 0.0;
    let mut quiet = 0;
    let mut last = f64::INFINITY;
    for n in 1..=cfg.lattice_cutoff as i64 {
        let (term, mag) = f(n);
        acc += term;
        total += mag;
        last = mag;
        if mag <= cfg.tol * (scale + total) {
            quiet += 1;
            if quiet == 2 {
                return Ok(acc);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Truncation {
        max_terms: cfg.lattice_cutoff,
        last_term: last,
    })
}

/// Eisenstein sums `G₄ = Σ′ω⁻⁴` and `G₆ = Σ′ω⁻⁶`.
pub fn eisenstein_g4_g6(lat: &Lattice, cfg: &SeriesConfig) -> Result<(Complex64, Complex64)> {
    let tau = lat.tau();
    let (r4, r6) = sum_rows(cfg, 1.0, |n| {
        let (a, b) = row_sums_4_6(tau * n as f64);
        (Pair(a, b), a.norm().max(b.norm()))
    })
    .map(|p: Pair| (p.0, p.1))?;
    Ok((
        Complex64::new(2.0 * ZETA4, 0.0) + 2.0 * r4,
        Complex64::new(2.0 * ZETA6, 0.0) + 2.0 * r6,
    ))
}

#[derive(Clone, Copy, Default)]
pub(crate) struct Pair(pub Complex64, pub Complex64);

impl std::ops::AddAssign for Pair {
    fn add_assign(&mut self, o: Pair) {
        self.0 += o.0;
        self.1 += o.1;
    }
}

#[cfg(test)]
/// `η₁` by the row-ordered `G₂` sum, `π²/3 + 2π² Σ_{n≥1} csc²(πnτ)`.
pub(crate) fn eta1_rows(lat: &Lattice, cfg: &SeriesConfig) -> Result<Complex64> {
    let tau = lat.tau();
    let s: Complex64 = sum_rows(cfg, 1.0, |n| {
        let (s2, _) = csc2_cot(PI * tau * n as f64);
        (s2, s2.norm())
    })?;
    Ok(Complex64::new(PI * PI / 3.0, 0.0) + 2.0 * PI * PI * s)
}

/// Invariants for an arbitrary `τ`: `g₂ = 60G₄`, `g₃ = 140G₆` from row sums, and
/// `η₁, η₂` as `−∫℘` along the two fundamental cycles.
pub fn general_invariants(tau: Complex64, cfg: &SeriesConfig) -> Result<EllipticInvariants> {
    let lat = Lattice::new(tau)?;
    cfg.validate()?;
    let (g4, g6) = eisenstein_g4_g6(&lat, cfg)?;
    let g2 = 60.0 * g4;
    let g3 = 140.0 * g6;
    // ℘ alone does not depend on η, so a provisional context is enough to
    // integrate it.
    let provisional = EllipticInvariants {
        g2,
        g3,
        eta1: Complex64::default(),
        eta2: Complex64::default(),
        q: None,
    };
    let wp = Weierstrass::new(lat, provisional, *cfg);
    let p = |z: Complex64| wp.p_unchecked(z);
    let eta1 = -cycle_integral(p, Cycle::Gamma1, &lat, cfg)?.value;
    let eta2 = -cycle_integral(p, Cycle::Gamma2, &lat, cfg)?.value;
    let q = lat.rectangular_r().map(|r| (-2.0 * PI * r).exp());
    let inv = EllipticInvariants {
        g2,
        g3,
        eta1,
        eta2,
        q,
    };
    let leg = inv.legendre_residual(tau);
    if leg > 1e-10 {
        return Err(Error::Resolution(format!(
            "Legendre residual {leg:e} exceeds 1e-10; increase cycle_samples or lattice_cutoff"
        )));
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::rectangular_invariants;

    /// Square-truncated Eisenstein sum with tail bound, for small τ only.
    fn brute_g4(tau: Complex64, m: i64) -> Complex64 {
        let mut s = Complex64::default();
        for a in -m..=m {
            for b in -m..=m {
                if (a, b) != (0, 0) {
                    let w = Complex64::new(a as f64, 0.0) + tau * b as f64;
                    s += 1.0 / (w * w * w * w);
                }
            }
        }
        s
    }

    #[test]
    fn g4_rows_match_brute_force() {
        let cfg = SeriesConfig::default();
        for &tau in &[Complex64::i(), Complex64::new(0.3, 1.1), Lattice::equianharmonic().tau()] {
            let lat = Lattice::new(tau).unwrap();
            let (g4, _) = eisenstein_g4_g6(&lat, &cfg).unwrap();
            let b = brute_g4(tau, 200);
            // square tail ~ 2π·Σ_{r>200} r⁻³ ≲ 1e-4 · Im τ⁻¹
            assert!((g4 - b).norm() < 2e-4, "tau={tau}: {g4} vs {b}");
        }
    }

    #[test]
    fn eta_rows_match_qseries() {
        let cfg = SeriesConfig::default();
        for &r in &[1.0, 1.3, 2.0] {
            let lat = Lattice::rectangular(r).unwrap();
            let e = eta1_rows(&lat, &cfg).unwrap();
            let q = rectangular_invariants(r, &cfg).unwrap();
            assert!((e - q.eta1).norm() < 1e-12);
        }
    }

    #[test]
    fn equianharmonic_g2_vanishes() {
        let inv = general_invariants(Lattice::equianharmonic().tau(), &SeriesConfig::default()).unwrap();
        assert!(inv.g2.norm() < 1e-10 * inv.g3.norm());
    }
}
