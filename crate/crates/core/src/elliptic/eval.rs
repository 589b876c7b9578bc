use super::rows::sum_rows;
use super::{EllipticInvariants, Lattice, SeriesConfig};
use crate::cmath::{csc2, csc2_cot};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `℘, ℘′, ℘″, ζ` at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PValues {
    #[serde(with = "crate::serde_complex")]
    pub p: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub p_prime: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub p_second: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub zeta: Complex64,
}

/// Evaluation context binding a lattice to its invariants.
#[derive(Clone, Copy, Debug)]
pub struct Weierstrass {
    pub lattice: Lattice,
    pub inv: EllipticInvariants,
    pub cfg: SeriesConfig,
}

impl Weierstrass {
    pub fn new(lattice: Lattice, inv: EllipticInvariants, cfg: SeriesConfig) -> Self {
        Weierstrass { lattice, inv, cfg }
    }

    fn check_pole(&self, z: Complex64) -> Result<()> {
        let lp = self.lattice.nearest_point(z);
        let distance = (z - lp).norm();
        if distance < self.cfg.pole_margin {
            return Err(Error::PoleProximity {
                z,
                lattice_point: lp,
                distance,
                margin: self.cfg.pole_margin,
            });
        }
        Ok(())
    }

    /// All four values, refusing points within `pole_margin` of the lattice.
    pub fn eval(&self, z: Complex64) -> Result<PValues> {
        self.check_pole(z)?;
        self.eval_rows(z)
    }

    /// As [`eval`](Self::eval) without the pole-margin check; still reduces `z`.
    pub fn eval_unchecked(&self, z: Complex64) -> PValues {
        self.eval_rows(z).unwrap_or_else(|_| self.eval_rows_capped(z))
    }

    pub fn p_unchecked(&self, z: Complex64) -> Complex64 {
        let (w, _, _) = self.lattice.reduce(z);
        self.p_reduced(w).unwrap_or_else(|_| self.eval_rows_capped(z).p)
    }

    fn p_reduced(&self, w: Complex64) -> Result<Complex64> {
        let tau = self.lattice.tau();
        let c0 = PI * PI * csc2(PI * w) - PI * PI / 3.0;
        let rows: Complex64 = sum_rows(&self.cfg, c0.norm().max(1.0), |n| {
            let nt = tau * n as f64;
            let base = 2.0 * csc2(PI * nt);
            let t = csc2(PI * (w + nt)) + csc2(PI * (w - nt)) - base;
            (t, t.norm() * PI * PI)
        })?;
        Ok(c0 + PI * PI * rows)
    }

    fn eval_rows(&self, z: Complex64) -> Result<PValues> {
        let (w, m, n) = self.lattice.reduce(z);
        let tau = self.lattice.tau();
        let (s0, k0) = csc2_cot(PI * w);
        let p0 = PI * PI * s0 - PI * PI / 3.0;
        let pp0 = -2.0 * PI.powi(3) * s0 * k0;
        let z0 = PI * k0;
        let scale = p0.norm().max(pp0.norm()).max(1.0);
        let rows: Triple = sum_rows(&self.cfg, scale, |j| row_terms(w, tau * j as f64))?;
        Ok(self.assemble(w, m, n, p0, pp0, z0, rows))
    }

    /// Fallback summing exactly `lattice_cutoff` rows, used only by the
    /// unchecked entry points.
    fn eval_rows_capped(&self, z: Complex64) -> PValues {
        let (w, m, n) = self.lattice.reduce(z);
        let tau = self.lattice.tau();
        let (s0, k0) = csc2_cot(PI * w);
        let p0 = PI * PI * s0 - PI * PI / 3.0;
        let pp0 = -2.0 * PI.powi(3) * s0 * k0;
        let z0 = PI * k0;
        let mut rows = Triple::default();
        for j in 1..=self.cfg.lattice_cutoff as i64 {
            rows += row_terms(w, tau * j as f64).0;
        }
        self.assemble(w, m, n, p0, pp0, z0, rows)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        &self,
        w: Complex64,
        m: i64,
        n: i64,
        p0: Complex64,
        pp0: Complex64,
        z0: Complex64,
        rows: Triple,
    ) -> PValues {
        let p = p0 + PI * PI * rows.p;
        let p_prime = pp0 - 2.0 * PI.powi(3) * rows.pp;
        let zeta_w = self.inv.eta1 * w + z0 + PI * rows.zeta;
        PValues {
            p,
            p_prime,
            p_second: 6.0 * p * p - self.inv.g2 / 2.0,
            zeta: zeta_w + self.inv.eta1 * m as f64 + self.inv.eta2 * n as f64,
        }
    }

    pub fn p(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval(z)?.p)
    }

    pub fn p_prime(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval(z)?.p_prime)
    }

    pub fn zeta(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval(z)?.zeta)
    }

    /// `|℘′² − (4℘³ − g₂℘ − g₃)|`.
    pub fn ode_residual(&self, v: &PValues) -> f64 {
        let g2 = self.inv.g2;
        let g3 = self.inv.g3;
        (v.p_prime * v.p_prime - (4.0 * v.p * v.p * v.p - g2 * v.p - g3)).norm()
    }
}

#[derive(Clone, Copy, Default)]
struct Triple {
    p: Complex64,
    pp: Complex64,
    zeta: Complex64,
}

impl std::ops::AddAssign for Triple {
    fn add_assign(&mut self, o: Triple) {
        self.p += o.p;
        self.pp += o.pp;
        self.zeta += o.zeta;
    }
}

/// Contributions of rows `±n` at the reduced point `w`, `nt = nτ`.
fn row_terms(w: Complex64, nt: Complex64) -> (Triple, f64) {
    let (sp, kp) = csc2_cot(PI * (w + nt));
    let (sm, km) = csc2_cot(PI * (w - nt));
    let base = 2.0 * csc2(PI * nt);
    let t = Triple {
        p: sp + sm - base,
        pp: sp * kp + sm * km,
        zeta: kp + km,
    };
    let mag = (t.p.norm() * PI * PI)
        .max(t.pp.norm() * 2.0 * PI.powi(3))
        .max(t.zeta.norm() * PI);
    (t, mag)
}

/// Free-function form of [`Weierstrass::eval`].
pub fn weierstrass_eval(
    z: Complex64,
    lat: &Lattice,
    inv: &EllipticInvariants,
    cfg: &SeriesConfig,
) -> Result<PValues> {
    Weierstrass::new(*lat, *inv, *cfg).eval(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::rectangular_invariants;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(r: f64) -> Weierstrass {
        let cfg = SeriesConfig::default();
        Weierstrass::new(
            Lattice::rectangular(r).unwrap(),
            rectangular_invariants(r, &cfg).unwrap(),
            cfg,
        )
    }

    #[test]
    fn laurent_leading_terms() {
        let wp = ctx(2.0);
        let z = Complex64::new(0.06, 0.05);
        let v = wp.eval(z).unwrap();
        // ℘ = z⁻² + g₂z²/20 + O(z⁴)
        let lead = 1.0 / (z * z) + wp.inv.g2 * z * z / 20.0;
        assert!((v.p - lead).norm() < 1e-3);
        assert!((v.zeta - 1.0 / z).norm() < 1e-2);
    }

    #[test]
    fn pole_margin_enforced() {
        let wp = ctx(2.0);
        let err = wp.eval(Complex64::new(1.01, 0.0)).unwrap_err();
        match err {
            Error::PoleProximity { lattice_point, .. } => {
                assert!((lattice_point - Complex64::new(1.0, 0.0)).norm() < 1e-12)
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn zeta_is_antiderivative_of_minus_p() {
        let wp = ctx(1.3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let z = Complex64::new(rng.random_range(0.1..0.9), rng.random_range(0.1..1.2));
            let h = 1e-5;
            let hz = Complex64::new(h, 0.0);
            let d = (wp.eval(z + hz).unwrap().zeta - wp.eval(z - hz).unwrap().zeta) / (2.0 * h);
            assert!((d + wp.eval(z).unwrap().p).norm() < 1e-6);
        }
    }

    #[test]
    fn p_unchecked_agrees() {
        let wp = ctx(2.0);
        let z = Complex64::new(0.37, 0.81);
        assert!((wp.p_unchecked(z) - wp.eval(z).unwrap().p).norm() < 1e-13);
    }
}
