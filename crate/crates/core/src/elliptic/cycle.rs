use super::{Cycle, Lattice, SeriesConfig};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleIntegral {
    #[serde(with = "crate::serde_complex")]
    pub value: Complex64,
    /// `|I_N − I_{N/2}|`, the Richardson-style check of the trapezoid rule.
    pub half_resolution_diff: f64,
    pub min_pole_distance: f64,
}

/// `∫ f dz` along the segment from `(1+τ)/2` to `(1+τ)/2 + ω`, `ω` the
/// period of `cycle`, by the periodic trapezoid rule with `cfg.cycle_samples`
/// nodes.
///
/// `f` must be periodic with period `ω` for the rule to be spectrally accurate.
pub fn cycle_integral<F>(f: F, cycle: Cycle, lat: &Lattice, cfg: &SeriesConfig) -> Result<CycleIntegral>
where
    F: Fn(Complex64) -> Complex64,
{
    let n = cfg.cycle_samples;
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!("cycle_samples must be even and >= 4, got {n}")));
    }
    let start = lat.center();
    let omega = lat.period(cycle);
    let h = omega / n as f64;

    // The path lies on a line parallel to a lattice direction, so its distance
    // to the lattice is periodic; checking nodes and midpoints is enough at
    // the resolutions we use.
    let mut min_d = f64::INFINITY;
    for j in 0..2 * n {
        let z = start + h * (j as f64 * 0.5);
        min_d = min_d.min(lat.distance_to_lattice(z));
    }
    if min_d < cfg.pole_margin {
        return Err(Error::PathNearPole {
            distance: min_d,
            margin: cfg.pole_margin,
        });
    }

    let mut even = Complex64::default();
    let mut odd = Complex64::default();
    for j in 0..n {
        let v = f(start + h * j as f64);
        if j % 2 == 0 {
            even += v;
        } else {
            odd += v;
        }
    }
    let full = (even + odd) * h;
    let half = even * (h * 2.0);
    Ok(CycleIntegral {
        value: full,
        half_resolution_diff: (full - half).norm(),
        min_pole_distance: min_d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{rectangular_invariants, Weierstrass};

    #[test]
    fn trig_polynomial_exact() {
        let lat = Lattice::rectangular(2.0).unwrap();
        let cfg = SeriesConfig::default();
        let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let r = cycle_integral(|z| (two_pi_i * z).exp() + 3.0, Cycle::Gamma1, &lat, &cfg).unwrap();
        assert!((r.value - 3.0).norm() < 1e-13);
    }

    #[test]
    fn p_prime_integrates_to_zero() {
        let cfg = SeriesConfig::default();
        let lat = Lattice::rectangular(1.3).unwrap();
        let wp = Weierstrass::new(lat, rectangular_invariants(1.3, &cfg).unwrap(), cfg);
        for cyc in [Cycle::Gamma1, Cycle::Gamma2] {
            let r = cycle_integral(|z| wp.eval_unchecked(z).p_prime, cyc, &lat, &cfg).unwrap();
            assert!(r.value.norm() < 1e-10);
        }
    }

    #[test]
    fn path_too_close_rejected() {
        let lat = Lattice::rectangular(0.05).unwrap();
        let cfg = SeriesConfig::default();
        let r = cycle_integral(|_| Complex64::new(1.0, 0.0), Cycle::Gamma1, &lat, &cfg);
        assert!(matches!(r, Err(Error::PathNearPole { .. })));
    }
}
