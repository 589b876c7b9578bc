use minitori::elliptic::{
    cycle_integral, general_invariants, lambert_sums, rectangular_invariants, Cycle, Lattice,
    SeriesConfig, Weierstrass,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn cfg() -> SeriesConfig {
    SeriesConfig::default()
}

fn ctx(r: f64) -> Weierstrass {
    Weierstrass::new(
        Lattice::rectangular(r).unwrap(),
        rectangular_invariants(r, &cfg()).unwrap(),
        cfg(),
    )
}

fn random_admissible(rng: &mut ChaCha8Rng, lat: &Lattice, margin: f64) -> Complex64 {
    loop {
        let z = Complex64::new(rng.random_range(-2.0..2.0), 0.0)
            + lat.tau() * rng.random_range(-2.0..2.0);
        if lat.distance_to_lattice(z) >= margin {
            return z;
        }
    }
}

/// Square-truncated `Σ′ω⁻⁴` on `Z + iZ` with `|m|,|n| ≤ M`, as an oracle for g₂(1).
fn brute_g2_square(m: i64) -> f64 {
    let mut s = 0.0;
    for a in -m..=m {
        for b in -m..=m {
            if (a, b) != (0, 0) {
                let w = Complex64::new(a as f64, b as f64);
                s += (1.0 / (w * w * w * w)).re;
            }
        }
    }
    60.0 * s
}

#[test]
fn limits_at_r6() {
    let inv = rectangular_invariants(6.0, &cfg()).unwrap();
    assert!((inv.eta1.re - PI * PI / 3.0).abs() < 1e-8);
    assert!((inv.g2.re - 4.0 * PI.powi(4) / 3.0).abs() < 1e-8);
    assert!((inv.g3.re - (2.0f64 / 3.0).powi(3) * PI.powi(6)).abs() < 1e-8);
    assert_eq!(inv.q, Some((-12.0 * PI).exp()));
}

#[test]
fn square_lattice_values() {
    let inv = rectangular_invariants(1.0, &cfg()).unwrap();
    assert!((inv.eta1.re - PI).abs() < 1e-10);
    assert!(inv.g3.re.abs() < 1e-10);
    // truncated lattice sum; the square tail is below 1e-3 for M = 200
    let brute = brute_g2_square(200);
    assert!((inv.g2.re - brute).abs() < 1e-2, "{} vs {}", inv.g2.re, brute);
    assert!(inv.g2.re <= 190.0);
}

#[test]
fn two_routes_agree_on_rectangles() {
    for &r in &[1.0, 1.3, 2.0, 5.0] {
        let a = rectangular_invariants(r, &cfg()).unwrap();
        let b = general_invariants(Complex64::new(0.0, r), &cfg()).unwrap();
        assert!(a.max_deviation(&b) < 1e-9, "R={r}: {:e}", a.max_deviation(&b));
    }
}

#[test]
fn legendre_everywhere() {
    let taus = [
        Complex64::i(),
        Complex64::new(0.0, 1.3),
        Complex64::new(0.0, 2.0),
        Complex64::new(0.0, 5.0),
        Lattice::equianharmonic().tau(),
        Complex64::new(0.31, 0.77),
    ];
    for tau in taus {
        let inv = general_invariants(tau, &cfg()).unwrap();
        assert!(inv.legendre_residual(tau) <= 1e-10);
        if tau.re == 0.0 {
            let q = rectangular_invariants(tau.im, &cfg()).unwrap();
            assert!(q.legendre_residual(tau) <= 1e-10);
        }
    }
}

#[test]
fn equianharmonic_g2_zero_relative_to_scale() {
    let inv = general_invariants(Lattice::equianharmonic().tau(), &cfg()).unwrap();
    // normalise by the lattice scale |g₃|^{1/3} so that g₃ ↦ 1
    let scale = inv.g3.norm().powf(2.0 / 3.0);
    assert!(inv.g2.norm() / scale <= 1e-8);
    assert!(inv.g3.im.abs() < 1e-9 && inv.g3.re > 0.0);
}

#[test]
fn ode_residual_random_points() {
    let wp = ctx(2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let z = random_admissible(&mut rng, &wp.lattice, 0.05);
        let v = wp.eval(z).unwrap();
        let bound = 1e-9 * (1.0 + v.p.norm().powi(3));
        assert!(wp.ode_residual(&v) <= bound, "z={z}");
        // ℘″ identity against a finite difference of ℘′
        let h = Complex64::new(1e-5, 0.0);
        let fd = (wp.eval(z + h).unwrap().p_prime - wp.eval(z - h).unwrap().p_prime) / 2e-5;
        assert!((fd - v.p_second).norm() <= 1e-5 * (1.0 + v.p_second.norm()));
    }
}

#[test]
fn parity() {
    let wp = ctx(2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let z = random_admissible(&mut rng, &wp.lattice, 0.05);
        let a = wp.eval(z).unwrap();
        let b = wp.eval(-z).unwrap();
        assert!((a.p - b.p).norm() <= 1e-10 * (1.0 + a.p.norm()));
        assert!((a.p_prime + b.p_prime).norm() <= 1e-10 * (1.0 + a.p_prime.norm()));
        assert!((a.zeta + b.zeta).norm() <= 1e-10 * (1.0 + a.zeta.norm()));
    }
}

#[test]
fn double_periodicity_and_quasi_periods() {
    for lat in [Lattice::rectangular(2.0).unwrap(), Lattice::equianharmonic()] {
        let inv = general_invariants(lat.tau(), &cfg()).unwrap();
        let wp = Weierstrass::new(lat, inv, cfg());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let z = random_admissible(&mut rng, &lat, 0.05);
            let v = wp.eval(z).unwrap();
            let v1 = wp.eval(z + 1.0).unwrap();
            let vt = wp.eval(z + lat.tau()).unwrap();
            let s = 1.0 + v.p.norm();
            assert!((v1.p - v.p).norm() <= 1e-9 * s);
            assert!((vt.p - v.p).norm() <= 1e-9 * s);
            assert!((v1.zeta - v.zeta - inv.eta1).norm() <= 1e-9);
            assert!((vt.zeta - v.zeta - inv.eta2).norm() <= 1e-9);
        }
    }
}

#[test]
fn zeta_difference_quotient() {
    let wp = ctx(2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let h = 1e-5;
    for _ in 0..50 {
        let z = random_admissible(&mut rng, &wp.lattice, 0.2);
        let d = (wp.eval(z + h).unwrap().zeta - wp.eval(z - h).unwrap().zeta) / (2.0 * h);
        assert!((d + wp.eval(z).unwrap().p).norm() <= 1e-6);
    }
}

#[test]
fn cycle_integrals_of_p_and_p_squared() {
    let wp = ctx(2.0);
    let lat = wp.lattice;
    let c = cfg();
    let ip = cycle_integral(|z| wp.eval_unchecked(z).p, Cycle::Gamma1, &lat, &c).unwrap();
    assert!((ip.value + wp.inv.eta1).norm() < 1e-8);
    let ip2 = cycle_integral(|z| wp.eval_unchecked(z).p.powi(2), Cycle::Gamma1, &lat, &c).unwrap();
    assert!((ip2.value - wp.inv.g2 / 12.0).norm() < 1e-8);
    let ipp = cycle_integral(|z| wp.eval_unchecked(z).p_prime, Cycle::Gamma1, &lat, &c).unwrap();
    assert!(ipp.value.norm() < 1e-10);
    assert!(ip.half_resolution_diff < 1e-8);
}

#[test]
fn monotone_in_r() {
    // In floating point g₂ and g₃ stop moving once q drops below an ulp, so the
    // strict statements are checked on the exponentially small deviations.
    let c = cfg();
    let grid: Vec<f64> = (0..50).map(|i| 1.0 + 9.0 * i as f64 / 49.0).collect();
    let dev: Vec<_> = grid
        .iter()
        .map(|&r| lambert_sums((-2.0 * PI * r).exp(), &c).unwrap())
        .collect();
    for w in dev.windows(2) {
        assert!(w[1].s1 < w[0].s1 && w[1].s3 < w[0].s3 && w[1].s5 < w[0].s5);
    }
    let inv: Vec<_> = grid.iter().map(|&r| rectangular_invariants(r, &c).unwrap()).collect();
    for w in inv.windows(2) {
        assert!(w[1].eta1.re >= w[0].eta1.re);
        assert!(w[1].g3.re >= w[0].g3.re);
        assert!(w[1].g2.re <= w[0].g2.re);
    }
    for w in inv[..20].windows(2) {
        assert!(w[1].eta1.re > w[0].eta1.re && w[1].g3.re > w[0].g3.re && w[1].g2.re < w[0].g2.re);
    }
}

#[test]
fn small_r_through_dual_lattice() {
    for &r in &[0.5, 0.77] {
        let a = rectangular_invariants(r, &cfg()).unwrap();
        let b = general_invariants(Complex64::new(0.0, r), &cfg()).unwrap();
        assert!(a.max_deviation(&b) < 1e-8 * (1.0 + a.g3.norm()), "R={r}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn legendre_on_random_tau(x in -0.5f64..0.5, y in 0.6f64..3.0) {
        let tau = Complex64::new(x, y);
        let inv = general_invariants(tau, &cfg()).unwrap();
        prop_assert!(inv.legendre_residual(tau) <= 1e-10);
    }

    #[test]
    fn ode_on_random_tau(x in -0.5f64..0.5, y in 0.7f64..2.5, a in 0.05f64..0.95, b in 0.05f64..0.95) {
        let tau = Complex64::new(x, y);
        let lat = Lattice::new(tau).unwrap();
        let wp = Weierstrass::new(lat, general_invariants(tau, &cfg()).unwrap(), cfg());
        let z = Complex64::new(a, 0.0) + tau * b;
        prop_assume!(lat.distance_to_lattice(z) > 0.1);
        let v = wp.eval(z).unwrap();
        prop_assert!(wp.ode_residual(&v) <= 1e-9 * (1.0 + v.p.norm().powi(3)));
    }
}
