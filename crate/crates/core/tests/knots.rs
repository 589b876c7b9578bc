use minitori::geometry::{build_immersion, curvature_report, sample_mesh, self_intersection_scan, ImmersionKind};
use minitori::knots::{
    boundary_curve, braid_of_end, gauss_linking, linking_number, normal_bundle_gap, random_rotation,
    writhe_at_infinity, PolyCurve,
};
use minitori::{Complex64, Error, Immersion, SeriesConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn build(kind: ImmersionKind) -> Immersion {
    build_immersion(kind, &SeriesConfig::default()).unwrap()
}

fn nodes() -> Immersion {
    build(ImmersionKind::Enneper4DNodes { lambda: Complex64::new(2.0, 0.0) })
}

/// A smooth closed curve built from a few random Fourier modes.
fn random_curve(rng: &mut ChaCha8Rng, center: [f64; 3], n: usize) -> PolyCurve {
    let coeffs: Vec<[f64; 6]> = (0..3).map(|_| [(); 6].map(|_| rng.random_range(-1.0..1.0))).collect();
    PolyCurve::from_r3(
        (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                let mut p = center;
                for (h, c) in coeffs.iter().enumerate() {
                    let f = (h + 1) as f64;
                    for j in 0..3 {
                        p[j] += (c[2 * (j % 3)] * (f * t).cos() + c[2 * (j % 3) + 1] * (f * t).sin()) / f;
                    }
                }
                p
            })
            .collect(),
    )
    .unwrap()
}

fn rotate(c: &PolyCurve, seed: u64) -> PolyCurve {
    let rot = random_rotation(&mut ChaCha8Rng::seed_from_u64(seed));
    PolyCurve::from_r3(
        c.r3()
            .into_iter()
            .map(|p| {
                let v = rot * nalgebra::Vector3::from(p);
                [v.x, v.y, v.z]
            })
            .collect(),
    )
    .unwrap()
}

#[test]
fn boundary_curves() {
    let imm = nodes();
    let c = boundary_curve(&imm, 10.0, 2048).unwrap();
    assert_eq!(c.len(), 2048);
    let scale = 1000.0 / 3.0;
    let max_norm = c.points.iter().map(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt()).fold(0.0, f64::max);
    assert!(max_norm > scale && max_norm < 1.5 * scale, "{max_norm}");

    let half = boundary_curve(&imm, 10.0, 1024).unwrap();
    assert!(half.hausdorff(&c) <= c.diameter() / 1024.0);

    assert!(matches!(boundary_curve(&imm, 0.5, 256), Err(Error::Asymptotics(_))));

    let rect = build(ImmersionKind::Rectangular { r: 2.0 });
    assert!(boundary_curve(&rect, 0.05, 512).is_ok());
}

#[test]
fn writhe_of_enneper_nodes() {
    let rep = writhe_at_infinity(&nodes(), 10.0, 2048, 17).unwrap();
    assert_eq!(rep.value.abs(), 4, "{rep:?}");
    assert_eq!(rep.end_order, 3);
    assert!(rep.checks.iter().all(|(_, v)| *v == rep.value));
}

#[test]
fn writhe_of_embedded_examples() {
    let emb = build(ImmersionKind::Enneper4DEmbedded { s: 1.0 });
    assert_eq!(writhe_at_infinity(&emb, 20.0, 2048, 5).unwrap().value, 0);
    let q = build(ImmersionKind::Quintic);
    assert_eq!(writhe_at_infinity(&q, 10.0, 2048, 5).unwrap().value, 0);
}

#[test]
fn braids_of_ends() {
    let b = braid_of_end(&nodes(), 10.0, 2048, 3).unwrap();
    assert_eq!(b.strands, 3);
    assert_eq!(b.algebraic_length.abs(), 4);
    let w = writhe_at_infinity(&nodes(), 10.0, 2048, 17).unwrap();
    assert_eq!(b.algebraic_length, w.value);

    let e = braid_of_end(&build(ImmersionKind::Enneper4DEmbedded { s: 1.0 }), 20.0, 2048, 3).unwrap();
    assert_eq!((e.strands, e.algebraic_length), (3, 0));
}

#[test]
fn normal_bundle_identity() {
    let imm = nodes();
    let kn = curvature_report(&imm).unwrap().total_kn;
    let w = writhe_at_infinity(&imm, 10.0, 2048, 17).unwrap().value;
    let mesh = sample_mesh(&imm, 81, 2.0).unwrap();
    let dps = self_intersection_scan(&imm, &mesh).unwrap();
    assert_eq!(dps.len(), 2);
    let d: i64 = dps.iter().map(|p| p.sign as i64).sum();
    assert_eq!(d.abs(), 2);
    assert!(normal_bundle_gap(kn, w, d) <= 0.05, "kn {kn}, w {w}, D {d}");

    for kind in [ImmersionKind::Enneper4DEmbedded { s: 1.0 }, ImmersionKind::Quintic] {
        let imm = build(kind);
        let kn = curvature_report(&imm).unwrap().total_kn;
        let r = if kind == ImmersionKind::Quintic { 10.0 } else { 20.0 };
        let w = writhe_at_infinity(&imm, r, 1024, 2).unwrap().value;
        assert!(normal_bundle_gap(kn, w, 0) <= 0.05);
    }
}

#[test]
fn crossing_count_matches_gauss_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for k in 0..20 {
        let a = random_curve(&mut rng, [0.0; 3], 200);
        let dx = rng.random_range(-0.5..0.5);
        let b = random_curve(&mut rng, [dx, 0.2, 0.0], 200);
        match linking_number(&a, &b, k) {
            Ok(lk) => assert!((lk.crossings - lk.gauss).abs() < 0.1),
            Err(Error::Proximity { .. }) => {}
            Err(e) => panic!("pair {k}: {e}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn linking_symmetry_rotation_reflection(seed in 0u64..10_000, shift in -0.6f64..0.6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_curve(&mut rng, [0.0; 3], 120);
        let b = random_curve(&mut rng, [shift, 0.1, -0.1], 120);
        let (_, dmin) = gauss_linking(&a, &b);
        prop_assume!(dmin > 1e-3);
        let ab = linking_number(&a, &b, seed).unwrap().value;
        prop_assert_eq!(linking_number(&b, &a, seed + 1).unwrap().value, ab);
        prop_assert_eq!(linking_number(&rotate(&a, seed), &rotate(&b, seed), seed + 2).unwrap().value, ab);
        let mirror = PolyCurve::from_r3(b.r3().into_iter().map(|p| [p[0], p[1], -p[2]]).collect()).unwrap();
        let mirror_a = PolyCurve::from_r3(a.r3().into_iter().map(|p| [p[0], p[1], -p[2]]).collect()).unwrap();
        prop_assert_eq!(linking_number(&mirror_a, &mirror, seed + 3).unwrap().value, -ab);
    }
}

#[test]
fn torus_ends() {
    let square = |l: f64| build(ImmersionKind::Square { lambda: Complex64::new(l, 0.0) });
    for (imm, want) in [(square(2.0), 4), (square(0.5), -4), (build(ImmersionKind::Rectangular { r: 2.0 }), 0)] {
        let w = writhe_at_infinity(&imm, 0.02, 2048, 1).unwrap();
        assert_eq!(w.value, want, "{:?}", imm.kind);
        assert!(w.checks.iter().all(|(_, v)| *v == want));
        let b = braid_of_end(&imm, 0.02, 2048, 1).unwrap();
        assert_eq!((b.strands, b.algebraic_length), (3, want));
    }
}
