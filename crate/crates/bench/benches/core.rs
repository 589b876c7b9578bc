use criterion::{criterion_group, criterion_main, Criterion};
use minitori::certify::{regime_bound, Regime};
use minitori::elliptic::{general_invariants, rectangular_invariants};
use minitori::knots::{linking_number, PolyCurve};
use minitori::solver::solve_rectangular;
use minitori::{Complex64, Lattice, SeriesConfig};
use std::f64::consts::PI;
use std::hint::black_box;

fn invariants(c: &mut Criterion) {
    let cfg = SeriesConfig::default();
    c.bench_function("rectangular_invariants R=2", |b| {
        b.iter(|| rectangular_invariants(black_box(2.0), &cfg).unwrap())
    });
    let tau = Lattice::equianharmonic().tau();
    c.bench_function("general_invariants equianharmonic", |b| {
        b.iter(|| general_invariants(black_box(tau), &cfg).unwrap())
    });
    let tau = Complex64::new(0.3, 1.7);
    c.bench_function("general_invariants 0.3+1.7i", |b| {
        b.iter(|| general_invariants(black_box(tau), &cfg).unwrap())
    });
}

fn solve(c: &mut Criterion) {
    let cfg = SeriesConfig::default();
    c.bench_function("solve_rectangular R=2", |b| {
        b.iter(|| {
            let inv = rectangular_invariants(black_box(2.0), &cfg).unwrap();
            solve_rectangular(2.0, &inv).unwrap()
        })
    });
}

fn certify(c: &mut Criterion) {
    c.bench_function("regime_bound middle k=5", |b| {
        b.iter(|| regime_bound(black_box(Regime::Middle { k: 5 })).unwrap())
    });
}

fn hopf_pair(m: usize) -> (PolyCurve, PolyCurve) {
    let circle = |shift: [f64; 3], plane: usize| {
        (0..m)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / m as f64;
                let (s, c) = t.sin_cos();
                let mut p = shift;
                if plane == 0 {
                    p[0] += c;
                    p[1] += s;
                } else {
                    p[0] += c;
                    p[2] += s;
                }
                p
            })
            .collect::<Vec<_>>()
    };
    (
        PolyCurve::from_r3(circle([0.0; 3], 0)).unwrap(),
        PolyCurve::from_r3(circle([1.0, 0.0, 0.0], 1)).unwrap(),
    )
}

fn linking(c: &mut Criterion) {
    let (a, b) = hopf_pair(400);
    c.bench_function("linking_number hopf 400", |bch| bch.iter(|| linking_number(&a, &b, 0).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = invariants, solve, certify, linking
}
criterion_main!(benches);
