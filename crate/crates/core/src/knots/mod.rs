//! Links and braids at infinity of a single end.

mod braid;
mod linking;

pub use braid::{braid_invariants, braid_of_end, BraidDiagram, Crossing};
pub use linking::{gauss_linking, linking_number, random_rotation, Linking};

use crate::error::{Error, Result};
use crate::geometry::{dist4, end_order, EndReport, Immersion};
use nalgebra::Vector4;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dim {
    R3,
    R4,
}

/// A closed polygon; the last point connects back to the first. Points of an
/// `R3` curve keep a zero fourth coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyCurve {
    pub dim: Dim,
    pub points: Vec<[f64; 4]>,
}

impl PolyCurve {
    pub fn new(dim: Dim, points: Vec<[f64; 4]>) -> Result<Self> {
        if points.len() < 16 {
            return Err(Error::Domain(format!("a curve needs at least 16 points, got {}", points.len())));
        }
        if points.iter().any(|p| p.iter().any(|x| !x.is_finite())) {
            return Err(Error::Domain("curve has non-finite points".into()));
        }
        if dim == Dim::R3 && points.iter().any(|p| p[3] != 0.0) {
            return Err(Error::Domain("an R3 curve must have zero fourth coordinates".into()));
        }
        let n = points.len();
        for i in 0..n {
            if points[i] == points[(i + 1) % n] {
                return Err(Error::Degenerate(format!("consecutive points {i} and {} coincide", (i + 1) % n)));
            }
        }
        Ok(PolyCurve { dim, points })
    }

    pub fn from_r3(points: Vec<[f64; 3]>) -> Result<Self> {
        Self::new(Dim::R3, points.into_iter().map(|p| [p[0], p[1], p[2], 0.0]).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn r3(&self) -> Vec<[f64; 3]> {
        self.points.iter().map(|p| [p[0], p[1], p[2]]).collect()
    }

    pub fn diameter(&self) -> f64 {
        let mut lo = [f64::INFINITY; 4];
        let mut hi = [f64::NEG_INFINITY; 4];
        for p in &self.points {
            for k in 0..4 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        dist4(&lo, &hi)
    }

    /// Largest distance from a vertex of one curve to the polygon of the
    /// other, symmetrised.
    pub fn hausdorff(&self, other: &PolyCurve) -> f64 {
        let one = |a: &PolyCurve, b: &PolyCurve| {
            let n = b.points.len();
            a.points
                .par_iter()
                .map(|p| {
                    (0..n)
                        .map(|i| point_segment_distance(p, &b.points[i], &b.points[(i + 1) % n]))
                        .fold(f64::INFINITY, f64::min)
                })
                .reduce(|| 0.0, f64::max)
        };
        one(self, other).max(one(other, self))
    }

    /// Each point mapped through `f`.
    pub fn map(&self, dim: Dim, f: impl Fn(&[f64; 4]) -> [f64; 4]) -> Result<Self> {
        Self::new(dim, self.points.iter().map(f).collect())
    }
}

fn point_segment_distance(p: &[f64; 4], a: &[f64; 4], b: &[f64; 4]) -> f64 {
    let d: Vec<f64> = (0..4).map(|k| b[k] - a[k]).collect();
    let len2: f64 = d.iter().map(|x| x * x).sum();
    let t = if len2 > 0.0 {
        ((0..4).map(|k| (p[k] - a[k]) * d[k]).sum::<f64>() / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q = [0, 1, 2, 3].map(|k| a[k] + t * d[k]);
    dist4(p, &q)
}

/// Domain circle traversed so that the image winds positively at infinity:
/// clockwise around the puncture of a torus, counterclockwise on the plane.
fn domain_circle(imm: &Immersion, r: f64, m: usize) -> Vec<Complex64> {
    let sign = if imm.is_torus() { -1.0 } else { 1.0 };
    (0..m)
        .map(|k| Complex64::from_polar(r, sign * 2.0 * PI * k as f64 / m as f64))
        .collect()
}

/// Fourier fit of the frequency-`n` part of `points`.
fn leading_part(points: &[[f64; 4]], n: u32) -> Vec<[f64; 4]> {
    let m = points.len();
    let mut c = [Complex64::new(0.0, 0.0); 4];
    for (k, p) in points.iter().enumerate() {
        let e = Complex64::from_polar(1.0, -2.0 * PI * (n as usize * k) as f64 / m as f64);
        for j in 0..4 {
            c[j] += e * p[j];
        }
    }
    (0..m)
        .map(|k| {
            let e = Complex64::from_polar(1.0, 2.0 * PI * (n as usize * k) as f64 / m as f64);
            [0, 1, 2, 3].map(|j| 2.0 * (c[j] * e).re / m as f64)
        })
        .collect()
}

fn project(v: &[f64; 4], basis: &[f64; 4]) -> f64 {
    v.iter().zip(basis).map(|(a, b)| a * b).sum()
}

/// Image of the circle of radius `r` around the end: around `z = 0` on a
/// torus, around the origin of the plane.
///
/// The frequency-`N` part of the tangent-plane projection must dominate the
/// rest of that projection by a factor 4 everywhere on the curve.
pub fn boundary_curve(imm: &Immersion, r: f64, m: usize) -> Result<PolyCurve> {
    let end = end_order(imm)?;
    boundary_curve_with(imm, &end, r, m)
}

pub(crate) fn boundary_curve_with(imm: &Immersion, end: &EndReport, r: f64, m: usize) -> Result<PolyCurve> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    if m < 16 {
        return Err(Error::Domain(format!("need at least 16 samples, got {m}")));
    }
    let points: Vec<[f64; 4]> = domain_circle(imm, r, m)
        .into_iter()
        .map(|z| imm.evaluate_near_pole(z))
        .collect::<Result<_>>()?;
    let [t1, t2] = end.tangent_plane;
    let tangent: Vec<[f64; 4]> = points.iter().map(|p| [project(p, &t1), project(p, &t2), 0.0, 0.0]).collect();
    let lead = leading_part(&tangent, end.n);
    let min_lead = lead.iter().map(|l| l[0].hypot(l[1])).fold(f64::INFINITY, f64::min);
    let max_rest = tangent
        .iter()
        .zip(&lead)
        .map(|(p, l)| (p[0] - l[0]).hypot(p[1] - l[1]))
        .fold(0.0, f64::max);
    if !(min_lead >= 4.0 * max_rest) {
        return Err(Error::Asymptotics(format!(
            "at r = {r} the leading term ({min_lead:.3e}) does not dominate the remainder ({max_rest:.3e}) by 4x"
        )));
    }
    PolyCurve::new(Dim::R4, points)
}

/// Orthonormal basis `b₁, b₂, b₃` of the hyperplane orthogonal to the unit
/// vector `p`, oriented like `e₁, e₂, e₃` against `e₄`:
/// `det(p, b₁, b₂, b₃) = det(e₄, e₁, e₂, e₃) = −1`.
fn orthogonal_basis(p: &Vector4<f64>) -> [Vector4<f64>; 3] {
    let mut basis: Vec<Vector4<f64>> = vec![*p];
    for k in 0..4 {
        let mut v = Vector4::zeros();
        v[k] = 1.0;
        for b in &basis {
            v -= b * b.dot(&v);
        }
        if v.norm() > 0.3 && basis.len() < 4 {
            basis.push(v.normalize());
        }
    }
    let m = nalgebra::Matrix4::from_columns(&[basis[0], basis[1], basis[2], basis[3]]);
    if m.determinant() > 0.0 {
        basis[3] = -basis[3];
    }
    [basis[1], basis[2], basis[3]]
}

/// Radial projection to `S³` followed by stereographic projection from the
/// unit vector `pole`.
pub fn sphere_projection(curve: &PolyCurve, pole: &[f64; 4]) -> Result<PolyCurve> {
    let p = Vector4::from_column_slice(pole).normalize();
    let basis = orthogonal_basis(&p);
    curve.map(Dim::R3, |x| {
        let v = Vector4::from_column_slice(x);
        let u = v / v.norm();
        let d = 1.0 - u.dot(&p);
        [basis[0].dot(&u) / d, basis[1].dot(&u) / d, basis[2].dot(&u) / d, 0.0]
    })
}

/// A point of `S³` at chordal distance more than `0.2` from the radial
/// projections of all given curves.
fn projection_pole(curves: &[&PolyCurve], rng: &mut ChaCha8Rng) -> Result<[f64; 4]> {
    let radial: Vec<Vec<Vector4<f64>>> = curves
        .iter()
        .map(|c| c.points.iter().map(|x| Vector4::from_column_slice(x).normalize()).collect())
        .collect();
    for _ in 0..10_000 {
        let g = Vector4::from_fn(|_, _| {
            // Box–Muller for an isotropic direction
            let (a, b): (f64, f64) = (rng.random(), rng.random());
            (-2.0 * (1.0 - a).ln()).sqrt() * (2.0 * PI * b).cos()
        });
        if g.norm() < 1e-6 {
            continue;
        }
        let p = g.normalize();
        if radial.iter().flatten().all(|u| (u - p).norm() > 0.2) {
            return Ok([p[0], p[1], p[2], p[3]]);
        }
    }
    Err(Error::Degenerate("no projection point found away from the curves".into()))
}

/// The integer result and the checks that back it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WritheReport {
    pub value: i64,
    pub end_order: u32,
    pub r: f64,
    pub samples: usize,
    /// Push-off length of the base computation relative to the curve
    /// diameter.
    pub epsilon: f64,
    /// Linking numbers of each stability variant, labelled.
    pub checks: Vec<(String, i64)>,
    /// Gauss-integral value of the base computation.
    pub gauss: f64,
}

#[derive(Clone, Copy, Debug)]
struct Variant {
    samples: usize,
    eps_factor: f64,
    /// Direction of the push-off inside the normal plane.
    angle: f64,
    pole_seed: u64,
}

/// Smallest distance between points of `k` at least a quarter strand apart in
/// the parameter; every chord of `k` that is not nearly tangent is at least
/// this long.
fn strand_gap(k: &PolyCurve, strands: u32) -> f64 {
    let m = k.len();
    let min_gap = (m / (4 * strands as usize)).max(1);
    (0..m)
        .into_par_iter()
        .map(|i| {
            (i + min_gap..i + m - min_gap + 1)
                .map(|j| dist4(&k.points[i], &k.points[j % m]))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Push-off length `min(1e-3·diameter, 0.1·gap)`.
fn push_off(k: &PolyCurve, strands: u32) -> f64 {
    (EPS * k.diameter()).min(0.1 * strand_gap(k, strands))
}

const EPS: f64 = 1e-3;

const PUSH_ANGLE: f64 = 0.7;

fn writhe_variant(imm: &Immersion, end: &EndReport, r: f64, v: Variant, seed: u64) -> Result<(Linking, f64)> {
    let k = boundary_curve_with(imm, end, r, v.samples)?;
    let [n0, n1] = end.normal_plane;
    let (sin, cos) = v.angle.sin_cos();
    let x = [0, 1, 2, 3].map(|j| cos * n0[j] + sin * n1[j]);
    let eps = v.eps_factor * push_off(&k, end.n);
    let pushed = k.map(Dim::R4, |p| [0, 1, 2, 3].map(|j| p[j] + eps * x[j]))?;
    let mut rng = ChaCha8Rng::seed_from_u64(v.pole_seed);
    let pole = projection_pole(&[&k, &pushed], &mut rng)?;
    let a = sphere_projection(&k, &pole)?;
    let b = sphere_projection(&pushed, &pole)?;
    Ok((linking_number(&a, &b, seed)?, eps / k.diameter()))
}

/// Linking number of the boundary curve with its push-off along a constant
/// vector of the asymptotic normal plane, after projecting both curves from
/// `S³` to `R³`.
///
/// The push-off direction is a generic unit vector of the normal plane rather
/// than a basis vector: a curve with a reflection symmetry has a whole family
/// of chords along the reflected axis, and a translate along that axis always
/// meets the curve.
///
/// The push-off is `10⁻³` of the diameter, capped at a tenth of the distance
/// between different strands. The same number must come out after doubling
/// the samples, halving the push-off, moving the projection point and
/// switching to the other normal direction.
pub fn writhe_at_infinity(imm: &Immersion, r: f64, m: usize, seed: u64) -> Result<WritheReport> {
    let end = end_order(imm)?;
    let base = Variant {
        samples: m,
        eps_factor: 1.0,
        angle: PUSH_ANGLE,
        pole_seed: seed,
    };
    let variants = [
        ("base", base),
        ("samples x2", Variant { samples: 2 * m, ..base }),
        ("epsilon / 2", Variant { eps_factor: 0.5, ..base }),
        ("other projection point", Variant { pole_seed: seed.wrapping_add(0x9e37_79b9), ..base }),
        ("other normal direction", Variant { angle: PUSH_ANGLE + 2.1, ..base }),
    ];
    let mut checks = Vec::new();
    let (mut gauss, mut epsilon) = (f64::NAN, f64::NAN);
    for (name, v) in variants {
        let (lk, eps) = writhe_variant(imm, &end, r, v, seed)?;
        if name == "base" {
            gauss = lk.gauss;
            epsilon = eps;
        }
        checks.push((name.to_string(), lk.value));
    }
    let value = checks[0].1;
    if let Some((name, other)) = checks.iter().find(|(_, v)| *v != value) {
        return Err(Error::Unstable(format!(
            "writhe at infinity changed from {value} to {other} under '{name}'"
        )));
    }
    Ok(WritheReport {
        value,
        end_order: end.n,
        r,
        samples: m,
        epsilon,
        checks,
        gauss,
    })
}

/// `Σ w∞(Eᵢ) + 2 Σ_{i<j} NᵢNⱼσ(i, j)` for ends given as `(w∞, N)`.
pub fn combine_ends(ends: &[(i64, u32)], sigma: &[Vec<i8>]) -> Result<i64> {
    let k = ends.len();
    if sigma.len() != k || sigma.iter().any(|row| row.len() != k) {
        return Err(Error::Domain(format!("sigma must be {k} x {k}")));
    }
    let mut total: i64 = ends.iter().map(|e| e.0).sum();
    for i in 0..k {
        for j in i + 1..k {
            let s = sigma[i][j];
            if s.abs() != 1 || sigma[j][i] != s {
                return Err(Error::Domain(format!("sigma({i}, {j}) must be symmetric and equal to ±1")));
            }
            total += 2 * ends[i].1 as i64 * ends[j].1 as i64 * s as i64;
        }
    }
    Ok(total)
}

/// `|∫K^N/2π − (w∞ − 2D)|` for a signed double-point count `D`.
pub fn normal_bundle_gap(total_kn: f64, writhe: i64, double_points: i64) -> f64 {
    (total_kn / (2.0 * PI) - (writhe - 2 * double_points) as f64).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_examples() {
        assert_eq!(combine_ends(&[(4, 3)], &[vec![1]]).unwrap(), 4);
        let plus = vec![vec![1, 1], vec![1, 1]];
        assert_eq!(combine_ends(&[(0, 1), (0, 1)], &plus).unwrap(), 2);
        let minus = vec![vec![1, -1], vec![-1, 1]];
        assert_eq!(combine_ends(&[(4, 3), (0, 1)], &minus).unwrap(), -2);
        assert!(combine_ends(&[(0, 1), (0, 1)], &[vec![1, 1], vec![-1, 1]]).is_err());
    }

    #[test]
    fn curve_validation() {
        assert!(PolyCurve::new(Dim::R4, vec![[0.0; 4]; 4]).is_err());
        let pts: Vec<[f64; 4]> = (0..16).map(|k| [k as f64, 0.0, 0.0, 0.0]).collect();
        assert!(PolyCurve::new(Dim::R4, pts.clone()).is_ok());
        let mut dup = pts;
        dup[3] = dup[2];
        assert!(PolyCurve::new(Dim::R4, dup).is_err());
    }

    #[test]
    fn stereographic_keeps_equator_on_unit_sphere() {
        let pts: Vec<[f64; 4]> = (0..32)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 32.0;
                [3.0 * t.cos(), 3.0 * t.sin(), 0.0, 0.0]
            })
            .collect();
        let c = PolyCurve::new(Dim::R4, pts).unwrap();
        let p = sphere_projection(&c, &[0.0, 0.0, 0.0, 1.0]).unwrap();
        for q in &p.points {
            assert!((q[0].hypot(q[1]).hypot(q[2]) - 1.0).abs() < 1e-12);
        }
    }
}
