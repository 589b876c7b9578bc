//! Linking numbers of polygons in `R³`.

use super::PolyCurve;
use crate::error::{Error, Result};
use nalgebra::{Matrix3, Quaternion, UnitQuaternion, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Linking {
    pub value: i64,
    /// Half the signed crossing count of the projection.
    pub crossings: f64,
    /// The Gauss double integral, evaluated exactly for polygons.
    pub gauss: f64,
    pub min_distance: f64,
    /// Rotations tried before the projection was generic.
    pub attempts: u32,
}

/// Uniformly distributed rotation (Shoemake's quaternion construction).
pub fn random_rotation(rng: &mut ChaCha8Rng) -> Matrix3<f64> {
    let (u1, u2, u3): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let q = Quaternion::new(
        b * (2.0 * PI * u3).cos(),
        a * (2.0 * PI * u2).sin(),
        a * (2.0 * PI * u2).cos(),
        b * (2.0 * PI * u3).sin(),
    );
    UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner()
}

fn vecs(c: &PolyCurve) -> Vec<Vector3<f64>> {
    c.points.iter().map(|p| Vector3::new(p[0], p[1], p[2])).collect()
}

fn segments(p: &[Vector3<f64>]) -> impl Iterator<Item = (Vector3<f64>, Vector3<f64>)> + '_ {
    (0..p.len()).map(move |i| (p[i], p[(i + 1) % p.len()]))
}

/// Closest distance between segments `[p0, p1]` and `[q0, q1]`.
fn segment_distance(p0: Vector3<f64>, p1: Vector3<f64>, q0: Vector3<f64>, q1: Vector3<f64>) -> f64 {
    let (d1, d2, r) = (p1 - p0, q1 - q0, p0 - q0);
    let (a, e, f) = (d1.dot(&d1), d2.dot(&d2), d2.dot(&r));
    let c = d1.dot(&r);
    let b = d1.dot(&d2);
    let denom = a * e - b * b;
    let mut s = if denom > 1e-300 { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    ((p0 + d1 * s) - (q0 + d2 * t)).norm()
}

/// Signed solid angle subtended by a pair of segments, over `4π`.
fn segment_pair_gauss(p1: Vector3<f64>, p2: Vector3<f64>, p3: Vector3<f64>, p4: Vector3<f64>) -> f64 {
    let (r13, r14, r23, r24) = (p3 - p1, p4 - p1, p3 - p2, p4 - p2);
    let unit = |v: Vector3<f64>| {
        let n = v.norm();
        if n > 0.0 {
            Some(v / n)
        } else {
            None
        }
    };
    let (Some(n1), Some(n2), Some(n3), Some(n4)) = (
        unit(r13.cross(&r14)),
        unit(r14.cross(&r24)),
        unit(r24.cross(&r23)),
        unit(r23.cross(&r13)),
    ) else {
        return 0.0;
    };
    let asin = |x: f64| x.clamp(-1.0, 1.0).asin();
    let omega = asin(n1.dot(&n2)) + asin(n2.dot(&n3)) + asin(n3.dot(&n4)) + asin(n4.dot(&n1));
    let sign = (p4 - p3).cross(&(p2 - p1)).dot(&r13);
    if sign == 0.0 {
        return 0.0;
    }
    omega * sign.signum() / (4.0 * PI)
}

/// `(1/4π) ∮∮ (r₁ − r₂)·(dr₁ × dr₂)/|r₁ − r₂|³` summed exactly over segment
/// pairs, with the minimum segment distance.
pub fn gauss_linking(c1: &PolyCurve, c2: &PolyCurve) -> (f64, f64) {
    let (a, b) = (vecs(c1), vecs(c2));
    segments(&a)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(p1, p2)| {
            let mut acc = 0.0;
            let mut dmin = f64::INFINITY;
            for (p3, p4) in segments(&b) {
                acc += segment_pair_gauss(p1, p2, p3, p4);
                dmin = dmin.min(segment_distance(p1, p2, p3, p4));
            }
            (acc, dmin)
        })
        .reduce(|| (0.0, f64::INFINITY), |x, y| (x.0 + y.0, x.1.min(y.1)))
}

/// Half the signed crossing count between the projections of `a` and `b`
/// onto the `xy`-plane, or `None` if the projection is not generic.
fn crossing_count(a: &[Vector3<f64>], b: &[Vector3<f64>]) -> Option<f64> {
    const EDGE: f64 = 1e-9;
    let sb: Vec<_> = segments(b).collect();
    let partial: Option<Vec<i64>> = segments(a)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(a0, a1)| {
            let da = a1 - a0;
            let (axmin, axmax) = (a0.x.min(a1.x), a0.x.max(a1.x));
            let (aymin, aymax) = (a0.y.min(a1.y), a0.y.max(a1.y));
            let mut total = 0;
            for &(b0, b1) in &sb {
                if b0.x.max(b1.x) < axmin || b0.x.min(b1.x) > axmax || b0.y.max(b1.y) < aymin || b0.y.min(b1.y) > aymax {
                    continue;
                }
                let db = b1 - b0;
                let det = da.x * db.y - da.y * db.x;
                let w = b0 - a0;
                let scale = da.xy().norm() * db.xy().norm();
                if det.abs() <= 1e-12 * scale {
                    // parallel in projection: generic only if the lines are apart
                    if (w.x * da.y - w.y * da.x).abs() <= 1e-12 * scale.max(1e-300) {
                        return None;
                    }
                    continue;
                }
                let s = (w.x * db.y - w.y * db.x) / det;
                let t = (w.x * da.y - w.y * da.x) / det;
                if !(-EDGE..=1.0 + EDGE).contains(&s) || !(-EDGE..=1.0 + EDGE).contains(&t) {
                    continue;
                }
                if s.abs() <= EDGE || (s - 1.0).abs() <= EDGE || t.abs() <= EDGE || (t - 1.0).abs() <= EDGE {
                    return None;
                }
                let za = a0.z + s * da.z;
                let zb = b0.z + t * db.z;
                if (za - zb).abs() <= 1e-12 * (za.abs() + zb.abs() + 1.0) {
                    return None;
                }
                // positive crossing: (over × under)·ẑ > 0
                let sign = if za > zb { det.signum() } else { -det.signum() };
                total += sign as i64;
            }
            Some(total)
        })
        .collect();
    partial.map(|v| v.iter().sum::<i64>() as f64 / 2.0)
}

/// Linking number from the crossings of a random projection, confirmed by
/// the Gauss integral to within `0.1`.
pub fn linking_number(c1: &PolyCurve, c2: &PolyCurve, seed: u64) -> Result<Linking> {
    let diam = c1.diameter().max(c2.diameter());
    let (gauss, min_distance) = gauss_linking(c1, c2);
    let threshold = 1e-6 * diam;
    if !(min_distance >= threshold) {
        return Err(Error::Proximity {
            distance: min_distance,
            threshold,
        });
    }
    let (a, b) = (vecs(c1), vecs(c2));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=20 {
        let rot = random_rotation(&mut rng);
        let ra: Vec<_> = a.iter().map(|p| rot * p).collect();
        let rb: Vec<_> = b.iter().map(|p| rot * p).collect();
        let Some(crossings) = crossing_count(&ra, &rb) else { continue };
        let value = crossings.round() as i64;
        if (crossings - value as f64).abs() > 1e-9 || (gauss - crossings).abs() >= 0.1 {
            return Err(Error::Unstable(format!(
                "crossing count {crossings} and Gauss integral {gauss} disagree"
            )));
        }
        return Ok(Linking {
            value,
            crossings,
            gauss,
            min_distance,
            attempts: attempt,
        });
    }
    Err(Error::Degenerate("no generic projection after 20 rotations".into()))
}
