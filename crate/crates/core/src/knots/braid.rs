//! Closed braids read off in cylinder coordinates `(z₁, z₂)`.

use super::{boundary_curve_with, Dim, PolyCurve};
use crate::error::{Error, Result};
use crate::geometry::{end_order, Immersion};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    /// Angle in `[0, 2π)` at which the crossing happens.
    pub position: f64,
    pub strands: (usize, usize),
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BraidDiagram {
    pub strands: u32,
    pub crossings: Vec<Crossing>,
    pub algebraic_length: i64,
    pub writhe: i64,
}

fn unwrap_angles(z1: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(z1.len() + 1);
    let mut acc = z1[0].arg();
    out.push(acc);
    for k in 1..=z1.len() {
        let d = z1[k % z1.len()].arg() - z1[k - 1].arg();
        acc += d - 2.0 * PI * (d / (2.0 * PI)).round();
        out.push(acc);
    }
    out
}

/// `z₂` at angle `phi` (taken modulo the total winding) by linear
/// interpolation in the monotone angle.
fn at_angle(angles: &[f64], z2: &[Complex64], phi: f64) -> Complex64 {
    let n = z2.len();
    let total = angles[n] - angles[0];
    let target = angles[0] + (phi - angles[0]).rem_euclid(total);
    let k = angles.partition_point(|&a| a <= target).clamp(1, n) - 1;
    let s = (target - angles[k]) / (angles[k + 1] - angles[k]);
    z2[k] * (1.0 - s) + z2[(k + 1) % n] * s
}

/// Strand count, crossings and algebraic length of a curve that winds
/// monotonically around the `z₂`-plane, with `z₁ = x₁ + ix₂`, `z₂ = x₃ + ix₄`.
///
/// The curve is first pushed radially onto `S³`. Crossings come from the
/// projection `ℓ = Re(e^{−iα}z₂)` for a random `α`; the strand that is higher
/// in `Im(e^{−iα}z₂)` passes over.
pub fn braid_invariants(curve: &PolyCurve, seed: u64) -> Result<BraidDiagram> {
    if curve.dim != Dim::R4 {
        return Err(Error::NotABraid("braids need a curve in R4".into()));
    }
    let z1: Vec<Complex64> = curve.points.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    // radial projection to S³: strands with equal z₂ but different |z₁| are apart
    let z2: Vec<Complex64> = curve
        .points
        .iter()
        .map(|p| Complex64::new(p[2], p[3]) / p.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let scale = z1.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if z1.iter().any(|z| z.norm() <= 1e-9 * scale) {
        return Err(Error::NotABraid("the curve meets the axis z1 = 0".into()));
    }
    let angles = unwrap_angles(&z1);
    let n = z1.len();
    let total = angles[n] - angles[0];
    let strands = (total / (2.0 * PI)).round();
    if strands < 1.0 || (total - 2.0 * PI * strands).abs() > 1e-6 {
        return Err(Error::NotABraid(format!("arg z1 winds {total} radians")));
    }
    // the angle must increase after a 5-point moving average of the increments
    let inc: Vec<f64> = (0..n).map(|k| angles[k + 1] - angles[k]).collect();
    for k in 0..n {
        let avg: f64 = (0..5).map(|j| inc[(k + n + j - 2) % n]).sum::<f64>() / 5.0;
        if avg <= 0.0 {
            return Err(Error::NotABraid(format!("arg z1 decreases near sample {k}")));
        }
    }
    if inc.iter().any(|&d| d <= 0.0) {
        return Err(Error::NotABraid("arg z1 is not monotone".into()));
    }
    let strands = strands as usize;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rot = Complex64::from_polar(1.0, -2.0 * PI * rng.random::<f64>());
    // a random phase keeps the grid off angles fixed by symmetries of the curve
    let phase: f64 = rng.random();
    let m = n.max(64);
    let positions: Vec<Vec<Complex64>> = (0..=m)
        .map(|j| {
            let psi = angles[0] + 2.0 * PI * (j as f64 + phase) / m as f64;
            (0..strands)
                .map(|k| rot * at_angle(&angles, &z2, psi + 2.0 * PI * k as f64))
                .collect()
        })
        .collect();
    let mut crossings = Vec::new();
    for j in 0..m {
        let (p, q) = (&positions[j], &positions[j + 1]);
        for a in 0..strands {
            for b in a + 1..strands {
                let before = p[a].re - p[b].re;
                let after = q[a].re - q[b].re;
                if before == 0.0 || after == 0.0 {
                    return Err(Error::Degenerate("strands meet in the braid projection".into()));
                }
                if before.signum() == after.signum() {
                    continue;
                }
                let s = before / (before - after);
                let ha = p[a].im + s * (q[a].im - p[a].im);
                let hb = p[b].im + s * (q[b].im - p[b].im);
                if ha == hb {
                    return Err(Error::Degenerate("strands intersect in z2".into()));
                }
                // oriented so that the algebraic length is the linking number
                // with a push-off along the axis
                let sign = (before - after).signum() * (ha - hb).signum();
                crossings.push(Crossing {
                    position: (2.0 * PI * (j as f64 + phase + s) / m as f64).rem_euclid(2.0 * PI),
                    strands: (a, b),
                    sign: sign as i8,
                });
            }
        }
    }
    let algebraic_length = crossings.iter().map(|c| c.sign as i64).sum();
    Ok(BraidDiagram {
        strands: strands as u32,
        crossings,
        algebraic_length,
        writhe: algebraic_length,
    })
}

/// The braid of the end at domain radius `r`, in coordinates aligned with the
/// asymptotic tangent plane (`z₁`) and normal plane (`z₂`).
pub fn braid_of_end(imm: &Immersion, r: f64, m: usize, seed: u64) -> Result<BraidDiagram> {
    let end = end_order(imm)?;
    let k = boundary_curve_with(imm, &end, r, m)?;
    let [t1, t2] = end.tangent_plane;
    let [n1, mut n2] = end.normal_plane;
    // crossing signs are only meaningful in a positively oriented frame
    let frame = nalgebra::Matrix4::from_columns(&[t1, t2, n1, n2].map(nalgebra::Vector4::from));
    if frame.determinant() < 0.0 {
        n2 = n2.map(|x| -x);
    }
    let dot = |a: &[f64; 4], b: &[f64; 4]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let aligned = k.map(Dim::R4, |p| [dot(p, &t1), dot(p, &t2), dot(p, &n1), dot(p, &n2)])?;
    // conjugating both planes keeps the orientation of R⁴ and makes z₁ wind
    // positively
    let z1: Vec<Complex64> = aligned.points.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    let winding = unwrap_angles(&z1);
    if winding[winding.len() - 1] < winding[0] {
        let flipped = aligned.map(Dim::R4, |p| [p[0], -p[1], p[2], -p[3]])?;
        return braid_invariants(&flipped, seed);
    }
    braid_invariants(&aligned, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus_knot(m: usize) -> PolyCurve {
        // (z³, z²) on |z| = 1
        let pts = (0..m)
            .map(|k| {
                let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
                let (a, b) = (z.powi(3), z.powi(2));
                [a.re, a.im, b.re, b.im]
            })
            .collect();
        PolyCurve::new(Dim::R4, pts).unwrap()
    }

    #[test]
    fn trefoil_braid() {
        let d = braid_invariants(&torus_knot(600), 4).unwrap();
        assert_eq!(d.strands, 3);
        assert_eq!(d.algebraic_length.abs(), 4);
        assert_eq!(d.crossings.len(), 4);
    }

    #[test]
    fn plane_is_trivial_braid() {
        let pts = (0..64)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 64.0;
                [t.cos(), t.sin(), 0.3, -0.2]
            })
            .collect();
        let d = braid_invariants(&PolyCurve::new(Dim::R4, pts).unwrap(), 1).unwrap();
        assert_eq!((d.strands, d.algebraic_length), (1, 0));
    }

    #[test]
    fn backwards_curve_is_not_a_braid() {
        let pts: Vec<[f64; 4]> = torus_knot(300).points.into_iter().rev().collect();
        let c = PolyCurve::new(Dim::R4, pts).unwrap();
        assert!(matches!(braid_invariants(&c, 1), Err(Error::NotABraid(_))));
    }
}
