//! Growth orders of the single end.

use super::Immersion;
use crate::error::{Error, Result};
use nalgebra::{Matrix2, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const SAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndReport {
    /// Leading order `N`.
    pub n: u32,
    pub slope: f64,
    /// Domain radii, ordered from far to near the end.
    pub radii: Vec<f64>,
    /// RMS of `‖F‖` on each circle.
    pub rms: Vec<f64>,
    /// Orthonormal basis of the plane carrying the leading term.
    pub tangent_plane: [[f64; 4]; 2],
    /// Its orthogonal complement.
    pub normal_plane: [[f64; 4]; 2],
    /// Orders of the two principal normal components; `None` for a component
    /// that vanishes identically.
    pub secondary: [Option<u32>; 2],
    pub secondary_slopes: [f64; 2],
}

/// Radii approaching the end: around `z = 0` on a torus, outward on the plane.
fn radii(imm: &Immersion) -> [f64; 3] {
    if imm.is_torus() {
        [0.04, 0.02, 0.01]
    } else {
        [50.0, 100.0, 200.0]
    }
}

/// `x = ln(growth variable)` per radius.
fn log_scale(imm: &Immersion, r: f64) -> f64 {
    if imm.is_torus() {
        -r.ln()
    } else {
        r.ln()
    }
}

fn circle(imm: &Immersion, r: f64) -> Result<Vec<[f64; 4]>> {
    (0..SAMPLES)
        .map(|k| {
            let z = Complex64::from_polar(r, 2.0 * PI * k as f64 / SAMPLES as f64);
            imm.evaluate_near_pole(z)
        })
        .collect()
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn rms(points: &[[f64; 4]]) -> f64 {
    (points.iter().map(|p| p.iter().map(|x| x * x).sum::<f64>()).sum::<f64>() / points.len() as f64).sqrt()
}

/// Completes `t1, t2` to an orthonormal basis of `R⁴`, returning the two new
/// vectors.
fn complement(t: [Vector4<f64>; 2]) -> [Vector4<f64>; 2] {
    let mut basis: Vec<Vector4<f64>> = t.to_vec();
    for k in 0..4 {
        let mut v = Vector4::zeros();
        v[k] = 1.0;
        for b in &basis {
            v -= b * b.dot(&v);
        }
        if v.norm() > 0.3 {
            basis.push(v.normalize());
        }
        if basis.len() == 4 {
            break;
        }
    }
    [basis[2], basis[3]]
}

pub fn end_order(imm: &Immersion) -> Result<EndReport> {
    let radii = radii(imm);
    let circles: Vec<Vec<[f64; 4]>> = radii.iter().map(|&r| circle(imm, r)).collect::<Result<_>>()?;
    let xs: Vec<f64> = radii.iter().map(|&r| log_scale(imm, r)).collect();
    let rms_vals: Vec<f64> = circles.iter().map(|c| rms(c)).collect();
    let ys: Vec<f64> = rms_vals.iter().map(|v| v.ln()).collect();
    let s = slope(&xs, &ys);
    let n = s.round();
    if !s.is_finite() || (s - n).abs() > 0.1 || n < 1.0 {
        return Err(Error::Asymptotics(format!("growth slope {s} is not close to a positive integer")));
    }
    let n_int = n as u32;

    // frequency-N Fourier coefficient of the nearest circle spans the leading plane
    let last = circles.last().unwrap();
    let mut re = Vector4::zeros();
    let mut im = Vector4::zeros();
    for (k, p) in last.iter().enumerate() {
        let th = 2.0 * PI * (n_int as usize * k) as f64 / SAMPLES as f64;
        let v = Vector4::from_column_slice(p);
        re += v * th.cos();
        im += v * th.sin();
    }
    let t1 = re.normalize();
    let t2 = (im - t1 * t1.dot(&im)).normalize();
    let [n1, n2] = complement([t1, t2]);

    // principal normal components on each circle
    let mut eig = Vec::with_capacity(radii.len());
    for c in &circles {
        let proj: Vec<(f64, f64)> = c
            .iter()
            .map(|p| {
                let v = Vector4::from_column_slice(p);
                (v.dot(&n1), v.dot(&n2))
            })
            .collect();
        let m = SAMPLES as f64;
        let (ma, mb) = proj.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0 / m, acc.1 + p.1 / m));
        let mut cov = Matrix2::zeros();
        for &(a, b) in &proj {
            let (a, b) = (a - ma, b - mb);
            cov += Matrix2::new(a * a, a * b, a * b, b * b) / m;
        }
        let e = cov.symmetric_eigenvalues();
        let (hi, lo) = if e[0] >= e[1] { (e[0], e[1]) } else { (e[1], e[0]) };
        eig.push([hi.max(0.0).sqrt(), lo.max(0.0).sqrt()]);
    }
    let mut secondary = [None, None];
    let mut secondary_slopes = [f64::NAN; 2];
    for k in 0..2 {
        let vals: Vec<f64> = eig.iter().map(|e| e[k]).collect();
        let vanishes = vals.iter().zip(&rms_vals).any(|(v, r)| *v <= 1e-9 * r);
        if vanishes {
            continue;
        }
        let ys: Vec<f64> = vals.iter().map(|v| v.ln()).collect();
        let sk = slope(&xs, &ys);
        secondary_slopes[k] = sk;
        if (sk - sk.round()).abs() <= 0.1 && sk.round() >= 1.0 {
            secondary[k] = Some(sk.round() as u32);
        }
    }
    let arr = |v: Vector4<f64>| [v[0], v[1], v[2], v[3]];
    Ok(EndReport {
        n: n_int,
        slope: s,
        radii: radii.to_vec(),
        rms: rms_vals,
        tangent_plane: [arr(t1), arr(t2)],
        normal_plane: [arr(n1), arr(n2)],
        secondary,
        secondary_slopes,
    })
}
