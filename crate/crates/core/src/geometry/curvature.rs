//! Degrees of the Gauss maps and the total curvatures they determine.

use super::{end_order, Coordinates, Immersion};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which Gauss map: `γ₊ = g′/f′` or `γ₋ = −h′/f′`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sheet {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeEstimate {
    pub d_plus: f64,
    pub d_minus: f64,
    /// Grid size (torus) or radial node count (plane) of the last pass.
    pub resolution: usize,
    /// Change between the last two passes.
    pub last_change: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub d_plus: f64,
    pub d_minus: f64,
    /// `−2π(d₊ + d₋)`.
    pub total_kt: f64,
    /// `−2π(d₊ − d₋)`.
    pub total_kn: f64,
    /// `2π(−N + χ)` for a single end of order `N`.
    pub jorge_meeks: f64,
    pub end_order_n: u32,
    pub chi: i32,
}

impl CurvatureReport {
    /// `|total_kt − jorge_meeks|`.
    pub fn jorge_meeks_gap(&self) -> f64 {
        (self.total_kt - self.jorge_meeks).abs()
    }
}

/// Numerator and denominator of the Gauss map and their derivatives.
fn gauss_pair(imm: &Immersion, z: Complex64, sheet: Sheet) -> Option<[Complex64; 4]> {
    let j = imm.jet_impl(z, false).ok()?;
    let (n, n1) = match sheet {
        Sheet::Plus => (j.d1[2], j.d2[2]),
        Sheet::Minus => (-j.d1[3], -j.d2[3]),
    };
    Some([n, n1, j.d1[1], j.d2[1]])
}

/// `|N′D − ND′|² / (|N|² + |D|²)²`, the pulled-back spherical area density
/// divided by 4.
fn density(v: [Complex64; 4]) -> f64 {
    let [n, n1, d, d1] = v;
    let s = n.norm_sqr() + d.norm_sqr();
    if !(s > 0.0) || !s.is_finite() {
        return 0.0;
    }
    // rescale first so huge values near a pole do not overflow the square
    let k = s.sqrt();
    let w = (n1 / k) * (d / k) - (n / k) * (d1 / k);
    w.norm_sqr()
}

fn torus_pass(imm: &Immersion, n: usize) -> (f64, f64) {
    let Coordinates::Torus { lattice, .. } = imm.coords else {
        unreachable!()
    };
    let tau = lattice.tau();
    let area = lattice.im_tau() / (n * n) as f64;
    let (p, m) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = (0.0, 0.0);
            for j in 0..n {
                let a = (i as f64 + 0.5) / n as f64 - 0.5;
                let b = (j as f64 + 0.5) / n as f64 - 0.5;
                let z = Complex64::new(a, 0.0) + tau * b;
                if let Some(v) = gauss_pair(imm, z, Sheet::Plus) {
                    acc.0 += density(v);
                }
                if let Some(v) = gauss_pair(imm, z, Sheet::Minus) {
                    acc.1 += density(v);
                }
            }
            acc
        })
        .reduce(|| (0.0, 0.0), |x, y| (x.0 + y.0, x.1 + y.1));
    (p * area / PI, m * area / PI)
}

/// Whole plane through `r = tan φ`, midpoint rule in `φ` and `θ`.
fn planar_pass(imm: &Immersion, n: usize) -> (f64, f64) {
    let nt = 2 * n;
    let dphi = 0.5 * PI / n as f64;
    let dtheta = 2.0 * PI / nt as f64;
    let (p, m) = (0..n)
        .into_par_iter()
        .map(|i| {
            let phi = (i as f64 + 0.5) * dphi;
            let r = phi.tan();
            let jac = r * (1.0 + r * r) * dphi * dtheta;
            let mut acc = (0.0, 0.0);
            for j in 0..nt {
                let z = Complex64::from_polar(r, (j as f64 + 0.5) * dtheta);
                if let Some(v) = gauss_pair(imm, z, Sheet::Plus) {
                    acc.0 += density(v) * jac;
                }
                if let Some(v) = gauss_pair(imm, z, Sheet::Minus) {
                    acc.1 += density(v) * jac;
                }
            }
            acc
        })
        .reduce(|| (0.0, 0.0), |x, y| (x.0 + y.0, x.1 + y.1));
    (p / PI, m / PI)
}

/// `d± = (1/π)∫ |N′D − ND′|²/(|N|² + |D|²)² dA`, refined by doubling until
/// successive passes agree to `1e-6`.
pub fn degrees(imm: &Immersion) -> Result<DegreeEstimate> {
    let (start, stop) = if imm.is_torus() { (32, 256) } else { (64, 1024) };
    let pass = |n| {
        if imm.is_torus() {
            torus_pass(imm, n)
        } else {
            planar_pass(imm, n)
        }
    };
    let mut n = start;
    let mut prev = pass(n);
    let mut change = f64::INFINITY;
    while n < stop {
        n *= 2;
        let cur = pass(n);
        change = (cur.0 - prev.0).abs().max((cur.1 - prev.1).abs());
        prev = cur;
        if change < 1e-6 {
            break;
        }
    }
    let est = DegreeEstimate {
        d_plus: prev.0,
        d_minus: prev.1,
        resolution: n,
        last_change: change,
    };
    for (name, d) in [("d_plus", est.d_plus), ("d_minus", est.d_minus)] {
        if !d.is_finite() || (d - d.round()).abs() > 0.01 {
            return Err(Error::Resolution(format!(
                "{name} = {d} is not within 0.01 of an integer at resolution {n}"
            )));
        }
    }
    Ok(est)
}

/// Zeros and poles of `γ − w₀` found by cell windings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreimageCount {
    pub sheet: Sheet,
    #[serde(with = "crate::serde_complex")]
    pub w0: Complex64,
    pub zeros: i64,
    pub poles: i64,
}

impl PreimageCount {
    /// The number of preimages of `w₀`.
    pub fn degree(&self) -> i64 {
        self.zeros
    }
}

/// Sums the windings of `arg((N − w₀D)·D̄)` around the cells of an `m × m`
/// grid over a fundamental domain (torus) or the square `[−L, L]²` (plane).
pub fn preimage_count(imm: &Immersion, sheet: Sheet, w0: Complex64, m: usize, half_width: f64) -> Result<PreimageCount> {
    if m < 4 {
        return Err(Error::Domain("preimage_count needs m >= 4".into()));
    }
    const SUB: usize = 16;
    let (origin, e1, e2) = match imm.coords {
        // offset so that no cell corner sits on the lattice
        Coordinates::Torus { lattice, .. } => {
            let off = 0.5 / m as f64 * (0.37 + 0.29 * lattice.tau());
            (off, Complex64::new(1.0 / m as f64, 0.0), lattice.tau() / m as f64)
        }
        Coordinates::Planar { .. } => {
            let h = 2.0 * half_width / m as f64;
            (
                Complex64::new(-half_width + 0.013 * h, -half_width + 0.029 * h),
                Complex64::new(h, 0.0),
                Complex64::new(0.0, h),
            )
        }
    };
    let phase = |z: Complex64| -> Result<f64> {
        let v = gauss_pair(imm, z, sheet).ok_or_else(|| Error::Domain(format!("gauss map undefined at {z}")))?;
        let g = (v[0] - w0 * v[2]) * v[2].conj();
        if !(g.norm() > 0.0) || !g.norm().is_finite() {
            return Err(Error::Resolution(format!("winding path passes through a zero or pole at {z}")));
        }
        Ok(g.arg())
    };
    // phases along every horizontal and vertical grid edge
    let edge = |start: Complex64, step: Complex64| -> Result<f64> {
        let mut total = 0.0;
        let mut prev = phase(start)?;
        for k in 1..=SUB {
            let cur = phase(start + step * (k as f64 / SUB as f64))?;
            let mut d = cur - prev;
            d -= 2.0 * PI * (d / (2.0 * PI)).round();
            total += d;
            prev = cur;
        }
        Ok(total)
    };
    let corner = |i: usize, j: usize| origin + e1 * i as f64 + e2 * j as f64;
    let horiz: Vec<Vec<f64>> = (0..=m)
        .into_par_iter()
        .map(|j| (0..m).map(|i| edge(corner(i, j), e1)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let vert: Vec<Vec<f64>> = (0..=m)
        .into_par_iter()
        .map(|i| (0..m).map(|j| edge(corner(i, j), e2)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let (mut zeros, mut poles) = (0, 0);
    for i in 0..m {
        for j in 0..m {
            let w = horiz[j][i] + vert[i + 1][j] - horiz[j + 1][i] - vert[i][j];
            let k = (w / (2.0 * PI)).round() as i64;
            if (w - 2.0 * PI * k as f64).abs() > 0.5 {
                return Err(Error::Resolution(format!("cell ({i}, {j}) winding {w} is not a multiple of 2π")));
            }
            if k > 0 {
                zeros += k;
            } else {
                poles -= k;
            }
        }
    }
    Ok(PreimageCount { sheet, w0, zeros, poles })
}

pub fn curvature_report(imm: &Immersion) -> Result<CurvatureReport> {
    let deg = degrees(imm)?;
    let end = end_order(imm)?;
    let chi = if imm.is_torus() { -1 } else { 1 };
    let (dp, dm) = (deg.d_plus, deg.d_minus);
    Ok(CurvatureReport {
        d_plus: dp,
        d_minus: dm,
        total_kt: -2.0 * PI * (dp + dm),
        total_kn: -2.0 * PI * (dp - dm),
        jorge_meeks: 2.0 * PI * (chi as f64 - end.n as f64),
        end_order_n: end.n,
        chi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_immersion, ImmersionKind};
    use crate::SeriesConfig;

    #[test]
    fn enneper_degrees() {
        let imm = build_immersion(ImmersionKind::Enneper3D, &SeriesConfig::default()).unwrap();
        let d = degrees(&imm).unwrap();
        assert!((d.d_plus - 1.0).abs() < 1e-3 && (d.d_minus - 1.0).abs() < 1e-3, "{d:?}");
    }

    #[test]
    fn density_is_projective() {
        let v = [
            Complex64::new(0.3, 1.0),
            Complex64::new(-2.0, 0.5),
            Complex64::new(1.1, -0.4),
            Complex64::new(0.2, 0.9),
        ];
        // (N, D) → (φN, φD) with φ′ = 0 at the point
        let phi = Complex64::new(3.0, -7.0);
        let w = [v[0] * phi, v[1] * phi, v[2] * phi, v[3] * phi];
        assert!((density(v) - density(w)).abs() < 1e-14);
    }
}
