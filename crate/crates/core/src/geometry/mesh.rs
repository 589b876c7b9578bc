//! Triangle meshes of the immersed surface, export, and a double-point scan.

use super::{dist4, Coordinates, Immersion};
use crate::error::{Error, Result};
use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMesh {
    pub vertices: Vec<[f64; 4]>,
    #[serde(with = "crate::serde_complex::seq")]
    pub params: Vec<Complex64>,
    pub faces: Vec<[usize; 3]>,
    pub n: usize,
    /// Excluded disk around the lattice point (torus), or the half-width of
    /// the sampled square (plane).
    pub radius: f64,
}

impl SurfaceMesh {
    pub fn is_finite(&self) -> bool {
        self.vertices.iter().all(|v| v.iter().all(|x| x.is_finite()))
    }

    /// Longest edge in `R⁴`.
    pub fn max_edge(&self) -> f64 {
        self.faces
            .iter()
            .flat_map(|f| [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])])
            .map(|(a, b)| dist4(&self.vertices[a], &self.vertices[b]))
            .fold(0.0, f64::max)
    }
}

/// `R⁴ → R³` used for OBJ output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Projection {
    /// Forget one coordinate (`0..4`).
    Drop(usize),
    /// Radial projection to `S³`, then stereographic projection from
    /// `(0, 0, 0, 1)`. Shows the surface as seen from infinity.
    Stereographic,
}

impl Projection {
    pub fn apply(&self, x: &[f64; 4]) -> Result<[f64; 3]> {
        match *self {
            Projection::Drop(k) if k < 4 => {
                let mut out = [0.0; 3];
                let mut i = 0;
                for (j, v) in x.iter().enumerate() {
                    if j != k {
                        out[i] = *v;
                        i += 1;
                    }
                }
                Ok(out)
            }
            Projection::Drop(k) => Err(Error::Domain(format!("cannot drop coordinate {k}"))),
            Projection::Stereographic => Ok(stereographic(x)),
        }
    }
}

/// Radial projection to the unit sphere followed by stereographic projection
/// from `(0, 0, 0, 1)`.
pub(crate) fn stereographic(x: &[f64; 4]) -> [f64; 3] {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let u = x.map(|v| v / n);
    let d = 1.0 - u[3];
    [u[0] / d, u[1] / d, u[2] / d]
}

/// `n × n` grid. On a torus it is polar around the lattice point, from the
/// circle of radius `radius` out to the boundary of the centred fundamental
/// parallelogram; on the plane it covers `[−radius, radius]²`.
pub fn sample_mesh(imm: &Immersion, n: usize, radius: f64) -> Result<SurfaceMesh> {
    if n < 8 {
        return Err(Error::Domain(format!("mesh size must be at least 8, got {n}")));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Domain(format!("radius must be positive, got {radius}")));
    }
    let params: Vec<Complex64> = match imm.coords {
        Coordinates::Torus { lattice, .. } => {
            if radius >= 0.25 * lattice.min_period() {
                return Err(Error::Domain(format!(
                    "pole radius {radius} must be below a quarter of the shortest period"
                )));
            }
            let tau = lattice.tau();
            let mut out = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let dir = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
                    // lattice coordinates of the direction: dir = a + bτ
                    let b = dir.im / tau.im;
                    let a = dir.re - b * tau.re;
                    let rho_max = 0.5 / a.abs().max(b.abs());
                    let rho = radius + (rho_max - radius) * i as f64 / (n - 1) as f64;
                    out.push(dir * rho);
                }
            }
            out
        }
        Coordinates::Planar { .. } => {
            let mut out = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let x = -radius + 2.0 * radius * i as f64 / (n - 1) as f64;
                    let y = -radius + 2.0 * radius * j as f64 / (n - 1) as f64;
                    out.push(Complex64::new(x, y));
                }
            }
            out
        }
    };
    let vertices: Vec<[f64; 4]> = params
        .par_iter()
        .map(|&z| imm.evaluate_near_pole(z))
        .collect::<Result<_>>()?;
    let periodic = imm.is_torus();
    let idx = |i: usize, j: usize| i * n + j % n;
    let mut faces = Vec::new();
    for i in 0..n - 1 {
        let jmax = if periodic { n } else { n - 1 };
        for j in 0..jmax {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    Ok(SurfaceMesh {
        vertices,
        params,
        faces,
        n,
        radius,
    })
}

pub fn write_obj<W: Write>(mesh: &SurfaceMesh, projection: Projection, mut out: W) -> Result<()> {
    writeln!(out, "# {} vertices, {} faces", mesh.vertices.len(), mesh.faces.len())?;
    for v in &mesh.vertices {
        let p = projection.apply(v)?;
        writeln!(out, "v {:.17e} {:.17e} {:.17e}", p[0], p[1], p[2])?;
    }
    for f in &mesh.faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}

/// `u,v,x1,x2,x3,x4` per vertex.
pub fn write_csv<W: Write>(mesh: &SurfaceMesh, mut out: W) -> Result<()> {
    writeln!(out, "u,v,x1,x2,x3,x4")?;
    for (z, x) in mesh.params.iter().zip(&mesh.vertices) {
        writeln!(
            out,
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            z.re, z.im, x[0], x[1], x[2], x[3]
        )?;
    }
    Ok(())
}

/// Writes `<stem>.obj` and the sidecar `<stem>.csv`; returns both paths.
pub fn export_mesh(mesh: &SurfaceMesh, projection: Projection, dir: &Path, stem: &str) -> Result<(std::path::PathBuf, std::path::PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let obj = dir.join(format!("{stem}.obj"));
    let csv = dir.join(format!("{stem}.csv"));
    write_obj(mesh, projection, std::io::BufWriter::new(std::fs::File::create(&obj)?))?;
    write_csv(mesh, std::io::BufWriter::new(std::fs::File::create(&csv)?))?;
    Ok((obj, csv))
}

/// Vertex and face counts of an OBJ stream.
pub fn read_obj_counts<R: BufRead>(input: R) -> Result<(usize, usize)> {
    let (mut v, mut f) = (0, 0);
    for line in input.lines() {
        let line = line?;
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let coords: Vec<f64> = it.map(|s| s.parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|e| {
                    Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, e))
                })?;
                if coords.len() != 3 {
                    return Err(Error::Io(std::io::Error::new(
                        std::io::ErrorKind::InvalidData,
                        format!("bad vertex line: {line}"),
                    )));
                }
                v += 1;
            }
            Some("f") => f += 1,
            _ => {}
        }
    }
    Ok((v, f))
}

/// A candidate transverse double point `F(z₁) = F(z₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublePoint {
    #[serde(with = "crate::serde_complex")]
    pub z1: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub z2: Complex64,
    pub point: [f64; 4],
    pub residual: f64,
    /// `|det(F_x(z₁), F_y(z₁), F_x(z₂), F_y(z₂))|` over the product of the
    /// column norms; zero for a tangential contact.
    pub transversality: f64,
    /// Intersection sign of the two oriented sheets, the sign of that
    /// determinant.
    pub sign: i8,
}

fn param_distance(imm: &Immersion, a: Complex64, b: Complex64) -> f64 {
    match imm.lattice() {
        Some(lat) => lat.distance_to_lattice(a - b),
        None => (a - b).norm(),
    }
}

fn newton(imm: &Immersion, mut z1: Complex64, mut z2: Complex64) -> Option<DoublePoint> {
    for _ in 0..40 {
        let (j1, j2) = (imm.jet(z1).ok()?, imm.jet(z2).ok()?);
        let (p1, p2) = (j1.point(), j2.point());
        let g = Vector4::from_fn(|k, _| p1[k] - p2[k]);
        let (fx1, fy1) = j1.tangents();
        let (fx2, fy2) = j2.tangents();
        let jac = Matrix4::from_fn(|r, c| match c {
            0 => fx1[r],
            1 => fy1[r],
            2 => -fx2[r],
            _ => -fy2[r],
        });
        let scale = p1.iter().map(|x| x.abs()).fold(1.0, f64::max);
        if g.norm() <= 1e-11 * scale {
            let cols: f64 = (0..4).map(|c| jac.column(c).norm()).product();
            // the Newton Jacobian negates the last two columns, which leaves
            // the determinant unchanged
            let det = jac.determinant();
            return Some(DoublePoint {
                z1,
                z2,
                point: p1,
                residual: g.norm(),
                transversality: det.abs() / cols.max(1e-300),
                sign: det.signum() as i8,
            });
        }
        let step = jac.lu().solve(&(-g))?;
        z1 += Complex64::new(step[0], step[1]);
        z2 += Complex64::new(step[2], step[3]);
        if !(z1.norm().is_finite() && z2.norm().is_finite()) {
            return None;
        }
    }
    None
}

/// Vertex pairs that are close in `R⁴` but far apart in the domain, refined
/// by Newton's method on `F(z₁) − F(z₂) = 0` and deduplicated.
pub fn self_intersection_scan(imm: &Immersion, mesh: &SurfaceMesh) -> Result<Vec<DoublePoint>> {
    let cell = mesh.max_edge();
    if !(cell > 0.0) || !cell.is_finite() {
        return Err(Error::Degenerate("mesh has no finite edges".into()));
    }
    // domain spacing below which two vertices count as neighbours
    let spacing = mesh
        .faces
        .iter()
        .map(|f| param_distance(imm, mesh.params[f[0]], mesh.params[f[1]]))
        .fold(0.0, f64::max);
    let key = |v: &[f64; 4]| v.map(|x| (x / cell).floor() as i64);
    let mut grid: HashMap<[i64; 4], Vec<usize>> = HashMap::new();
    for (i, v) in mesh.vertices.iter().enumerate() {
        grid.entry(key(v)).or_default().push(i);
    }
    let mut candidates = Vec::new();
    for (i, v) in mesh.vertices.iter().enumerate() {
        let k = key(v);
        for d in 0..81usize {
            let off = [d % 3, d / 3 % 3, d / 9 % 3, d / 27 % 3].map(|o| o as i64 - 1);
            let nk = [k[0] + off[0], k[1] + off[1], k[2] + off[2], k[3] + off[3]];
            let Some(bucket) = grid.get(&nk) else { continue };
            for &j in bucket {
                if j <= i {
                    continue;
                }
                let dd = dist4(v, &mesh.vertices[j]);
                if dd < cell && param_distance(imm, mesh.params[i], mesh.params[j]) > 4.0 * spacing {
                    candidates.push((dd, i, j));
                }
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut found: Vec<DoublePoint> = Vec::new();
    let near = |dp: &DoublePoint, a: Complex64, b: Complex64, tol: f64| {
        (param_distance(imm, dp.z1, a) < tol && param_distance(imm, dp.z2, b) < tol)
            || (param_distance(imm, dp.z1, b) < tol && param_distance(imm, dp.z2, a) < tol)
    };
    for (_, i, j) in candidates.into_iter().take(4000) {
        let (a, b) = (mesh.params[i], mesh.params[j]);
        if found.iter().any(|dp| near(dp, a, b, 3.0 * spacing)) {
            continue;
        }
        let Some(dp) = newton(imm, a, b) else { continue };
        if param_distance(imm, dp.z1, dp.z2) <= 2.0 * spacing {
            continue;
        }
        if !found.iter().any(|f| near(f, dp.z1, dp.z2, 1e-6)) {
            found.push(dp);
        }
    }
    Ok(found)
}
