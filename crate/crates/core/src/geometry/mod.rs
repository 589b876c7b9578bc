//! Minimal immersions `F = (e + f̄, g + h̄)` into `R⁴ = C²`.
//!
//! Each of `e, f, g, h` is stored as a coefficient vector, over
//! `{℘, ℘′, ζ, z, 1}` on a torus or over the monomials `1, z, …, z⁵` on the
//! plane, so derivatives and antiderivatives are exact.

mod curvature;
mod ends;
mod mesh;

pub use curvature::{
    curvature_report, degrees, preimage_count, CurvatureReport, DegreeEstimate, PreimageCount, Sheet,
};
pub use ends::{end_order, EndReport};
pub use mesh::{
    export_mesh, read_obj_counts, sample_mesh, self_intersection_scan, write_csv, write_obj, DoublePoint,
    Projection, SurfaceMesh,
};

use crate::elliptic::{rectangular_invariants, Cycle, EllipticInvariants, Lattice, PValues, SeriesConfig, Weierstrass};
use crate::error::{Error, Result};
use crate::solver::{solve_rectangular, SquareFamily, TypeIIParams};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ImmersionKind {
    /// Square-lattice family with parameter `λ`.
    Square {
        #[serde(with = "crate::serde_complex")]
        lambda: Complex64,
    },
    /// Closed-form solution on the rectangle `(1, R·i)`, `R > 1`.
    Rectangular { r: f64 },
    /// Arbitrary Type-II coefficients on a torus.
    TypeII,
    /// `(z³/3 − z̄, (z² + z̄²)/2)`.
    Enneper3D,
    /// `(z³/3 − z̄, λz²/2 + z̄²/(2λ̄))`.
    Enneper4DNodes {
        #[serde(with = "crate::serde_complex")]
        lambda: Complex64,
    },
    /// `(z³/3 − is²z − z̄, (z² + z̄²)/2 + s e^{iπ/4} z − s e^{−iπ/4} z̄)`.
    Enneper4DEmbedded { s: f64 },
    /// `(z⁵/5 − z + z̄, −z³/3 + z̄³/3 + z + z̄)`.
    Quintic,
}

impl ImmersionKind {
    pub fn is_torus(&self) -> bool {
        matches!(
            self,
            ImmersionKind::Square { .. } | ImmersionKind::Rectangular { .. } | ImmersionKind::TypeII
        )
    }
}

/// `c_p ℘ + c_p′ ℘′ + c_ζ ζ + c_z z + c_1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EllipticCoeffs {
    #[serde(with = "crate::serde_complex")]
    pub p: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub p_prime: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub zeta: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub z: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub one: Complex64,
}

impl EllipticCoeffs {
    fn value(&self, v: &PValues, z: Complex64) -> Complex64 {
        self.p * v.p + self.p_prime * v.p_prime + self.zeta * v.zeta + self.z * z + self.one
    }

    /// Uses `ζ′ = −℘` and `℘″ = 6℘² − g₂/2`.
    fn d1(&self, v: &PValues) -> Complex64 {
        self.p * v.p_prime + self.p_prime * v.p_second - self.zeta * v.p + self.z
    }

    /// Uses `℘‴ = 12℘℘′`.
    fn d2(&self, v: &PValues) -> Complex64 {
        self.p * v.p_second + self.p_prime * 12.0 * v.p * v.p_prime - self.zeta * v.p_prime
    }

    /// Antiderivatives of the Type-II derivative data, using `∫℘ = −ζ` and
    /// `∫℘² = ℘′/6 + g₂z/12`.
    fn from_type_ii(p: &TypeIIParams, g2: Complex64) -> [EllipticCoeffs; 4] {
        let e = EllipticCoeffs {
            p: p.b,
            p_prime: p.a / 6.0,
            zeta: -p.c,
            z: p.a * g2 / 12.0 + p.d,
            one: Complex64::default(),
        };
        let f = EllipticCoeffs {
            zeta: Complex64::new(-1.0, 0.0),
            z: p.s,
            ..Default::default()
        };
        let g = EllipticCoeffs {
            p: p.t,
            zeta: -p.u,
            z: p.v,
            ..Default::default()
        };
        let h = EllipticCoeffs {
            p: p.w,
            zeta: -p.y,
            z: p.z,
            ..Default::default()
        };
        [e, f, g, h]
    }
}

/// Polynomial `Σ cₖ zᵏ`, `k = 0..=5`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Poly(#[serde(with = "crate::serde_complex::seq")] pub [Complex64; 6]);

impl Poly {
    fn from_pairs(terms: &[(usize, Complex64)]) -> Self {
        let mut c = [Complex64::default(); 6];
        for &(k, v) in terms {
            c[k] += v;
        }
        Poly(c)
    }

    fn eval(c: &[Complex64], z: Complex64) -> Complex64 {
        c.iter().rev().fold(Complex64::default(), |acc, &a| acc * z + a)
    }

    fn derivative(&self) -> [Complex64; 6] {
        let mut d = [Complex64::default(); 6];
        for k in 1..6 {
            d[k - 1] = self.0[k] * k as f64;
        }
        d
    }

    fn value(&self, z: Complex64) -> Complex64 {
        Self::eval(&self.0, z)
    }

    fn d1(&self, z: Complex64) -> Complex64 {
        Self::eval(&self.derivative(), z)
    }

    fn d2(&self, z: Complex64) -> Complex64 {
        let d = Poly(self.derivative());
        Self::eval(&d.derivative(), z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "domain")]
pub enum Coordinates {
    Torus {
        lattice: Lattice,
        inv: EllipticInvariants,
        cfg: SeriesConfig,
        /// `[e, f, g, h]`.
        efgh: [EllipticCoeffs; 4],
    },
    Planar {
        efgh: [Poly; 4],
    },
}

/// `(e′, f′, g′, h′)` at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadruple {
    #[serde(with = "crate::serde_complex")]
    pub e: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub f: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub g: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub h: Complex64,
}

impl Quadruple {
    fn from_array(a: [Complex64; 4]) -> Self {
        Quadruple {
            e: a[0],
            f: a[1],
            g: a[2],
            h: a[3],
        }
    }

    /// `e′f′ + g′h′`, zero exactly when the immersion is conformal.
    pub fn conformality(&self) -> Complex64 {
        self.e * self.f + self.g * self.h
    }

    pub fn max_abs(&self) -> f64 {
        [self.e, self.f, self.g, self.h].iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Values and first two derivatives of `e, f, g, h` at one point.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Jet {
    pub val: [Complex64; 4],
    pub d1: [Complex64; 4],
    pub d2: [Complex64; 4],
}

impl Jet {
    pub fn point(&self) -> [f64; 4] {
        let a = self.val[0] + self.val[1].conj();
        let b = self.val[2] + self.val[3].conj();
        [a.re, a.im, b.re, b.im]
    }

    /// `∂F/∂x` and `∂F/∂y`.
    pub fn tangents(&self) -> ([f64; 4], [f64; 4]) {
        let i = Complex64::i();
        let fx1 = self.d1[0] + self.d1[1].conj();
        let fx2 = self.d1[2] + self.d1[3].conj();
        let fy1 = i * self.d1[0] + (i * self.d1[1]).conj();
        let fy2 = i * self.d1[2] + (i * self.d1[3]).conj();
        ([fx1.re, fx1.im, fx2.re, fx2.im], [fy1.re, fy1.im, fy2.re, fy2.im])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Immersion {
    pub kind: ImmersionKind,
    pub coords: Coordinates,
}

/// Residuals `∫_γ e′ + (∫_γ f′)‾` and `∫_γ g′ + (∫_γ h′)‾` on both cycles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodResiduals {
    #[serde(with = "crate::serde_complex::seq")]
    pub gamma1: [Complex64; 2],
    #[serde(with = "crate::serde_complex::seq")]
    pub gamma2: [Complex64; 2],
}

impl PeriodResiduals {
    pub fn max_abs(&self) -> f64 {
        self.gamma1
            .iter()
            .chain(self.gamma2.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// A point of the Riemann sphere in homogeneous coordinates `[num : den]`,
/// scaled so the larger entry has modulus one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    #[serde(with = "crate::serde_complex")]
    pub num: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub den: Complex64,
}

impl SpherePoint {
    fn new(num: Complex64, den: Complex64) -> Self {
        let s = num.norm().max(den.norm());
        SpherePoint {
            num: num / s,
            den: den / s,
        }
    }

    pub fn is_infinity(&self, tol: f64) -> bool {
        self.den.norm() <= tol
    }

    pub fn value(&self) -> Option<Complex64> {
        (self.den.norm() > 0.0).then(|| self.num / self.den)
    }

    /// Unit vector in `R³`, with `∞` at `(0, 0, 1)`.
    pub fn to_unit_vector(&self) -> [f64; 3] {
        let (a, b) = (self.num, self.den);
        let w = a * b.conj();
        let n = a.norm_sqr() + b.norm_sqr();
        [2.0 * w.re / n, 2.0 * w.im / n, (a.norm_sqr() - b.norm_sqr()) / n]
    }
}

/// `γ₊ = g′/f′` and `γ₋ = −h′/f′`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussMaps {
    pub plus: SpherePoint,
    pub minus: SpherePoint,
    /// Whether a common zero of numerator and denominator was resolved by
    /// passing to second derivatives.
    pub plus_resolved: bool,
    pub minus_resolved: bool,
}

/// Relative size below which a numerator/denominator pair counts as a common
/// zero.
const COMMON_ZERO: f64 = 1e-9;

impl Immersion {
    /// Any Type-II coefficient set on a given lattice.
    pub fn from_type_ii(
        kind: ImmersionKind,
        params: &TypeIIParams,
        lattice: Lattice,
        inv: EllipticInvariants,
        cfg: SeriesConfig,
    ) -> Result<Self> {
        if !params.is_finite() {
            return Err(Error::Domain("Type-II coefficients must be finite".into()));
        }
        Ok(Immersion {
            kind,
            coords: Coordinates::Torus {
                lattice,
                inv,
                cfg,
                efgh: EllipticCoeffs::from_type_ii(params, inv.g2),
            },
        })
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.coords, Coordinates::Torus { .. })
    }

    pub fn lattice(&self) -> Option<Lattice> {
        match self.coords {
            Coordinates::Torus { lattice, .. } => Some(lattice),
            Coordinates::Planar { .. } => None,
        }
    }

    /// The `℘` context of a torus immersion.
    pub fn weierstrass(&self) -> Option<Weierstrass> {
        match self.coords {
            Coordinates::Torus { lattice, inv, cfg, .. } => Some(Weierstrass::new(lattice, inv, cfg)),
            Coordinates::Planar { .. } => None,
        }
    }

    pub(crate) fn jet_impl(&self, z: Complex64, checked: bool) -> Result<Jet> {
        match &self.coords {
            Coordinates::Torus { efgh, .. } => {
                let wp = self.weierstrass().expect("torus");
                let v = if checked { wp.eval(z)? } else { wp.eval_unchecked(z) };
                Ok(Jet {
                    val: efgh.map(|c| c.value(&v, z)),
                    d1: efgh.map(|c| c.d1(&v)),
                    d2: efgh.map(|c| c.d2(&v)),
                })
            }
            Coordinates::Planar { efgh } => Ok(Jet {
                val: efgh.map(|c| c.value(z)),
                d1: efgh.map(|c| c.d1(z)),
                d2: efgh.map(|c| c.d2(z)),
            }),
        }
    }

    pub(crate) fn jet(&self, z: Complex64) -> Result<Jet> {
        self.jet_impl(z, true)
    }

    /// `F(z) ∈ R⁴`; refuses points within the pole margin on a torus.
    pub fn evaluate(&self, z: Complex64) -> Result<[f64; 4]> {
        Ok(self.jet(z)?.point())
    }

    /// As [`evaluate`](Self::evaluate) without the pole-margin check, for end
    /// asymptotics close to the puncture.
    pub fn evaluate_near_pole(&self, z: Complex64) -> Result<[f64; 4]> {
        if let Some(lat) = self.lattice() {
            if lat.distance_to_lattice(z) == 0.0 {
                return Err(Error::Domain("F is not defined at the lattice points".into()));
            }
        }
        Ok(self.jet_impl(z, false)?.point())
    }

    pub fn derivative_quadruple(&self, z: Complex64) -> Result<Quadruple> {
        Ok(Quadruple::from_array(self.jet(z)?.d1))
    }

    /// `(e″, f″, g″, h″)`.
    pub fn second_derivative_quadruple(&self, z: Complex64) -> Result<Quadruple> {
        Ok(Quadruple::from_array(self.jet(z)?.d2))
    }

    /// `|e′f′ + g′h′| / (1 + max|·|²)` at `z`.
    pub fn conformality_residual(&self, z: Complex64) -> Result<f64> {
        let q = self.derivative_quadruple(z)?;
        Ok(q.conformality().norm() / (1.0 + q.max_abs().powi(2)))
    }

    /// A random parameter away from the poles: uniform in the fundamental
    /// parallelogram (torus) or in the disk of radius 2 (plane).
    pub fn random_point(&self, rng: &mut ChaCha8Rng) -> Complex64 {
        match self.coords {
            Coordinates::Torus { lattice, cfg, .. } => loop {
                let z = Complex64::new(rng.random::<f64>(), 0.0) + lattice.tau() * rng.random::<f64>();
                if lattice.distance_to_lattice(z) >= 2.0 * cfg.pole_margin {
                    return z;
                }
            },
            Coordinates::Planar { .. } => {
                let r = 2.0 * rng.random::<f64>().sqrt();
                Complex64::from_polar(r, 2.0 * PI * rng.random::<f64>())
            }
        }
    }

    /// Largest [`conformality_residual`](Self::conformality_residual) over
    /// `samples` random admissible points.
    pub fn max_conformality_residual(&self, samples: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let z = self.random_point(rng);
            worst = worst.max(self.conformality_residual(z)?);
        }
        Ok(worst)
    }

    pub fn period_residuals(&self) -> Result<PeriodResiduals> {
        let Coordinates::Torus { lattice, cfg, .. } = self.coords else {
            return Err(Error::Domain("period residuals are defined on tori only".into()));
        };
        let mut out = [[Complex64::default(); 2]; 2];
        for (slot, cycle) in [Cycle::Gamma1, Cycle::Gamma2].into_iter().enumerate() {
            let mut ints = [Complex64::default(); 4];
            for (k, int) in ints.iter_mut().enumerate() {
                let f = |z: Complex64| self.jet_impl(z, false).map(|j| j.d1[k]).unwrap_or(Complex64::new(f64::NAN, 0.0));
                *int = crate::elliptic::cycle_integral(f, cycle, &lattice, &cfg)?.value;
            }
            out[slot] = [ints[0] + ints[1].conj(), ints[2] + ints[3].conj()];
        }
        Ok(PeriodResiduals {
            gamma1: out[0],
            gamma2: out[1],
        })
    }

    /// `‖F(z + ω) − F(z)‖` for the period `ω` of `cycle`.
    pub fn translation_defect(&self, z: Complex64, cycle: Cycle) -> Result<f64> {
        let lat = self
            .lattice()
            .ok_or_else(|| Error::Domain("translation defect needs a torus".into()))?;
        let a = self.evaluate(z)?;
        let b = self.evaluate(z + lat.period(cycle))?;
        Ok(dist4(&a, &b))
    }

    /// Largest `|ΔF|` over the four coordinates from 5-point stencils at `h`
    /// and `h/2`, combined as `(4Δ_{h/2} − Δ_h)/3` to cancel the `h²` term.
    pub fn discrete_laplacian(&self, z: Complex64, h: f64) -> Result<f64> {
        let c = self.evaluate(z)?;
        let stencil = |h: f64| -> Result<[f64; 4]> {
            let mut acc = [0.0; 4];
            for d in [Complex64::new(h, 0.0), Complex64::new(-h, 0.0), Complex64::new(0.0, h), Complex64::new(0.0, -h)] {
                let p = self.evaluate(z + d)?;
                for k in 0..4 {
                    acc[k] += p[k] - c[k];
                }
            }
            Ok(acc.map(|a| a / (h * h)))
        };
        let (coarse, fine) = (stencil(h)?, stencil(0.5 * h)?);
        Ok((0..4).map(|k| ((4.0 * fine[k] - coarse[k]) / 3.0).abs()).fold(0.0, f64::max))
    }

    pub fn gauss_maps(&self, z: Complex64) -> Result<GaussMaps> {
        let jet = self.jet(z)?;
        let [e1, f1, g1, h1] = jet.d1;
        let [_, f2, g2, h2] = jet.d2;
        let scale = [e1, f1, g1, h1].iter().map(|v| v.norm()).fold(1e-300, f64::max);
        let pick = |n1: Complex64, d1: Complex64, n2: Complex64, d2: Complex64, name: &str| {
            if n1.norm().max(d1.norm()) > COMMON_ZERO * scale {
                return Ok((SpherePoint::new(n1, d1), false));
            }
            let s2 = n2.norm().max(d2.norm());
            if s2 > COMMON_ZERO * scale.max(s2) {
                Ok((SpherePoint::new(n2, d2), true))
            } else {
                Err(Error::Singular(format!("{name} is 0/0 to second order at z = {z}")))
            }
        };
        let (plus, plus_resolved) = pick(g1, f1, g2, f2, "gamma_plus")?;
        let (minus, minus_resolved) = pick(-h1, f1, -h2, f2, "gamma_minus")?;
        Ok(GaussMaps {
            plus,
            minus,
            plus_resolved,
            minus_resolved,
        })
    }
}

pub(crate) fn dist4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn build_immersion(kind: ImmersionKind, cfg: &SeriesConfig) -> Result<Immersion> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    let planar = |efgh: [Poly; 4]| {
        Ok(Immersion {
            kind,
            coords: Coordinates::Planar { efgh },
        })
    };
    match kind {
        ImmersionKind::Square { lambda } => {
            let inv = rectangular_invariants(1.0, cfg)?;
            let fam = SquareFamily::new(lambda, &inv)?;
            Immersion::from_type_ii(kind, &fam.params(), Lattice::square(), inv, *cfg)
        }
        ImmersionKind::Rectangular { r } => {
            if !(r > 1.0) {
                return Err(Error::Domain(format!("rectangular immersions need R > 1, got {r}")));
            }
            let inv = rectangular_invariants(r, cfg)?;
            let sol = solve_rectangular(r, &inv)?;
            Immersion::from_type_ii(kind, &sol.params(), Lattice::rectangular(r)?, inv, *cfg)
        }
        ImmersionKind::TypeII => Err(Error::Domain(
            "use Immersion::from_type_ii for explicit Type-II coefficients".into(),
        )),
        ImmersionKind::Enneper3D => planar([
            Poly::from_pairs(&[(3, one / 3.0)]),
            Poly::from_pairs(&[(1, -one)]),
            Poly::from_pairs(&[(2, one / 2.0)]),
            Poly::from_pairs(&[(2, one / 2.0)]),
        ]),
        ImmersionKind::Enneper4DNodes { lambda } => {
            if lambda.norm() == 0.0 || !lambda.re.is_finite() || !lambda.im.is_finite() {
                return Err(Error::Domain("lambda must be a nonzero finite complex number".into()));
            }
            planar([
                Poly::from_pairs(&[(3, one / 3.0)]),
                Poly::from_pairs(&[(1, -one)]),
                Poly::from_pairs(&[(2, lambda / 2.0)]),
                Poly::from_pairs(&[(2, one / (2.0 * lambda))]),
            ])
        }
        ImmersionKind::Enneper4DEmbedded { s } => {
            if !s.is_finite() {
                return Err(Error::Domain("s must be finite".into()));
            }
            let w = Complex64::from_polar(s, PI / 4.0);
            planar([
                Poly::from_pairs(&[(3, one / 3.0), (1, -i * s * s)]),
                Poly::from_pairs(&[(1, -one)]),
                Poly::from_pairs(&[(2, one / 2.0), (1, w)]),
                Poly::from_pairs(&[(2, one / 2.0), (1, -w)]),
            ])
        }
        ImmersionKind::Quintic => planar([
            Poly::from_pairs(&[(5, one / 5.0), (1, -one)]),
            Poly::from_pairs(&[(1, one)]),
            Poly::from_pairs(&[(3, -one / 3.0), (1, one)]),
            Poly::from_pairs(&[(3, one / 3.0), (1, one)]),
        ]),
    }
}

/// The two readings of the `R → ∞` limit of the rectangular family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LargeRLimit {
    pub r: f64,
    /// `−(2/3)t²` at `r`, the `℘′` coefficient of the first coordinate.
    pub p_prime_coeff: f64,
    /// `−1/(2π²)`, its limit from `t² → 3/(4π²)`.
    pub p_prime_coeff_limit: f64,
    /// `−π²/2`, the coefficient in the printed limit formula.
    pub p_prime_coeff_printed: f64,
    /// `2t` at `r`, multiplying `Re ℘` in the second coordinate.
    pub second_coeff: f64,
    /// `√3/π`, the printed coefficient (there multiplying `Re ∫℘`).
    pub second_coeff_printed: f64,
    pub u: f64,
    pub v: f64,
    pub c: f64,
    pub s: f64,
    pub e: f64,
}

pub fn large_r_limit(r: f64, cfg: &SeriesConfig) -> Result<LargeRLimit> {
    let inv = rectangular_invariants(r, cfg)?;
    let sol = solve_rectangular(r, &inv)?;
    Ok(LargeRLimit {
        r,
        p_prime_coeff: -2.0 / 3.0 * sol.t2,
        p_prime_coeff_limit: -1.0 / (2.0 * PI * PI),
        p_prime_coeff_printed: -PI * PI / 2.0,
        second_coeff: 2.0 * sol.t,
        second_coeff_printed: 3f64.sqrt() / PI,
        u: sol.u,
        v: sol.v,
        c: sol.c,
        s: sol.s,
        e: sol.e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_derivatives() {
        let p = Poly::from_pairs(&[(5, Complex64::new(0.2, 0.0)), (1, Complex64::new(-1.0, 0.0))]);
        let z = Complex64::new(0.3, -1.1);
        assert!((p.d1(z) - (z.powi(4) - 1.0)).norm() < 1e-14);
        assert!((p.d2(z) - 4.0 * z.powi(3)).norm() < 1e-14);
    }

    #[test]
    fn quintic_matches_real_form() {
        let imm = build_immersion(ImmersionKind::Quintic, &SeriesConfig::default()).unwrap();
        let (u, v) = (0.7, -1.3);
        let x = imm.evaluate(Complex64::new(u, v)).unwrap();
        let want = [
            u.powi(5) / 5.0 - 2.0 * u.powi(3) * v * v + u * v.powi(4),
            v.powi(5) / 5.0 + u.powi(4) * v - 2.0 * u * u * v.powi(3) - 2.0 * v,
            2.0 * u,
            2.0 * v.powi(3) / 3.0 - 2.0 * u * u * v,
        ];
        for k in 0..4 {
            assert!((x[k] - want[k]).abs() < 1e-12, "{k}: {} vs {}", x[k], want[k]);
        }
    }

    #[test]
    fn sphere_point_normalisation() {
        let p = SpherePoint::new(Complex64::new(3.0, 0.0), Complex64::new(0.0, 0.0));
        assert!(p.is_infinity(1e-12));
        assert_eq!(p.to_unit_vector(), [0.0, 0.0, 1.0]);
        let q = SpherePoint::new(Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0));
        assert_eq!(q.value(), Some(Complex64::new(0.0, 0.0)));
    }
}
