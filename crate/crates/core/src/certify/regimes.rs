use super::ball::Ball;
use super::tfun::TFunction;
use crate::elliptic::SeriesConfig;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Printed bounds for the hundredths subintervals, in order of publication.
pub const PRINTED_TABLE: [f64; 9] = [-2.27, -2.14, -1.96, -1.75, -1.51, -1.25, -0.97, -0.68, -0.38];

/// Terms kept explicitly in the enclosed Lambert sums; the rest goes into a
/// geometric tail bound.
const LAMBERT_TERMS: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime")]
pub enum Regime {
    /// `[r0, ∞)`, needs `r0 ≥ 1.15`.
    LargeR { r0: f64 },
    /// `(1, 1.05]`.
    NearOne,
    /// `[1 + k/100, 1 + (k+1)/100]`, `k ∈ 5..=14`.
    Middle { k: u32 },
}

impl Regime {
    pub fn interval(&self) -> (f64, f64) {
        match *self {
            Regime::LargeR { r0 } => (r0, f64::INFINITY),
            Regime::NearOne => (1.0, 1.05),
            Regime::Middle { k } => middle_endpoints(k),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Regime::LargeR { r0 } => format!("LargeR({r0})"),
            Regime::NearOne => "NearOne".to_string(),
            Regime::Middle { k } => format!("Middle({k})"),
        }
    }
}

fn middle_endpoints(k: u32) -> (f64, f64) {
    (1.0 + k as f64 / 100.0, 1.0 + (k + 1) as f64 / 100.0)
}

/// One intermediate constant, with the published value it should respect.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Detail {
    pub name: String,
    /// Lower end of the enclosure for lower bounds, upper end otherwise.
    pub value: f64,
    pub enclosure: Ball,
    pub printed: Option<f64>,
    /// `true` if `value` must stay below `printed`, `false` if above.
    pub is_upper_bound: bool,
    pub respects_printed: Option<bool>,
}

impl Detail {
    fn upper(name: &str, b: Ball, printed: Option<f64>) -> Self {
        let v = b.upper();
        Detail {
            name: name.to_string(),
            value: v,
            enclosure: b,
            printed,
            is_upper_bound: true,
            respects_printed: printed.map(|p| v <= p),
        }
    }

    fn lower(name: &str, b: Ball, printed: Option<f64>) -> Self {
        let v = b.lower();
        Detail {
            name: name.to_string(),
            value: v,
            enclosure: b,
            printed,
            is_upper_bound: false,
            respects_printed: printed.map(|p| v >= p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub interval: (f64, f64),
    /// Upper bound on the solvability expression over the interval (for
    /// `LargeR`, the value at `r0` of the pointwise bound, which is negative on
    /// the whole half-line).
    pub bound: f64,
    pub certified: bool,
    pub details: Vec<Detail>,
}

impl RegimeReport {
    pub fn detail(&self, name: &str) -> Option<&Detail> {
        self.details.iter().find(|d| d.name == name)
    }
}

/// Enclosures of `q, η, g₂, g₃, N, D` at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallInvariants {
    pub r: Ball,
    pub q: Ball,
    pub eta: Ball,
    pub g2: Ball,
    pub g3: Ball,
    pub n: Ball,
    pub d: Ball,
}

fn lambert_ball(q: Ball, k: u32) -> Ball {
    let one = Ball::exact(1.0);
    let mut sum = Ball::exact(0.0);
    let mut qn = one;
    for n in 1..=LAMBERT_TERMS {
        qn = qn * q;
        sum = sum + qn * (n as f64).powi(k as i32) / (one - qn);
    }
    // Σ_{n>K} n^k qⁿ/(1−qⁿ) ≤ (K+1)^k q^{K+1} / ((1 − ρ)(1 − q)),
    // ρ = q·((K+2)/(K+1))^k bounding the ratio of consecutive terms.
    let kk = LAMBERT_TERMS as f64;
    let qh = q.upper();
    let rho = qh * ((kk + 2.0) / (kk + 1.0)).powi(k as i32);
    assert!(rho < 0.5, "q too large for the Lambert tail bound");
    let tail = (kk + 1.0).powi(k as i32) * qh.powi(LAMBERT_TERMS as i32 + 1) / ((1.0 - rho) * (1.0 - qh));
    sum + Ball::from_bounds(0.0, tail * 1.01)
}

pub fn ball_invariants(r: Ball) -> BallInvariants {
    let pi = Ball::pi();
    let pi2 = pi.sqr();
    let q = (-(pi * r * 2.0)).exp();
    let s1 = lambert_ball(q, 1);
    let s3 = lambert_ball(q, 3);
    let s5 = lambert_ball(q, 5);
    let one = Ball::exact(1.0);
    let eta = pi2 / 3.0 * (one - s1 * 24.0);
    let g2 = pi2.sqr() * 4.0 / 3.0 * (one + s3 * 240.0);
    let g3 = pi2.powi(3) * 8.0 / 27.0 * (one - s5 * 504.0);
    let n = r * (g2 - eta.sqr() * 12.0) + eta * pi * 24.0;
    let d = r * (g3 * 12.0 - g2 * eta * 8.0) + g2 * pi * 8.0;
    BallInvariants {
        r,
        q,
        eta,
        g2,
        g3,
        n,
        d,
    }
}

fn at(r: f64) -> BallInvariants {
    ball_invariants(Ball::approx(r))
}

/// `A(R₁,R₂) + B(R₁,R₂) + C(R₁,R₂)` for one hundredths subinterval.
fn middle_terms(k: u32) -> (Ball, Ball, Ball) {
    let (r1, r2) = middle_endpoints(k);
    let lo = at(r1);
    let hi = at(r2);
    let pi = Ball::pi();
    // (I) ≤ π + R₂D(R₂)²/(16N(R₂)²); the published form drops the 1/π of the
    // exact term, which only loosens the bound.
    let a = pi + hi.r * hi.d.sqr() / (hi.n.sqr() * 16.0);
    let b = -(lo.r * hi.g2 / (pi * 6.0));
    let c = lo.g2 * lo.n * 2.0 / (pi * 3.0) * (hi.r * hi.eta - pi) / lo.d;
    (a, b, c)
}

fn near_one() -> RegimeReport {
    let pi = Ball::pi();
    let one = Ball::exact(1.0);
    let e1 = at(1.05);
    let base = at(1.0);
    let term_d = e1.r * e1.d.sqr() / (pi * e1.n.sqr() * 16.0);
    let term_i = pi + term_d;
    let term_ii = -(e1.g2 / (pi * 6.0));
    let em2pi = (-(pi * 2.0)).exp();
    // g₃(R) ≥ (8/27)·504·π⁶·e^{−2π}·2π(R−1)(1 − π(R−1)) with R − 1 ≤ 0.05
    let c_g3 = pi.powi(6) * (8.0 * 504.0 / 27.0) * em2pi * (pi * 2.0) * (one - pi * Ball::approx(0.05));
    // η − π ≤ 16π³e^{−2π}(1 + 1/(2π) + 1/(2π²) + 1/(4π³))/(1 − e^{−2π})² · (R−1)
    let series = one + one / (pi * 2.0) + one / (pi.sqr() * 2.0) + one / (pi.powi(3) * 4.0);
    let c_eta = pi.powi(3) * 16.0 * em2pi * series / (one - em2pi).sqr();
    let c_reta = Ball::approx(1.05) * c_eta + pi;
    let ratio = c_g3 * 12.0 / c_reta - base.g2 * 8.0;
    let big = base.g2 * base.n * 2.0 / (pi * 3.0);
    let term_iii = big / ratio;
    let total = term_i + term_ii + term_iii;
    let printed_total = 3.3 - 9.1 + 5.3;
    let details = vec![
        Detail::upper("I", term_i, Some(3.29)),
        Detail::upper("I_D_part", term_d, Some(0.14)),
        Detail::upper("II", term_ii, Some(-9.1)),
        Detail::upper("III", term_iii, Some(5.3)),
        Detail::lower("g3_slope", c_g3, Some(1418.0)),
        Detail::upper("eta_slope", c_eta, Some(1.14)),
        Detail::upper("R_eta_minus_pi_slope", c_reta, Some(4.4)),
        Detail::lower("D_over_R_eta_minus_pi", ratio, Some(2354.0)),
        Detail::upper("big_factor_of_III", big, Some(12338.0)),
        Detail::upper("g2_at_1", base.g2, Some(190.0)),
        Detail::upper("combined", total, Some(printed_total)),
    ];
    RegimeReport {
        regime: Regime::NearOne,
        interval: (1.0, 1.05),
        bound: total.upper(),
        certified: total.is_negative(),
        details,
    }
}

/// Pointwise bound `R q π³ [(99Rπ − 95)² q − 55.2]` valid for `R ≥ 1.15`.
pub fn large_r_bound_at(r: f64) -> Result<f64> {
    if !(r >= 1.15) || !r.is_finite() {
        return Err(Error::Domain(format!("the large-R chain needs R >= 1.15, got {r}")));
    }
    Ok(large_r_parts(r).3.upper())
}

/// `(q, (⋆), lower bound of 1 + (R/π)X, bound)` at `r`.
fn large_r_parts(r: f64) -> (Ball, Ball, Ball, Ball) {
    let pi = Ball::pi();
    let rb = Ball::approx(r);
    let q = (-(pi * rb * 2.0)).exp();
    let lin = rb * pi * 99.0 - 95.0;
    let star = lin.sqr() * q;
    let factor = Ball::exact(1.0) - rb / pi * lin * pi.sqr() * q;
    let margin = Ball::approx(0.6) * 92.0;
    let bound = rb * q * pi.powi(3) * (star - margin);
    (q, star, factor, bound)
}

fn large_r(r0: f64) -> Result<RegimeReport> {
    if !(r0 >= 1.15) || !r0.is_finite() {
        return Err(Error::Domain(format!("LargeR needs r0 >= 1.15, got {r0}")));
    }
    let (q, star, factor, bound) = large_r_parts(r0);
    let margin = Ball::approx(0.6) * 92.0;
    let bracket = star - margin;
    let details = vec![
        Detail::upper("q", q, Some(8e-4)),
        Detail::upper("star", star, Some(50.3)),
        Detail::upper("margin", margin, Some(55.2)),
        Detail::upper("bracket", bracket, None),
        Detail::lower("one_plus_R_over_pi_X", factor, Some(0.3)),
        Detail::upper("bound", bound, None),
    ];
    // (⋆) decreases in R and R(95 − 99Rπ)q increases, so both checks at r0
    // cover the whole half-line.
    let certified = bracket.is_negative() && factor.lower() > 0.3;
    Ok(RegimeReport {
        regime: Regime::LargeR { r0 },
        interval: (r0, f64::INFINITY),
        bound: bound.upper(),
        certified,
        details,
    })
}

fn middle(k: u32) -> Result<RegimeReport> {
    if !(5..=14).contains(&k) {
        return Err(Error::Domain(format!("Middle(k) needs k in 5..=14, got {k}")));
    }
    let (a, b, c) = middle_terms(k);
    let total = a + b + c;
    let printed = printed_for(k);
    Ok(RegimeReport {
        regime: Regime::Middle { k },
        interval: middle_endpoints(k),
        bound: total.upper(),
        certified: total.is_negative(),
        details: vec![
            Detail::upper("A", a, None),
            Detail::upper("B", b, None),
            Detail::upper("C", c, None),
            Detail::upper("A+B+C", total, printed),
        ],
    })
}

/// Printed values line up with `k = 5, …, 13`; the tenth interval has none.
fn printed_for(k: u32) -> Option<f64> {
    (5..=13).contains(&k).then(|| PRINTED_TABLE[(k - 5) as usize])
}

pub fn regime_bound(regime: Regime) -> Result<RegimeReport> {
    match regime {
        Regime::LargeR { r0 } => large_r(r0),
        Regime::NearOne => Ok(near_one()),
        Regime::Middle { k } => middle(k),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub k: u32,
    pub r1: f64,
    pub r2: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub bound: f64,
    pub printed: Option<f64>,
    /// `|bound − printed| ≤ 0.02`.
    pub matches_printed: Option<bool>,
    pub negative: bool,
}

pub fn table(ks: std::ops::RangeInclusive<u32>) -> Result<Vec<TableRow>> {
    ks.map(|k| {
        let rep = middle(k)?;
        let (r1, r2) = rep.interval;
        let get = |n: &str| rep.detail(n).map(|d| d.value).unwrap_or(f64::NAN);
        let printed = printed_for(k);
        Ok(TableRow {
            k,
            r1,
            r2,
            a: get("A"),
            b: get("B"),
            c: get("C"),
            bound: rep.bound,
            printed,
            matches_printed: printed.map(|p| (rep.bound - p).abs() <= 0.02),
            negative: rep.certified,
        })
    })
    .collect()
}

/// Float companion of [`ball_invariants`] used by tests: the enclosure must
/// contain the plain evaluation.
#[allow(dead_code)]
pub(crate) fn point_values(r: f64) -> Result<TFunction> {
    TFunction::new(r, &SeriesConfig::default())
}
