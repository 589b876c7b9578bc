use super::regimes::{large_r_bound_at, regime_bound, Regime, RegimeReport};
use super::tfun::{TFunction, D_INF, N_INF, T_INF};
use crate::elliptic::{EllipticInvariants, SeriesConfig};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MegaTerms {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "T")]
    pub t: f64,
    /// `(R/π)(D²/(16N²) − η²) + 2η`
    pub term_i: f64,
    /// `−g₂R/(6π)`
    pub term_ii: f64,
    /// `(2g₂N/(3π))·(Rη − π)/D`
    pub term_iii: f64,
    /// The three factors of the unsplit form `(R/π)X² + 2·[1 + (R/π)X]·Y`.
    pub square_term: f64,
    pub bracket: f64,
    /// `Y = η − g₂T/3`
    pub y: f64,
    /// Evaluated from deviations off the `R → ∞` limits; agrees with
    /// `term_i + term_ii + term_iii` up to the cancellation in that sum.
    pub lhs: f64,
    /// `2(η − g₂T/3 − 2π/R)`
    pub rhs_coeff: f64,
}

impl MegaTerms {
    pub fn from_tfunction(f: &TFunction) -> Self {
        let (r, eta, g2) = (f.r, f.eta, f.g2);
        MegaTerms {
            r,
            n: f.n,
            d: f.d,
            t: f.t,
            term_i: r / PI * (f.d * f.d / (16.0 * f.n * f.n) - eta * eta) + 2.0 * eta,
            term_ii: -g2 * r / (6.0 * PI),
            term_iii: 2.0 * g2 * f.n / (3.0 * PI) * (r * eta - PI) / f.d,
            square_term: r / PI * f.x * f.x,
            bracket: 1.0 + r / PI * f.x,
            y: f.y,
            lhs: f.lhs(),
            rhs_coeff: f.rhs_coeff(),
        }
    }

    pub fn split_sum(&self) -> f64 {
        self.term_i + self.term_ii + self.term_iii
    }

    /// `lhs/rhs_coeff`, the value of `u²`.
    pub fn u2(&self) -> f64 {
        self.lhs / self.rhs_coeff
    }
}

/// `inv` must be the invariants of `(1, Ri)`; it is only used to check that.
pub fn mega_terms(r: f64, inv: &EllipticInvariants) -> Result<MegaTerms> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::Domain(format!("mega_terms needs R > 1, got {r}")));
    }
    let q = (-2.0 * PI * r).exp();
    if !inv.q.is_some_and(|iq| (iq - q).abs() <= 1e-12 * q) {
        return Err(Error::Domain(format!("invariants do not belong to R = {r}")));
    }
    let f = TFunction::new(r, &SeriesConfig::default())?;
    Ok(MegaTerms::from_tfunction(&f))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub points: usize,
    pub ok: bool,
    /// `(R_i, R_{i+1}, quantity)` for every pair violating the expected order.
    pub violations: Vec<(f64, f64, String)>,
    pub d_at_one: Option<f64>,
    pub n_limit_gap: f64,
    pub d_limit_gap: f64,
    pub t_limit_gap: f64,
}

/// Strict monotonicity of `N` (down), `D` (up), `T` (down) on a sorted grid in
/// `[1, 50]`. Compared through the deviations from the limits, which remain
/// representable long after `N, D, T` themselves stop changing in floating
/// point.
pub fn monotonicity_check(grid: &[f64]) -> Result<MonotonicityReport> {
    if grid.len() < 2 {
        return Err(Error::Domain("grid needs at least two points".into()));
    }
    if grid.iter().any(|&r| !(1.0..=50.0).contains(&r)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("grid must be strictly increasing within [1, 50]".into()));
    }
    let cfg = SeriesConfig::default();
    let fs: Vec<TFunction> = grid.iter().map(|&r| TFunction::new(r, &cfg)).collect::<Result<_>>()?;
    let mut violations = Vec::new();
    for w in fs.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.d_n >= a.d_n {
            violations.push((a.r, b.r, "N".to_string()));
        }
        if b.d_d <= a.d_d {
            violations.push((a.r, b.r, "D".to_string()));
        }
        // T is infinite at R = 1
        if a.r > 1.0 && b.d_t >= a.d_t {
            violations.push((a.r, b.r, "T".to_string()));
        }
    }
    let last = fs.last().unwrap();
    Ok(MonotonicityReport {
        points: grid.len(),
        ok: violations.is_empty(),
        violations,
        d_at_one: (grid[0] == 1.0).then(|| fs[0].d),
        n_limit_gap: (last.n - N_INF).abs(),
        d_limit_gap: (last.d - D_INF).abs(),
        t_limit_gap: (last.t - T_INF).abs(),
    })
}

/// One of the nine two-sided bounds `lo·π^k·q ≤ X − X∞ ≤ hi·π^k·q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sandwich {
    pub quantity: String,
    pub pi_power: u32,
    pub lo: f64,
    pub hi: f64,
    /// Extremes of `(X − X∞)/(π^k q)` over the grid.
    pub observed_min: f64,
    pub observed_max: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub grid: Vec<f64>,
    pub sandwiches: Vec<Sandwich>,
    pub all_hold: bool,
}

/// Normalised deviations for `R ≥ 1.15`, written in `a = S₁/q`, `b = S₃/q`,
/// `c = S₅/q` so that no `O(1)` quantities are subtracted.
fn normalised_deviations(f: &TFunction) -> [f64; 9] {
    let q = f.q;
    let (a, b, c) = (f.s1 / q, f.s3 / q, f.s5 / q);
    let k3 = 8.0 * 504.0 / 27.0;
    let eta_n = 1.0 / 3.0 - 8.0 * a * q; // η/π²
    [
        -8.0 * a,
        320.0 * b,
        -k3 * c,
        -16.0 * a / 3.0 + 64.0 * a * a * q,
        -8.0 * a / 3.0 + 64.0 * a * a * q - 512.0 * a * a * a * q * q,
        -32.0 * a / 3.0 + 320.0 * b / 3.0 - 2560.0 * a * b * q,
        2560.0 * b / 3.0 + 102400.0 * b * b * q,
        320.0 * b * eta_n * eta_n + 4.0 / 3.0 * (-16.0 * a / 3.0 + 64.0 * a * a * q),
        -k3 * c * eta_n - 64.0 * a / 27.0,
    ]
}

const SANDWICHES: [(&str, u32, f64, f64); 9] = [
    ("eta", 2, -9.0, -8.0),
    ("g2", 4, 320.0, 323.0),
    ("g3", 6, -154.0, -149.0),
    ("eta^2", 4, -6.0, -5.0),
    ("eta^3", 6, -3.0, -2.0),
    ("g2*eta", 6, 92.0, 97.0),
    ("g2^2", 8, 853.0, 938.0),
    ("g2*eta^2", 8, 26.0, 30.0),
    ("g3*eta", 8, -54.0, -51.0),
];

pub fn sandwich_check(grid: &[f64]) -> Result<SandwichReport> {
    if grid.is_empty() || grid.iter().any(|&r| !(r >= 1.15) || !r.is_finite()) {
        return Err(Error::Domain("sandwich grid must be non-empty and within [1.15, inf)".into()));
    }
    let cfg = SeriesConfig::default();
    let devs: Vec<[f64; 9]> = grid
        .iter()
        .map(|&r| TFunction::new(r, &cfg).map(|f| normalised_deviations(&f)))
        .collect::<Result<_>>()?;
    let sandwiches: Vec<Sandwich> = SANDWICHES
        .iter()
        .enumerate()
        .map(|(i, &(name, k, lo, hi))| {
            let vals = devs.iter().map(|d| d[i]);
            let mn = vals.clone().fold(f64::INFINITY, f64::min);
            let mx = vals.fold(f64::NEG_INFINITY, f64::max);
            Sandwich {
                quantity: name.to_string(),
                pi_power: k,
                lo,
                hi,
                observed_min: mn,
                observed_max: mx,
                holds: lo <= mn && mx <= hi,
            }
        })
        .collect();
    Ok(SandwichReport {
        grid: grid.to_vec(),
        all_hold: sandwiches.iter().all(|s| s.holds),
        sandwiches,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFailure {
    #[serde(rename = "R")]
    pub r: f64,
    pub lhs: f64,
    pub rhs_coeff: f64,
    /// Set when a regime's pointwise bound falls below the exact value.
    pub bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport {
    pub r_min: f64,
    pub r_max: f64,
    pub step: Option<f64>,
    pub regimes: Vec<RegimeReport>,
    pub grid_points: usize,
    pub max_lhs: Option<f64>,
    pub max_rhs_coeff: Option<f64>,
    pub grid_failures: Vec<GridFailure>,
    /// Parts of `[r_min, r_max]` not covered by a certified regime.
    pub uncertified_gaps: Vec<(f64, f64)>,
    pub all_negative: bool,
}

/// Regime certificates for every regime meeting `[r_min, r_max]`, plus a dense
/// grid (when `step` is given) on which `lhs < 0`, `rhs_coeff < 0`, and each
/// applicable regime bound dominates `lhs`.
pub fn certify_negativity(r_min: f64, r_max: f64, step: Option<f64>) -> Result<NegativityReport> {
    if !(r_min > 1.0 && r_max > r_min && r_max.is_finite()) {
        return Err(Error::Domain(format!("need 1 < r_min < r_max, got {r_min}, {r_max}")));
    }
    if let Some(h) = step {
        if !(h > 0.0) {
            return Err(Error::Domain(format!("step must be positive, got {h}")));
        }
    }
    let mut regimes = Vec::new();
    if r_min < 1.05 {
        regimes.push(regime_bound(Regime::NearOne)?);
    }
    for k in 5..=14u32 {
        let (lo, hi) = Regime::Middle { k }.interval();
        if hi > r_min + 1e-12 && lo < r_max - 1e-12 {
            regimes.push(regime_bound(Regime::Middle { k })?);
        }
    }
    if r_max > 1.15 {
        regimes.push(regime_bound(Regime::LargeR { r0: 1.15 })?);
    }

    let mut gaps = Vec::new();
    let mut cursor = r_min;
    let mut covered: Vec<(f64, f64)> = regimes
        .iter()
        .filter(|r| r.certified)
        .map(|r| r.interval)
        .collect();
    covered.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (lo, hi) in covered {
        if lo > cursor + 1e-12 {
            gaps.push((cursor, lo.min(r_max)));
        }
        cursor = cursor.max(hi);
    }
    if cursor < r_max - 1e-12 {
        gaps.push((cursor, r_max));
    }

    let cfg = SeriesConfig::default();
    let mut failures = Vec::new();
    let mut max_lhs: Option<f64> = None;
    let mut max_rhs: Option<f64> = None;
    let mut points = 0;
    if let Some(h) = step {
        let n = ((r_max - r_min) / h).floor() as usize;
        for i in 0..=n {
            let r = r_min + h * i as f64;
            let f = TFunction::new(r, &cfg)?;
            let (lhs, rhs) = (f.lhs(), f.rhs_coeff());
            points += 1;
            max_lhs = Some(max_lhs.map_or(lhs, |m| m.max(lhs)));
            max_rhs = Some(max_rhs.map_or(rhs, |m| m.max(rhs)));
            let mut bound = None;
            for rep in &regimes {
                let (lo, hi) = rep.interval;
                if r >= lo && r <= hi {
                    let b = match rep.regime {
                        Regime::LargeR { .. } => large_r_bound_at(r)?,
                        _ => rep.bound,
                    };
                    if b < lhs {
                        bound = Some(b);
                    }
                }
            }
            if !(lhs < 0.0 && rhs < 0.0) || bound.is_some() {
                failures.push(GridFailure {
                    r,
                    lhs,
                    rhs_coeff: rhs,
                    bound,
                });
            }
        }
    }
    let all_negative = failures.is_empty() && regimes.iter().all(|r| r.certified);
    Ok(NegativityReport {
        r_min,
        r_max,
        step,
        regimes,
        grid_points: points,
        max_lhs,
        max_rhs_coeff: max_rhs,
        grid_failures: failures,
        uncertified_gaps: gaps,
        all_negative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::rectangular_invariants;

    fn terms(r: f64) -> MegaTerms {
        mega_terms(r, &rectangular_invariants(r, &SeriesConfig::default()).unwrap()).unwrap()
    }

    #[test]
    fn split_agrees_with_lhs() {
        for &r in &[1.01, 1.1, 1.5, 2.0, 3.0] {
            let m = terms(r);
            let scale = m.term_i.abs() + m.term_ii.abs() + m.term_iii.abs();
            assert!((m.split_sum() - m.lhs).abs() < 1e-12 * scale, "R={r}");
        }
    }

    #[test]
    fn limits_near_one() {
        let m = terms(1.0001);
        assert!((m.term_i - PI).abs() < 0.05);
        assert!((m.square_term - PI).abs() < 0.05);
        assert!(m.bracket.abs() < 0.05);
    }

    #[test]
    fn limits_at_large_r() {
        let m = terms(6.0);
        assert!(m.square_term >= 0.0 && m.square_term <= 1e-4);
        assert!(m.y < 0.0 && m.y > -1e-4);
        assert!((m.bracket - 1.0).abs() < 1e-4);
        assert!(m.lhs < 0.0 && m.rhs_coeff < 0.0);
    }

    #[test]
    fn rejects_r_at_most_one() {
        let inv = rectangular_invariants(1.0, &SeriesConfig::default()).unwrap();
        assert!(mega_terms(1.0, &inv).is_err());
    }
}
