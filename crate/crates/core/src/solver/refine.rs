use super::{classify_solution, type_ii_residual, Classification, ResidualVector, TypeIIParams};
use crate::elliptic::EllipticInvariants;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefineOptions {
    /// Success when the largest residual component is at most this.
    pub tol: f64,
    pub max_iter: usize,
    pub initial_damping: f64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            tol: 1e-10,
            max_iter: 200,
            initial_damping: 1e-3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Refined {
    pub params: TypeIIParams,
    pub residual: ResidualVector,
    pub iterations: usize,
}

fn residual_vec(x: &DVector<f64>, inv: &EllipticInvariants, tau: Complex64) -> DVector<f64> {
    let p = TypeIIParams::from_real(x.as_slice());
    DVector::from_row_slice(&type_ii_residual(&p, inv, tau).to_real())
}

/// Central differences with unit step; exact because the residual map is a
/// real quadratic in the 22 coordinates.
fn jacobian(x: &DVector<f64>, inv: &EllipticInvariants, tau: Complex64) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(20, 22);
    let mut xp = x.clone();
    for k in 0..22 {
        let x0 = xp[k];
        xp[k] = x0 + 1.0;
        let fp = residual_vec(&xp, inv, tau);
        xp[k] = x0 - 1.0;
        let fm = residual_vec(&xp, inv, tau);
        xp[k] = x0;
        j.set_column(k, &((fp - fm) * 0.5));
    }
    j
}

/// Levenberg–Marquardt on the 20 real residuals over the 22 real coordinates.
pub fn refine_solution(
    start: &TypeIIParams,
    tau: Complex64,
    inv: &EllipticInvariants,
    opts: &RefineOptions,
) -> Result<Refined> {
    if !start.is_finite() {
        return Err(Error::Domain("start parameters must be finite".into()));
    }
    let mut x = DVector::from_row_slice(&start.to_real());
    let mut f = residual_vec(&x, inv, tau);
    let max_abs = |f: &DVector<f64>| {
        f.as_slice()
            .chunks(2)
            .map(|c| c[0].hypot(c[1]))
            .fold(0.0, f64::max)
    };
    let mut mu = opts.initial_damping;
    let mut nu = 2.0;
    for it in 0..=opts.max_iter {
        if max_abs(&f) <= opts.tol {
            let params = TypeIIParams::from_real(x.as_slice());
            return Ok(Refined {
                params,
                residual: type_ii_residual(&params, inv, tau),
                iterations: it,
            });
        }
        if it == opts.max_iter {
            break;
        }
        let j = jacobian(&x, inv, tau);
        let jt = j.transpose();
        let jtj = &jt * &j;
        let g = &jt * &f;
        let cost = f.norm_squared();
        let scale = jtj.diagonal().max().max(1e-12);
        let mut accepted = false;
        for _ in 0..60 {
            let mut a = jtj.clone();
            for k in 0..22 {
                a[(k, k)] += mu * scale;
            }
            let Some(chol) = a.cholesky() else {
                mu *= nu;
                nu *= 2.0;
                continue;
            };
            let step = chol.solve(&(-&g));
            let xn = &x + &step;
            let fn_ = residual_vec(&xn, inv, tau);
            let cn = fn_.norm_squared();
            let predicted = -(step.dot(&g) * 2.0 + (&j * &step).norm_squared());
            let rho = (cost - cn) / predicted.max(f64::MIN_POSITIVE);
            if cn < cost && rho > 0.0 {
                x = xn;
                f = fn_;
                mu *= (1.0f64 / 3.0).max(1.0 - (2.0 * rho - 1.0).powi(3));
                nu = 2.0;
                accepted = true;
                break;
            }
            mu *= nu;
            nu *= 2.0;
        }
        if !accepted || !x.iter().all(|v| v.is_finite()) {
            break;
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        residual: f.norm(),
    })
}

/// Start point with independent Gaussian-like coordinates of size `scale`.
pub fn random_start(rng: &mut ChaCha8Rng, scale: f64) -> TypeIIParams {
    let mut x = [0.0; 22];
    for v in x.iter_mut() {
        *v = scale * (rng.random::<f64>() + rng.random::<f64>() + rng.random::<f64>() - 1.5) * 2.0;
    }
    TypeIIParams::from_real(&x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StartOutcome {
    pub seed: u64,
    pub converged: bool,
    pub iterations: usize,
    pub final_residual: f64,
    pub classification: Option<Classification>,
    pub params: Option<TypeIIParams>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiStartReport {
    pub starts: usize,
    pub converged: usize,
    pub cg_family: usize,
    pub rectangular: usize,
    pub other: usize,
    pub outcomes: Vec<StartOutcome>,
}

/// Runs `starts` independent refinements; run `i` uses the seed `seed + i`.
#[allow(clippy::too_many_arguments)]
pub fn multi_start(
    starts: usize,
    seed: u64,
    scale: f64,
    tau: Complex64,
    inv: &EllipticInvariants,
    opts: &RefineOptions,
    classify_tol: f64,
) -> MultiStartReport {
    let outcomes: Vec<StartOutcome> = (0..starts as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let start = random_start(&mut rng, scale);
            match refine_solution(&start, tau, inv, opts) {
                Ok(r) => StartOutcome {
                    seed: s,
                    converged: true,
                    iterations: r.iterations,
                    final_residual: r.residual.max_abs(),
                    classification: classify_solution(&r.params, inv, tau, classify_tol).ok(),
                    params: Some(r.params),
                },
                Err(Error::NonConvergence { iterations, residual }) => StartOutcome {
                    seed: s,
                    converged: false,
                    iterations,
                    final_residual: residual,
                    classification: None,
                    params: None,
                },
                Err(_) => StartOutcome {
                    seed: s,
                    converged: false,
                    iterations: 0,
                    final_residual: f64::NAN,
                    classification: None,
                    params: None,
                },
            }
        })
        .collect();
    let count = |pred: &dyn Fn(&Classification) -> bool| {
        outcomes
            .iter()
            .filter(|o| o.classification.as_ref().is_some_and(pred))
            .count()
    };
    MultiStartReport {
        starts,
        converged: outcomes.iter().filter(|o| o.converged).count(),
        cg_family: count(&|c| matches!(c, Classification::CgFamily { .. })),
        rectangular: count(&|c| matches!(c, Classification::Rectangular)),
        // a converged run that could not be classified counts as "other"
        other: outcomes
            .iter()
            .filter(|o| o.converged && !matches!(o.classification, Some(Classification::CgFamily { .. }) | Some(Classification::Rectangular)))
            .count(),
        outcomes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{rectangular_invariants, SeriesConfig};
    use crate::solver::{solve_rectangular, SquareFamily};

    #[test]
    fn jacobian_matches_directional_derivative() {
        let inv = rectangular_invariants(1.0, &SeriesConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_start(&mut rng, 1.0);
        let x = DVector::from_row_slice(&p.to_real());
        let j = jacobian(&x, &inv, Complex64::i());
        let dir = DVector::from_fn(22, |i, _| (i as f64 * 0.37).sin());
        let h = 1e-6;
        let fd = (residual_vec(&(&x + &dir * h), &inv, Complex64::i())
            - residual_vec(&(&x - &dir * h), &inv, Complex64::i()))
            / (2.0 * h);
        assert!((fd - &j * dir).norm() < 1e-6);
    }

    #[test]
    fn feasible_start_is_fixed_point() {
        let inv = rectangular_invariants(2.0, &SeriesConfig::default()).unwrap();
        let sol = solve_rectangular(2.0, &inv).unwrap();
        let r = refine_solution(&sol.params(), Complex64::new(0.0, 2.0), &inv, &RefineOptions::default()).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.params, sol.params());
    }

    #[test]
    fn noisy_family_start_returns_to_family() {
        let inv = rectangular_invariants(1.0, &SeriesConfig::default()).unwrap();
        let fam = SquareFamily::new(Complex64::new(1.3, 0.0), &inv).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut x = fam.params().to_real();
        for v in x.iter_mut() {
            *v += 1e-3 * (rng.random::<f64>() - 0.5) * 2.0;
        }
        let r = refine_solution(&TypeIIParams::from_real(&x), Complex64::i(), &inv, &RefineOptions::default()).unwrap();
        assert!(r.residual.max_abs() <= 1e-10);
        // the family is a degenerate zero set (the Jacobian loses a complex
        // rank along it), so a 1e-10 residual only pins the point to ~1e-5
        let c = classify_solution(&r.params, &inv, Complex64::i(), 1e-3).unwrap();
        assert!(matches!(c, Classification::CgFamily { .. }), "{c:?}");
    }
}
