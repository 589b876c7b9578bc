use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series truncated after {max_terms} terms (last term {last_term:e})")]
    Truncation { max_terms: usize, last_term: f64 },

    #[error("z = {z} lies within {margin} of lattice point {lattice_point} (distance {distance:e})")]
    PoleProximity {
        z: Complex64,
        lattice_point: Complex64,
        distance: f64,
        margin: f64,
    },

    #[error("integration path passes within {distance:e} of a pole (margin {margin})")]
    PathNearPole { distance: f64, margin: f64 },

    #[error("no real solution: u^2 = {u2:e}, t^2 = {t2:e}")]
    NoRealSolution { u2: f64, t2: f64 },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("no convergence after {iterations} iterations (residual norm {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("classification refused: max residual {residual:e} exceeds {tol:e}")]
    Infeasible { residual: f64, tol: f64 },

    #[error("wrong lattice: {0}")]
    WrongLattice(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("end asymptotics: {0}")]
    Asymptotics(String),

    #[error("curves too close: min distance {distance:e} below {threshold:e}")]
    Proximity { distance: f64, threshold: f64 },

    #[error("not a closed braid: {0}")]
    NotABraid(String),

    #[error("singular point: {0}")]
    Singular(String),

    #[error("unstable result: {0}")]
    Unstable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
