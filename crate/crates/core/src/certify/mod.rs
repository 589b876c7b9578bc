//! Negativity of the solvability expression
//!
//! ```text
//! (R/π)(1/(4T) − η)² + 2[1 + (R/π)(1/(4T) − η)](η − g₂T/3)
//! ```
//!
//! for every `R > 1`: point evaluations, monotonicity checks, and
//! interval re-computations of the three regimes `(1, 1.05]`,
//! `[1.05, 1.15]` in hundredths, and `[1.15, ∞)`.

mod ball;
mod mega;
mod regimes;
mod tfun;

pub use ball::Ball;
pub use mega::{
    certify_negativity, mega_terms, monotonicity_check, sandwich_check, GridFailure, MegaTerms,
    MonotonicityReport, NegativityReport, Sandwich, SandwichReport,
};
pub use regimes::{
    ball_invariants, large_r_bound_at, regime_bound, table, BallInvariants, Detail, Regime,
    RegimeReport, TableRow, PRINTED_TABLE,
};
pub use tfun::{TFunction, D_INF, ETA_INF, G2_INF, G3_INF, N_INF, T_INF};
