//! Minimal tori in R⁴ built from Weierstrass data.
//!
//! The crate is organised bottom-up:
//!
//! * [`elliptic`]: lattices, invariants `g₂, g₃, η₁, η₂`, and `℘, ℘′, ℘″, ζ`.
//! * [`solver`]: the Type-I / Type-II algebraic and period systems.
//! * [`certify`]: `T(R)`, the solvability inequality and its regime bounds.
//! * [`geometry`]: immersions, conformality and period checks, Gauss maps,
//!   curvature totals, end orders and meshes.
//! * [`knots`]: boundary curves, linking numbers, braids and the writhe at
//!   infinity.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod certify;
pub mod cmath;
pub mod elliptic;
pub mod error;
pub mod geometry;
pub mod knots;
pub mod serde_complex;
pub mod solver;

pub use num_complex::Complex64;

pub use certify::{Ball, MegaTerms, Regime, RegimeReport};
pub use elliptic::{Cycle, EllipticInvariants, Lattice, SeriesConfig, Weierstrass};
pub use error::{Error, Result};
pub use geometry::{CurvatureReport, Immersion, ImmersionKind, SurfaceMesh};
pub use knots::{BraidDiagram, PolyCurve};
pub use solver::{RectangularSolution, ResidualVector, SquareFamily, TypeIIParams};
