//! Midpoint–radius intervals with outward-rounded radii.
//!
//! Every operation adds the rounding error of the midpoint computation to the
//! radius and inflates the result by `1 + 2⁻⁴⁰`. This is not a substitute for
//! directed rounding, but it keeps every computed enclosure strictly wider
//! than the float error it has to absorb.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

const U: f64 = f64::EPSILON; // 2⁻⁵²: one ulp relative, twice the unit roundoff
const INFLATE: f64 = 1.0 + 1.0 / (1u64 << 40) as f64;
const TINY: f64 = f64::MIN_POSITIVE;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub mid: f64,
    pub rad: f64,
}

fn widen(mid: f64, err: f64) -> Ball {
    Ball {
        mid,
        rad: (err + U * mid.abs()) * INFLATE + TINY,
    }
}

impl Ball {
    pub fn new(mid: f64, rad: f64) -> Self {
        assert!(rad >= 0.0 && rad.is_finite() && mid.is_finite(), "invalid ball {mid} ± {rad}");
        Ball { mid, rad }
    }

    /// A float that is exactly the intended number (integers, dyadics).
    pub fn exact(x: f64) -> Self {
        Ball { mid: x, rad: 0.0 }
    }

    /// A float that approximates the intended number to the nearest ulp, such
    /// as a decimal literal.
    pub fn approx(x: f64) -> Self {
        Ball {
            mid: x,
            rad: U * x.abs() + TINY,
        }
    }

    pub fn pi() -> Self {
        Ball::approx(std::f64::consts::PI)
    }

    /// Encloses `[lo, hi]`.
    pub fn from_bounds(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        let mid = 0.5 * (lo + hi);
        widen(mid, 0.5 * (hi - lo))
    }

    pub fn lower(&self) -> f64 {
        self.mid - self.rad * INFLATE
    }

    pub fn upper(&self) -> f64 {
        self.mid + self.rad * INFLATE
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower() <= x && x <= self.upper()
    }

    pub fn is_positive(&self) -> bool {
        self.lower() > 0.0
    }

    pub fn is_negative(&self) -> bool {
        self.upper() < 0.0
    }

    pub fn sqr(self) -> Ball {
        let m = self.mid * self.mid;
        widen(m, 2.0 * self.mid.abs() * self.rad + self.rad * self.rad)
    }

    pub fn powi(self, n: u32) -> Ball {
        (0..n).fold(Ball::exact(1.0), |acc, _| acc * self)
    }

    pub fn exp(self) -> Ball {
        let m = self.mid.exp();
        widen(m, m * self.rad.exp_m1() + 4.0 * U * m)
    }

    pub fn recip(self) -> Ball {
        assert!(
            self.lower() > 0.0 || self.upper() < 0.0,
            "division by a ball containing zero: {self}"
        );
        let m = 1.0 / self.mid;
        let lo_abs = self.mid.abs() - self.rad;
        widen(m, self.rad / (self.mid.abs() * lo_abs))
    }

    pub fn scale(self, k: f64) -> Ball {
        widen(self.mid * k, self.rad * k.abs())
    }
}

impl Add for Ball {
    type Output = Ball;
    fn add(self, o: Ball) -> Ball {
        widen(self.mid + o.mid, self.rad + o.rad)
    }
}

impl Sub for Ball {
    type Output = Ball;
    fn sub(self, o: Ball) -> Ball {
        widen(self.mid - o.mid, self.rad + o.rad)
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball {
            mid: -self.mid,
            rad: self.rad,
        }
    }
}

impl Mul for Ball {
    type Output = Ball;
    fn mul(self, o: Ball) -> Ball {
        widen(
            self.mid * o.mid,
            self.mid.abs() * o.rad + o.mid.abs() * self.rad + self.rad * o.rad,
        )
    }
}

impl Div for Ball {
    type Output = Ball;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Ball) -> Ball {
        self * o.recip()
    }
}

impl Add<f64> for Ball {
    type Output = Ball;
    fn add(self, o: f64) -> Ball {
        self + Ball::exact(o)
    }
}

impl Sub<f64> for Ball {
    type Output = Ball;
    fn sub(self, o: f64) -> Ball {
        self - Ball::exact(o)
    }
}

impl Mul<f64> for Ball {
    type Output = Ball;
    fn mul(self, o: f64) -> Ball {
        self.scale(o)
    }
}

impl Div<f64> for Ball {
    type Output = Ball;
    fn div(self, o: f64) -> Ball {
        self / Ball::exact(o)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:e}", self.mid, self.rad)
    }
}
