//! The fourteen bounding curves of the `(a, b)` plank and the named constants
//! used in range conditions.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::algebra::AlgebraicConstant;

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Curve {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    C12,
    C13,
    C14,
}

impl Curve {
    pub const ALL: [Curve; 14] = [
        Curve::C1,
        Curve::C2,
        Curve::C3,
        Curve::C4,
        Curve::C5,
        Curve::C6,
        Curve::C7,
        Curve::C8,
        Curve::C9,
        Curve::C10,
        Curve::C11,
        Curve::C12,
        Curve::C13,
        Curve::C14,
    ];

    pub fn eval(self, a: f64, b: f64) -> f64 {
        match self {
            Curve::C1 => a + b - 1.0,
            Curve::C2 => a * a + 2.0 * a * b - 2.0 * b,
            Curve::C3 => a * b - 2.0 * a + 2.0 * b * b - 3.0 * b + 2.0,
            Curve::C4 => ((b * b + 1.0) * a + 2.0 * b * b * b) * a - 2.0 * b * b * b - b * b,
            Curve::C5 => a + 2.0 * b - 2.0,
            Curve::C6 => a * a + (2.0 * b + 2.0) * a - 4.0 * b,
            Curve::C7 => a * a + (2.0 * b - 2.0) * a + 3.0 * b * b - 2.0 * b - 1.0,
            Curve::C8 => a - b * b,
            Curve::C9 => (SQRT2 + 1.0) * a - b - 1.0,
            Curve::C10 => a - b + 1.0,
            Curve::C11 => 2.0 * a * b - 2.0 * a - 1.0,
            Curve::C12 => 2.0 * a * a + (1.0 - 3.0 * b) * a + 2.0 * b * b - 2.0 * b,
            Curve::C13 => a - 2.0 * b + 2.0,
            Curve::C14 => ((2.0 * b - 2.0) * a + (b * b - 1.0)) * a * a - b * b,
        }
    }

    pub fn gradient(self, a: f64, b: f64) -> (f64, f64) {
        match self {
            Curve::C1 => (1.0, 1.0),
            Curve::C2 => (2.0 * a + 2.0 * b, 2.0 * a - 2.0),
            Curve::C3 => (b - 2.0, a + 4.0 * b - 3.0),
            Curve::C4 => (
                2.0 * (b * b + 1.0) * a + 2.0 * b * b * b,
                2.0 * b * a * a + 6.0 * b * b * a - 6.0 * b * b - 2.0 * b,
            ),
            Curve::C5 => (1.0, 2.0),
            Curve::C6 => (2.0 * a + 2.0 * b + 2.0, 2.0 * a - 4.0),
            Curve::C7 => (2.0 * a + 2.0 * b - 2.0, 2.0 * a + 6.0 * b - 2.0),
            Curve::C8 => (1.0, -2.0 * b),
            Curve::C9 => (SQRT2 + 1.0, -1.0),
            Curve::C10 => (1.0, -1.0),
            Curve::C11 => (2.0 * b - 2.0, 2.0 * a),
            Curve::C12 => (4.0 * a + 1.0 - 3.0 * b, -3.0 * a + 4.0 * b - 2.0),
            Curve::C13 => (1.0, -2.0),
            Curve::C14 => (
                3.0 * (2.0 * b - 2.0) * a * a + 2.0 * (b * b - 1.0) * a,
                2.0 * a * a * a + 2.0 * b * a * a - 2.0 * b,
            ),
        }
    }

    /// Signed value divided by the gradient length: roughly the distance to the
    /// curve.
    pub fn normalized(self, a: f64, b: f64) -> f64 {
        let (ga, gb) = self.gradient(a, b);
        self.eval(a, b) / ga.hypot(gb).max(f64::MIN_POSITIVE)
    }

    pub fn expr(self) -> &'static str {
        match self {
            Curve::C1 => "a + b - 1",
            Curve::C2 => "a^2 + 2ab - 2b",
            Curve::C3 => "ab - 2a + 2b^2 - 3b + 2",
            Curve::C4 => "(b^2 + 1)a^2 + 2b^3 a - 2b^3 - b^2",
            Curve::C5 => "a + 2b - 2",
            Curve::C6 => "a^2 + (2b + 2)a - 4b",
            Curve::C7 => "a^2 + (2b - 2)a + 3b^2 - 2b - 1",
            Curve::C8 => "a - b^2",
            Curve::C9 => "(sqrt(2) + 1)a - b - 1",
            Curve::C10 => "a - b + 1",
            Curve::C11 => "2ab - 2a - 1",
            Curve::C12 => "2a^2 + (1 - 3b)a + 2b^2 - 2b",
            Curve::C13 => "a - 2b + 2",
            Curve::C14 => "(2b - 2)a^3 + (b^2 - 1)a^2 - b^2",
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// Bounds that appear in range conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Constant {
    Rational(i64, i64),
    APrime,
    ADoublePrime,
    BPrime,
    BDoublePrime,
    BTriplePrime,
    /// `2 sqrt(2) - 2`
    TwoSqrt2Minus2,
    /// `(sqrt(7) - 1) / 2`
    HalfSqrt7MinusHalf,
    /// `1 / sqrt(2)`
    InvSqrt2,
    /// `1 + 1 / sqrt(2)`
    OnePlusInvSqrt2,
}

struct Roots {
    a1: f64,
    a2: f64,
    b1: f64,
    b2: f64,
    b3: f64,
}

fn roots() -> &'static Roots {
    static R: OnceLock<Roots> = OnceLock::new();
    R.get_or_init(|| Roots {
        a1: AlgebraicConstant::a_prime().value,
        a2: AlgebraicConstant::a_double_prime().value,
        b1: AlgebraicConstant::b_prime().value,
        b2: AlgebraicConstant::b_double_prime().value,
        b3: AlgebraicConstant::b_triple_prime().value,
    })
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Rational(n, d) => n as f64 / d as f64,
            Constant::APrime => roots().a1,
            Constant::ADoublePrime => roots().a2,
            Constant::BPrime => roots().b1,
            Constant::BDoublePrime => roots().b2,
            Constant::BTriplePrime => roots().b3,
            Constant::TwoSqrt2Minus2 => 2.0 * SQRT2 - 2.0,
            Constant::HalfSqrt7MinusHalf => (7f64.sqrt() - 1.0) / 2.0,
            Constant::InvSqrt2 => 1.0 / SQRT2,
            Constant::OnePlusInvSqrt2 => 1.0 + 1.0 / SQRT2,
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Rational(n, 1) => write!(f, "{n}"),
            Constant::Rational(n, d) => write!(f, "{n}/{d}"),
            Constant::APrime => write!(f, "a'"),
            Constant::ADoublePrime => write!(f, "a''"),
            Constant::BPrime => write!(f, "b'"),
            Constant::BDoublePrime => write!(f, "b''"),
            Constant::BTriplePrime => write!(f, "b'''"),
            Constant::TwoSqrt2Minus2 => write!(f, "2sqrt(2) - 2"),
            Constant::HalfSqrt7MinusHalf => write!(f, "(-1 + sqrt(7))/2"),
            Constant::InvSqrt2 => write!(f, "1/sqrt(2)"),
            Constant::OnePlusInvSqrt2 => write!(f, "1 + 1/sqrt(2)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradients_match_finite_differences() {
        let h = 1e-6;
        for c in Curve::ALL {
            for &(a, b) in &[(0.3, 0.7), (0.9, 1.6), (0.55, 2.4)] {
                let (ga, gb) = c.gradient(a, b);
                let fa = (c.eval(a + h, b) - c.eval(a - h, b)) / (2.0 * h);
                let fb = (c.eval(a, b + h) - c.eval(a, b - h)) / (2.0 * h);
                assert!((ga - fa).abs() < 1e-6 && (gb - fb).abs() < 1e-6, "{c}");
            }
        }
    }

    #[test]
    fn named_constants() {
        assert!((Constant::APrime.value() - 0.780).abs() < 1e-3);
        assert!((Constant::BPrime.value() - 0.929).abs() < 1e-3);
        assert!((Constant::TwoSqrt2Minus2.value() - 0.8284271247461903).abs() < 1e-15);
        assert_eq!(Constant::Rational(2, 3).to_string(), "2/3");
    }
}
