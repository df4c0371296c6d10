use std::fmt;

use serde::{Serialize, Serializer};

use super::curves::{Constant, Curve};
use super::ClassId;
use crate::distances::PathLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Rel {
    fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }

    /// `v rel 0`, with equality meaning `|v| <= tol`.
    fn test(self, v: f64, tol: f64) -> bool {
        match self {
            Rel::Lt => v < 0.0,
            Rel::Le => v <= 0.0,
            Rel::Eq => v.abs() <= tol,
            Rel::Ge => v >= 0.0,
            Rel::Gt => v > 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Coord {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Condition {
    /// `curve(a, b) rel 0`.
    Sign(Curve, Rel),
    /// `coord rel bound`.
    Range(Coord, Rel, Constant),
}

impl Condition {
    /// Left-hand side minus right-hand side.
    pub fn value(&self, a: f64, b: f64) -> f64 {
        match *self {
            Condition::Sign(c, _) => c.eval(a, b),
            Condition::Range(Coord::A, _, k) => a - k.value(),
            Condition::Range(Coord::B, _, k) => b - k.value(),
        }
    }

    /// `value` scaled by the gradient length.
    pub fn normalized(&self, a: f64, b: f64) -> f64 {
        match *self {
            Condition::Sign(c, _) => c.normalized(a, b),
            Condition::Range(..) => self.value(a, b),
        }
    }

    pub fn holds(&self, a: f64, b: f64, tol: f64) -> bool {
        match *self {
            Condition::Sign(c, Rel::Eq) => Rel::Eq.test(c.normalized(a, b), tol),
            Condition::Sign(c, rel) => rel.test(c.eval(a, b), tol),
            Condition::Range(_, rel, _) => rel.test(self.value(a, b), tol),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Sign(c, rel) => write!(f, "{} {} 0", c.expr(), rel.symbol()),
            Condition::Range(coord, rel, k) => {
                let v = if *coord == Coord::A { "a" } else { "b" };
                write!(f, "{v} {} {k}", rel.symbol())
            }
        }
    }
}

impl Serialize for Condition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub type Clause = Vec<Condition>;

#[derive(Debug, Clone, Serialize)]
pub struct ClassDefinition {
    pub id: ClassId,
    pub dimension: u8,
    /// Disjunction of conjunctions.
    pub clauses: Vec<Clause>,
}

impl ClassDefinition {
    pub fn holds(&self, a: f64, b: f64, tol: f64) -> bool {
        self.clauses.iter().any(|cl| cl.iter().all(|c| c.holds(a, b, tol)))
    }
}

pub(super) fn build() -> Vec<ClassDefinition> {
    use Constant as K;
    use Curve::*;
    use Rel::*;
    let s = |c: Curve, r: Rel| Condition::Sign(c, r);
    let a = |r: Rel, k: Constant| Condition::Range(Coord::A, r, k);
    let b = |r: Rel, k: Constant| Condition::Range(Coord::B, r, k);
    let one = K::Rational(1, 1);
    let zero = K::Rational(0, 1);
    let two_thirds = K::Rational(2, 3);
    let three_halves = K::Rational(3, 2);
    let two = K::Rational(2, 1);
    let t = K::TwoSqrt2Minus2;

    let rows: Vec<(u8, Vec<Clause>)> = vec![
        (2, vec![vec![s(C1, Le), s(C2, Le)]]),
        (2, vec![vec![s(C1, Le), s(C2, Gt)]]),
        (2, vec![vec![s(C1, Gt), s(C2, Gt), s(C3, Gt), b(Lt, two_thirds)]]),
        (1, vec![vec![s(C3, Eq), b(Lt, two_thirds)]]),
        (
            2,
            vec![
                vec![s(C3, Lt), b(Le, two_thirds), a(Lt, one)],
                vec![s(C4, Gt), s(C8, Ge), b(Gt, two_thirds), b(Lt, one), a(Lt, one)],
            ],
        ),
        (1, vec![vec![a(Eq, one), b(Gt, zero), b(Le, one)]]),
        (2, vec![vec![s(C1, Gt), s(C2, Le), s(C5, Lt)]]),
        (1, vec![vec![s(C5, Eq), a(Le, two_thirds)]]),
        (2, vec![vec![s(C5, Gt), s(C6, Le), s(C7, Le)]]),
        (2, vec![vec![s(C6, Gt), s(C4, Lt), s(C7, Le)]]),
        (1, vec![vec![s(C4, Eq), a(Gt, two_thirds), a(Le, K::APrime)]]),
        (2, vec![vec![s(C6, Gt), s(C4, Le), s(C7, Gt)]]),
        (2, vec![vec![s(C4, Gt), s(C6, Gt), s(C9, Lt), a(Gt, K::APrime), a(Lt, t)]]),
        (1, vec![vec![s(C9, Eq), a(Gt, K::APrime), a(Lt, t)]]),
        (2, vec![vec![s(C8, Lt), s(C9, Gt), b(Lt, one)]]),
        (2, vec![vec![s(C6, Le), s(C4, Le), s(C7, Gt), b(Lt, one)]]),
        (2, vec![vec![s(C4, Gt), b(Gt, K::BPrime), b(Lt, one), s(C6, Le)]]),
        (1, vec![vec![b(Eq, one), a(Le, K::HalfSqrt7MinusHalf)]]),
        (1, vec![vec![b(Eq, one), a(Gt, K::HalfSqrt7MinusHalf), a(Lt, t)]]),
        (0, vec![vec![a(Eq, t), b(Eq, one)]]),
        (1, vec![vec![b(Eq, one), a(Gt, t), a(Lt, one)]]),
        (2, vec![vec![s(C10, Le), s(C11, Lt)]]),
        (2, vec![vec![s(C10, Gt), s(C12, Gt), s(C11, Lt), s(C4, Le), b(Gt, one)]]),
        (2, vec![vec![s(C12, Le), s(C13, Lt), s(C4, Le)]]),
        (2, vec![vec![b(Gt, one), s(C13, Ge), s(C4, Le)]]),
        (2, vec![vec![b(Gt, one), s(C4, Gt), s(C6, Lt), s(C13, Ge)]]),
        (1, vec![vec![s(C6, Eq), a(Gt, t), a(Lt, one)]]),
        (2, vec![vec![a(Lt, one), b(Gt, one), s(C6, Gt)]]),
        (1, vec![vec![a(Eq, one), b(Gt, one), b(Lt, three_halves)]]),
        (2, vec![vec![s(C13, Lt), s(C4, Gt), s(C12, Le)]]),
        (2, vec![vec![s(C12, Gt), s(C4, Gt), s(C11, Lt), b(Gt, one)]]),
        (0, vec![vec![a(Eq, one), b(Eq, three_halves)]]),
        (1, vec![vec![s(C11, Eq), a(Gt, K::ADoublePrime), a(Lt, one)]]),
        (2, vec![vec![s(C11, Gt), s(C4, Gt), s(C14, Lt)]]),
        (1, vec![vec![s(C14, Eq), b(Gt, three_halves), b(Lt, K::BDoublePrime)]]),
        (2, vec![vec![s(C14, Gt), s(C4, Gt), s(C10, Gt), a(Lt, one)]]),
        (1, vec![vec![a(Eq, one), b(Gt, three_halves), b(Lt, two)]]),
        (1, vec![vec![s(C11, Eq), a(Gt, K::InvSqrt2), a(Le, K::ADoublePrime)]]),
        (2, vec![vec![s(C11, Gt), s(C4, Le), s(C14, Lt), s(C10, Gt)]]),
        (1, vec![vec![s(C11, Eq), b(Ge, K::OnePlusInvSqrt2)]]),
        (2, vec![vec![s(C11, Gt), s(C10, Le), s(C14, Lt)]]),
        (1, vec![vec![s(C14, Eq), b(Ge, K::BDoublePrime), b(Lt, K::BTriplePrime)]]),
        (2, vec![vec![s(C14, Gt), s(C4, Le), s(C10, Gt)]]),
        (1, vec![vec![s(C14, Eq), b(Ge, K::BTriplePrime)]]),
        (2, vec![vec![s(C14, Gt), s(C4, Le), s(C10, Le)]]),
        (2, vec![vec![s(C4, Gt), s(C10, Le), a(Lt, one)]]),
        (1, vec![vec![a(Eq, one), b(Ge, two)]]),
    ];
    rows.into_iter()
        .enumerate()
        .map(|(i, (dimension, clauses))| ClassDefinition { id: ClassId(i as u8 + 1), dimension, clauses })
        .collect()
}

/// The labels that can be strictly shortest somewhere on `F` for boxes of
/// the class.
pub fn allowed_smallest(id: ClassId) -> Vec<PathLabel> {
    use PathLabel as P;
    let set: &[PathLabel] = match id.get() {
        1 => &[P::R0],
        2 | 6 => &[P::R0, P::U0],
        3..=5 | 10 | 11 => &[P::R0, P::U0, P::U1],
        7..=9 => &[P::R0, P::U1],
        12..=15 | 17 => &[P::R0, P::R1, P::U0, P::U1],
        16 => &[P::R0, P::R1, P::U1],
        18 | 25 => &[P::R0, P::R1],
        19..=21 | 26..=29 | 32 => &[P::R0, P::R1, P::U0],
        22 | 23 | 38..=45 => &[P::R0, P::R1, P::R2, P::U2],
        24 => &[P::R0, P::R1, P::U2],
        30 => &[P::R0, P::R1, P::U0, P::U2],
        31 | 33..=37 | 46 | 47 => &[P::R0, P::R1, P::R2, P::U0, P::U2],
        _ => unreachable!("ClassId is in range"),
    };
    set.to_vec()
}
