//! Closed-form squared distances from a point on the top face to its antipode.
//!
//! The box has a 1 x `a` top face centred at the origin and height `b`.  A
//! point `(x, y)` of the fundamental quarter `F = [0, a/2] x [0, 1/2]` is joined
//! to `(-x, -y)` on the bottom face.  Every straight path in an unfolding is
//! named by the first side face it enters (`R`, `U`, `L`, `D`) and a wrap index
//! `j`: the path crosses `|j| + 3` faces, turning clockwise (seen from above)
//! for `j > 0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("box dimensions must satisfy 0 < a <= 1 and b > 0 (got a = {a}, b = {b})")]
    Dims { a: f64, b: f64 },
    #[error("point ({x}, {y}) is outside the fundamental region [0, {half_a}] x [0, 0.5]")]
    Point { x: f64, y: f64, half_a: f64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistanceError {
    #[error("no closed form for path label {0}")]
    UnsupportedLabel(PathLabel),
    #[error("cannot parse path label {0:?}")]
    BadLabel(String),
}

/// Slack for points that sit on the boundary of `F` up to rounding.
const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxDims {
    a: f64,
    b: f64,
}

impl BoxDims {
    pub fn new(a: f64, b: f64) -> Result<Self, DomainError> {
        if a.is_finite() && b.is_finite() && a > 0.0 && a <= 1.0 && b > 0.0 {
            Ok(BoxDims { a, b })
        } else {
            Err(DomainError::Dims { a, b })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `(a + 1) / 2`, which shows up in every one-wrap unfolding.
    pub fn a1(&self) -> f64 {
        (self.a + 1.0) / 2.0
    }

    pub fn half_a(&self) -> f64 {
        self.a / 2.0
    }
}

/// A point of the fundamental region of the top face.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    x: f64,
    y: f64,
}

impl SurfacePoint {
    /// Accepts the closed region; coordinates within rounding of a side are
    /// clamped onto it.
    pub fn new(dims: &BoxDims, x: f64, y: f64) -> Result<Self, DomainError> {
        let half_a = dims.half_a();
        let ok = x.is_finite()
            && y.is_finite()
            && (-BOUNDARY_SLACK..=half_a + BOUNDARY_SLACK).contains(&x)
            && (-BOUNDARY_SLACK..=0.5 + BOUNDARY_SLACK).contains(&y);
        if !ok {
            return Err(DomainError::Point { x, y, half_a });
        }
        Ok(SurfacePoint { x: x.clamp(0.0, half_a), y: y.clamp(0.0, 0.5) })
    }

    pub(crate) fn raw(x: f64, y: f64) -> Self {
        SurfacePoint { x, y }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

/// Side face first entered by a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    R,
    U,
    L,
    D,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::R, Direction::U, Direction::L, Direction::D];

    fn letter(self) -> char {
        match self {
            Direction::R => 'R',
            Direction::U => 'U',
            Direction::L => 'L',
            Direction::D => 'D',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathLabel {
    pub direction: Direction,
    pub wrap: i8,
}

impl PathLabel {
    pub const R0: PathLabel = PathLabel::new(Direction::R, 0);
    pub const R1: PathLabel = PathLabel::new(Direction::R, 1);
    pub const R2: PathLabel = PathLabel::new(Direction::R, 2);
    pub const U0: PathLabel = PathLabel::new(Direction::U, 0);
    pub const U1: PathLabel = PathLabel::new(Direction::U, 1);
    pub const U2: PathLabel = PathLabel::new(Direction::U, 2);
    pub const L1: PathLabel = PathLabel::new(Direction::L, 1);
    pub const L2: PathLabel = PathLabel::new(Direction::L, 2);
    pub const D1: PathLabel = PathLabel::new(Direction::D, 1);
    pub const D2: PathLabel = PathLabel::new(Direction::D, 2);

    pub const fn new(direction: Direction, wrap: i8) -> Self {
        PathLabel { direction, wrap }
    }

    /// Number of faces the path visits, top and bottom included.
    pub fn faces_crossed(&self) -> usize {
        self.wrap.unsigned_abs() as usize + 3
    }

    /// The label of the mirror path with the same length on every box.
    pub fn twin(&self) -> PathLabel {
        use Direction::*;
        match (self.direction, self.wrap) {
            (d, 2) => PathLabel::new(d, -2),
            (d, -2) => PathLabel::new(d, 2),
            (R, 1) => PathLabel::new(U, -1),
            (U, -1) => PathLabel::new(R, 1),
            (U, 1) => PathLabel::new(L, -1),
            (L, -1) => PathLabel::new(U, 1),
            (L, 1) => PathLabel::new(D, -1),
            (D, -1) => PathLabel::new(L, 1),
            (D, 1) => PathLabel::new(R, -1),
            (R, -1) => PathLabel::new(D, 1),
            (R, 0) => PathLabel::new(L, 0),
            (L, 0) => PathLabel::new(R, 0),
            (U, 0) => PathLabel::new(D, 0),
            (D, 0) => PathLabel::new(U, 0),
            (d, j) => PathLabel::new(d, j),
        }
    }
}

impl fmt::Display for PathLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.direction.letter(), self.wrap)
    }
}

impl FromStr for PathLabel {
    type Err = DistanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DistanceError::BadLabel(s.to_string());
        let mut chars = s.trim().chars();
        let direction = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('R') => Direction::R,
            Some('U') => Direction::U,
            Some('L') => Direction::L,
            Some('D') => Direction::D,
            _ => return Err(bad()),
        };
        let wrap: i8 = chars.as_str().parse().map_err(|_| bad())?;
        Ok(PathLabel::new(direction, wrap))
    }
}

impl Serialize for PathLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PathLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All labels with a closed form, in table order.
pub const TABLE_LABELS: [PathLabel; 10] = [
    PathLabel::R0,
    PathLabel::R1,
    PathLabel::R2,
    PathLabel::U0,
    PathLabel::U1,
    PathLabel::U2,
    PathLabel::L1,
    PathLabel::L2,
    PathLabel::D1,
    PathLabel::D2,
];

/// The six candidates that can be shortest on `F`, in tie-break order.
pub const CANONICAL_SIX: [PathLabel; 6] =
    [PathLabel::R0, PathLabel::R1, PathLabel::R2, PathLabel::U0, PathLabel::U1, PathLabel::U2];

/// Coefficients of an affine form in `(1, a, b, x, y)`.
pub type Affine = [f64; 5];

/// The unfolded image of the antipode as two affine forms, or `None` when the
/// label has no closed form.
pub fn opposite_affine(label: PathLabel) -> Option<[Affine; 2]> {
    let h = 0.5;
    let forms = match label {
        PathLabel::R0 => [[0.0, 1.0, 1.0, 1.0, 0.0], [0.0, 0.0, 0.0, 0.0, -1.0]],
        PathLabel::R1 => [[h, h, 1.0, 0.0, -1.0], [-h, -h, 0.0, -1.0, 0.0]],
        PathLabel::R2 => [[0.0, 1.0, 1.0, -1.0, 0.0], [-1.0, -1.0, 0.0, 0.0, 1.0]],
        PathLabel::U0 => [[0.0, 0.0, 0.0, -1.0, 0.0], [1.0, 0.0, 1.0, 0.0, 1.0]],
        PathLabel::U1 => [[h, h, 0.0, 0.0, 1.0], [h, h, 1.0, 1.0, 0.0]],
        PathLabel::U2 => [[1.0, 1.0, 0.0, 1.0, 0.0], [1.0, 0.0, 1.0, 0.0, -1.0]],
        PathLabel::L1 => [[-h, -h, -1.0, 0.0, -1.0], [h, h, 0.0, -1.0, 0.0]],
        PathLabel::L2 => [[0.0, -1.0, -1.0, -1.0, 0.0], [1.0, 1.0, 0.0, 0.0, 1.0]],
        PathLabel::D1 => [[-h, -h, 0.0, 0.0, 1.0], [-h, -h, -1.0, 1.0, 0.0]],
        PathLabel::D2 => [[-1.0, -1.0, 0.0, 1.0, 0.0], [-1.0, 0.0, -1.0, 0.0, -1.0]],
        _ => return None,
    };
    Some(forms)
}

fn eval_affine(form: &Affine, dims: &BoxDims, p: &SurfacePoint) -> f64 {
    form[0] + form[1] * dims.a + form[2] * dims.b + form[3] * p.x + form[4] * p.y
}

/// Image of the antipode in the plane of the top face after unfolding along
/// `label`.
pub fn unfolded_opposite(
    label: PathLabel,
    dims: &BoxDims,
    p: &SurfacePoint,
) -> Result<(f64, f64), DistanceError> {
    let [fx, fy] = opposite_affine(label).ok_or(DistanceError::UnsupportedLabel(label))?;
    Ok((eval_affine(&fx, dims, p), eval_affine(&fy, dims, p)))
}

/// Squared length of the straight path for `label`, from the expanded
/// polynomial rather than the unfolded coordinates.
pub fn squared_distance(label: PathLabel, dims: &BoxDims, p: &SurfacePoint) -> Result<f64, DistanceError> {
    let (a, b) = (dims.a, dims.b);
    let (x, y) = (p.x, p.y);
    // shared constant of the one-wrap family
    let k1 = || (a / 2.0 + b + 1.0) * a + (b + 1.0) * b + 0.5;
    let k2 = || a * (2.0 * a + 2.0 * b + 2.0) + b * b + 1.0;
    let k3 = || a * (a + 2.0) + b * (b + 2.0) + 2.0;
    let s = x + y;
    let t = x - y;
    let v = match label {
        PathLabel::R0 => 4.0 * y * y + (a + b) * (a + b),
        PathLabel::R1 => s * (2.0 * s - 2.0 * b) + k1(),
        PathLabel::R2 => x * (4.0 * x - 4.0 * (a + b)) + k2(),
        PathLabel::U0 => 4.0 * x * x + (b + 1.0) * (b + 1.0),
        PathLabel::U1 => t * (2.0 * t + 2.0 * b) + k1(),
        PathLabel::U2 => y * (4.0 * y - 4.0 * b - 4.0) + k3(),
        PathLabel::L1 => s * (2.0 * s + 2.0 * b) + k1(),
        PathLabel::L2 => x * (4.0 * x + 4.0 * (a + b)) + k2(),
        PathLabel::D1 => t * (2.0 * t - 2.0 * b) + k1(),
        PathLabel::D2 => y * (4.0 * y + 4.0 * b + 4.0) + k3(),
        _ => return Err(DistanceError::UnsupportedLabel(label)),
    };
    Ok(v)
}

pub(crate) fn six_values(dims: &BoxDims, p: &SurfacePoint) -> [f64; 6] {
    CANONICAL_SIX.map(|l| squared_distance(l, dims, p).expect("canonical label"))
}

pub const DEFAULT_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinResult {
    /// Smallest squared distance over the six candidates.
    pub value: f64,
    /// Every candidate within the tie tolerance of `value`, in tie-break order.
    pub argmin: Vec<PathLabel>,
    pub geodesic: f64,
}

/// Minimum over the six canonical candidates.  Labels within `tie_tol`
/// (relative) of the minimum are all reported.
pub fn min_over_six(dims: &BoxDims, p: &SurfacePoint, tie_tol: f64) -> MinResult {
    let vals = six_values(dims, p);
    let value = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let cut = value + tie_tol * value.abs();
    let argmin = CANONICAL_SIX.iter().zip(vals.iter()).filter(|(_, &v)| v <= cut).map(|(&l, _)| l).collect();
    MinResult { value, argmin, geodesic: value.sqrt() }
}

/// `[d_L2 - d_R2, d_D2 - d_U2, d_L1 - d_D1]`.  All three are `>= 0` on `F`;
/// together with their twins they cut the ten candidates down to six.
pub fn dominance_gaps(dims: &BoxDims, p: &SurfacePoint) -> [f64; 3] {
    let d = |l| squared_distance(l, dims, p).expect("table label");
    [
        d(PathLabel::L2) - d(PathLabel::R2),
        d(PathLabel::D2) - d(PathLabel::U2),
        d(PathLabel::L1) - d(PathLabel::D1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(a: f64, b: f64) -> BoxDims {
        BoxDims::new(a, b).unwrap()
    }

    #[test]
    fn spider_and_fly_room() {
        // 12 x 12 x 30 room, spider 1 foot below the ceiling, fly 1 foot above the floor
        let d = dims(1.0, 2.5);
        let p = SurfacePoint::new(&d, 0.0, 5.0 / 12.0).unwrap();
        let u0 = squared_distance(PathLabel::U0, &d, &p).unwrap();
        assert!((u0 - 12.25).abs() < 1e-12);
        let u2 = squared_distance(PathLabel::U2, &d, &p).unwrap();
        assert!((u2 - 100.0 / 9.0).abs() < 1e-12);
        assert!((u2.sqrt() * 12.0 - 40.0).abs() < 1e-12);
        let m = min_over_six(&d, &p, DEFAULT_TIE_TOL);
        assert!((m.value - 100.0 / 9.0).abs() < 1e-12);
        assert!(m.argmin.contains(&PathLabel::U2));
    }

    #[test]
    fn border_points_of_the_tall_room() {
        let d = dims(1.0, 2.5);
        let at = |y: f64| min_over_six(&d, &SurfacePoint::new(&d, 0.0, y).unwrap(), DEFAULT_TIE_TOL);
        assert!(at(1.0 / 12.0).argmin.contains(&PathLabel::U0));
        assert!(at(3.0 / 12.0).argmin.contains(&PathLabel::R1));
    }

    #[test]
    fn one_wrap_versus_direct() {
        let d = dims(0.8, 0.7);
        let p = SurfacePoint::new(&d, 0.3, 0.2).unwrap();
        let d1 = squared_distance(PathLabel::D1, &d, &p).unwrap();
        let r0 = squared_distance(PathLabel::R0, &d, &p).unwrap();
        assert!((d1 - 3.25).abs() < 1e-12);
        assert!((r0 - 2.41).abs() < 1e-12);
    }

    #[test]
    fn unfolded_examples() {
        let d = dims(1.0, 1.0);
        let o = unfolded_opposite(PathLabel::U1, &d, &SurfacePoint::new(&d, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(o, (1.0, 2.0));
        let d = dims(0.5, 2.0);
        let p = SurfacePoint::new(&d, 0.25, 0.5).unwrap();
        let o = unfolded_opposite(PathLabel::R2, &d, &p).unwrap();
        assert_eq!(o, (2.25, -1.0));
        let sq = (o.0 - 0.25).powi(2) + (o.1 - 0.5).powi(2);
        assert!((sq - squared_distance(PathLabel::R2, &d, &p).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn dominance_examples() {
        let d = dims(0.6, 1.3);
        let g = dominance_gaps(&d, &SurfacePoint::new(&d, 0.0, 0.2).unwrap());
        assert!(g[0].abs() < 1e-12);
        let g = dominance_gaps(&d, &SurfacePoint::new(&d, 0.2, 0.0).unwrap());
        assert!(g[1].abs() < 1e-12);
        let d = dims(1.0, 1.0);
        let g = dominance_gaps(&d, &SurfacePoint::new(&d, 0.5, 0.5).unwrap());
        assert!(g.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn centre_point() {
        let d = dims(1.0, 1.0);
        let p = SurfacePoint::new(&d, 0.0, 0.0).unwrap();
        let r0 = squared_distance(PathLabel::R0, &d, &p).unwrap();
        let u0 = squared_distance(PathLabel::U0, &d, &p).unwrap();
        assert_eq!(r0, 4.0);
        assert_eq!(u0, 4.0);
        let m = min_over_six(&d, &p, DEFAULT_TIE_TOL);
        assert_eq!(m.value, 4.0);
        assert!(m.argmin.contains(&PathLabel::R0) && m.argmin.contains(&PathLabel::U0));
    }

    #[test]
    fn corner_point() {
        let d = dims(1.0, 1.0);
        let p = SurfacePoint::new(&d, 0.5, 0.5).unwrap();
        let r1 = squared_distance(PathLabel::R1, &d, &p).unwrap();
        assert_eq!(r1, 5.0);
        assert_eq!(unfolded_opposite(PathLabel::R1, &d, &p).unwrap(), (1.5, -1.5));
    }

    #[test]
    fn labels_outside_the_table_are_rejected() {
        let d = dims(1.0, 1.0);
        let p = SurfacePoint::new(&d, 0.1, 0.1).unwrap();
        for l in [PathLabel::new(Direction::R, 3), PathLabel::new(Direction::U, -1)] {
            assert_eq!(squared_distance(l, &d, &p), Err(DistanceError::UnsupportedLabel(l)));
            assert!(unfolded_opposite(l, &d, &p).is_err());
        }
    }

    #[test]
    fn domain_checks() {
        assert!(BoxDims::new(0.0, 1.0).is_err());
        assert!(BoxDims::new(1.5, 1.0).is_err());
        assert!(BoxDims::new(0.5, -1.0).is_err());
        assert!(BoxDims::new(f64::NAN, 1.0).is_err());
        let d = dims(0.5, 1.0);
        assert!(SurfacePoint::new(&d, 0.3, 0.1).is_err());
        assert!(SurfacePoint::new(&d, 0.1, -0.1).is_err());
        assert!(SurfacePoint::new(&d, 0.25, 0.5).is_ok());
    }

    #[test]
    fn label_text_round_trip() {
        for l in TABLE_LABELS {
            assert_eq!(l.to_string().parse::<PathLabel>().unwrap(), l);
        }
        assert_eq!("U-1".parse::<PathLabel>().unwrap(), PathLabel::new(Direction::U, -1));
        assert!("Q1".parse::<PathLabel>().is_err());
        assert!("R".parse::<PathLabel>().is_err());
    }

    #[test]
    fn tie_break_order() {
        let mut v = CANONICAL_SIX.to_vec();
        v.reverse();
        v.sort();
        assert_eq!(v, CANONICAL_SIX.to_vec());
    }
}
