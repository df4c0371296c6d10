//! Difference conics `d_alpha - d_beta = 0` and their traces on the sides of `F`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::mpoly::{q, q_from_f64, q_to_f64, MPoly, Var, Q};
use super::AlgebraError;
use crate::distances::{opposite_affine, BoxDims, PathLabel, CANONICAL_SIX};

/// `|p - p_label|^2` as an exact polynomial in `a, b, x, y`.
pub fn distance_poly(label: PathLabel) -> Result<MPoly, AlgebraError> {
    let [fx, fy] = opposite_affine(label).ok_or(AlgebraError::NoClosedForm(label))?;
    let dx = &MPoly::affine(&fx) - &MPoly::var(Var::X);
    let dy = &MPoly::affine(&fy) - &MPoly::var(Var::Y);
    Ok(&(&dx * &dx) + &(&dy * &dy))
}

/// A conic `xx x^2 + xy x y + yy y^2 + x x + y y + c` with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneConic {
    pub xx: Q,
    pub xy: Q,
    pub yy: Q,
    pub x: Q,
    pub y: Q,
    pub c: Q,
}

impl PlaneConic {
    pub fn from_mpoly(p: &MPoly) -> Self {
        let get = |ex: u32, ey: u32| {
            p.terms().find(|(e, _)| e[2] == ex && e[3] == ey).map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
        };
        PlaneConic { xx: get(2, 0), xy: get(1, 1), yy: get(0, 2), x: get(1, 0), y: get(0, 1), c: get(0, 0) }
    }

    pub fn to_mpoly(&self) -> MPoly {
        let x = MPoly::var(Var::X);
        let y = MPoly::var(Var::Y);
        let mut p = MPoly::constant(self.c.clone());
        p = &p + &x.scale(&self.x);
        p = &p + &y.scale(&self.y);
        p = &p + &(&x * &x).scale(&self.xx);
        p = &p + &(&x * &y).scale(&self.xy);
        p = &p + &(&y * &y).scale(&self.yy);
        p
    }

    pub fn coefficients(&self) -> [&Q; 6] {
        [&self.xx, &self.xy, &self.yy, &self.x, &self.y, &self.c]
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients().iter().all(|c| c.is_zero())
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let f = q_to_f64;
        f(&self.xx) * x * x
            + f(&self.xy) * x * y
            + f(&self.yy) * y * y
            + f(&self.x) * x
            + f(&self.y) * y
            + f(&self.c)
    }

    pub fn gradient_f64(&self, x: f64, y: f64) -> (f64, f64) {
        let f = q_to_f64;
        (
            2.0 * f(&self.xx) * x + f(&self.xy) * y + f(&self.x),
            f(&self.xy) * x + 2.0 * f(&self.yy) * y + f(&self.y),
        )
    }

    /// `xy^2 - 4 xx yy`.
    pub fn discriminant(&self) -> Q {
        &self.xy * &self.xy - q(4) * &self.xx * &self.yy
    }

    /// Four times the determinant of the symmetric 3x3 matrix of the conic.
    /// Zero exactly when a conic with nonzero quadratic part splits into lines.
    pub fn matrix_det(&self) -> Q {
        let (a, b, c, d, e, f) = (&self.xx, &self.xy, &self.yy, &self.x, &self.y, &self.c);
        q(4) * a * c * f + b * e * d - a * e * e - c * d * d - f * b * b
    }

    fn max_abs_coefficient(&self) -> Q {
        self.coefficients().iter().map(|c| c.abs()).fold(Q::zero(), |m, c| if c > m { c } else { m })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicCoeffs {
    pub alpha: PathLabel,
    pub beta: PathLabel,
    /// Coefficients of `x^2`, `xy`, `y^2`; the same for every box.
    pub gamma: Q,
    pub delta: Q,
    pub phi: Q,
    /// Coefficients of `x` and `y`, linear in `a, b`.
    pub l1: MPoly,
    pub l2: MPoly,
    /// Constant term, quadratic in `a, b`.
    pub q: MPoly,
    pub a: Q,
    pub b: Q,
    pub plane: PlaneConic,
}

impl ConicCoeffs {
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.plane.eval_f64(x, y)
    }

    pub fn symbolic(&self) -> MPoly {
        let x = MPoly::var(Var::X);
        let y = MPoly::var(Var::Y);
        let mut p = self.q.clone();
        p = &p + &(&self.l1 * &x);
        p = &p + &(&self.l2 * &y);
        p = &p + &(&x * &x).scale(&self.gamma);
        p = &p + &(&x * &y).scale(&self.delta);
        &p + &(&y * &y).scale(&self.phi)
    }
}

fn check_pair(alpha: PathLabel, beta: PathLabel) -> Result<(), AlgebraError> {
    if alpha == beta {
        return Err(AlgebraError::SameLabel(alpha));
    }
    for l in [alpha, beta] {
        if !CANONICAL_SIX.contains(&l) {
            return Err(AlgebraError::NotCanonical(l));
        }
    }
    Ok(())
}

/// `d_alpha - d_beta` with exact coefficients, instantiated at `(a, b)`.
pub fn pair_conic_exact(
    alpha: PathLabel,
    beta: PathLabel,
    a: &Q,
    b: &Q,
) -> Result<ConicCoeffs, AlgebraError> {
    check_pair(alpha, beta)?;
    let diff = &distance_poly(alpha)? - &distance_poly(beta)?;
    let by_x = diff.coeffs_in(Var::X);
    let at = |v: &[MPoly], k: usize| v.get(k).cloned().unwrap_or_else(MPoly::zero);
    let c0 = at(&by_x, 0).coeffs_in(Var::Y);
    let c1 = at(&by_x, 1).coeffs_in(Var::Y);
    let c2 = at(&by_x, 2);
    let konst = |p: MPoly| p.constant_value().expect("constant quadratic part");
    let gamma = konst(c2);
    let delta = konst(at(&c1, 1));
    let phi = konst(at(&c0, 2));
    let l1 = at(&c1, 0);
    let l2 = at(&c0, 1);
    let qq = at(&c0, 0);
    let inst =
        |p: &MPoly| p.substitute(Var::A, a).substitute(Var::B, b).constant_value().expect("only a and b");
    let plane = PlaneConic {
        xx: gamma.clone(),
        xy: delta.clone(),
        yy: phi.clone(),
        x: inst(&l1),
        y: inst(&l2),
        c: inst(&qq),
    };
    Ok(ConicCoeffs { alpha, beta, gamma, delta, phi, l1, l2, q: qq, a: a.clone(), b: b.clone(), plane })
}

pub fn pair_conic(alpha: PathLabel, beta: PathLabel, dims: &BoxDims) -> Result<ConicCoeffs, AlgebraError> {
    pair_conic_exact(alpha, beta, &q_from_f64(dims.a()), &q_from_f64(dims.b()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicKind {
    Line,
    Hyperbola,
    /// A pair of crossing lines.
    DegenerateHyperbola,
}

/// How a quantity that should vanish is compared with zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroTest {
    Exact,
    /// Zero when `|value| <= tol * scale`.
    Relative(f64),
}

pub const DEFAULT_RELATIVE_TOL: f64 = 1e-12;

impl ZeroTest {
    fn is_zero(&self, value: &Q, scale: &Q) -> bool {
        match self {
            ZeroTest::Exact => value.is_zero(),
            ZeroTest::Relative(tol) => value.abs() <= q_from_f64(*tol) * scale,
        }
    }
}

pub fn conic_classify(c: &ConicCoeffs) -> Result<ConicKind, AlgebraError> {
    conic_classify_with(&c.plane, ZeroTest::Relative(DEFAULT_RELATIVE_TOL))
}

pub fn conic_classify_with(c: &PlaneConic, test: ZeroTest) -> Result<ConicKind, AlgebraError> {
    if c.is_zero() {
        return Err(AlgebraError::ZeroConic);
    }
    let quad_zero = c.xx.is_zero() && c.xy.is_zero() && c.yy.is_zero();
    if quad_zero {
        if c.x.is_zero() && c.y.is_zero() {
            return Err(AlgebraError::EmptyConic);
        }
        return Ok(ConicKind::Line);
    }
    if !c.discriminant().is_positive() {
        return Err(AlgebraError::NotHyperbolic);
    }
    let m = c.max_abs_coefficient();
    let scale = &m * &m * &m;
    if test.is_zero(&c.matrix_det(), &scale) {
        Ok(ConicKind::DegenerateHyperbola)
    } else {
        Ok(ConicKind::Hyperbola)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `x = 0`, parametrised by `y`.
    X0,
    /// `x = a/2`, parametrised by `y`.
    XHalf,
    /// `y = 0`, parametrised by `x`.
    Y0,
    /// `y = 1/2`, parametrised by `x`.
    YHalf,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::X0, Side::XHalf, Side::Y0, Side::YHalf];

    /// Length of the side for a box with top face `1 x a`.
    pub fn length(&self, a: &Q) -> Q {
        match self {
            Side::X0 | Side::XHalf => super::mpoly::qf(1, 2),
            Side::Y0 | Side::YHalf => a / q(2),
        }
    }

    /// The fixed coordinate of the side.
    pub fn offset(&self, a: &Q) -> Q {
        match self {
            Side::X0 | Side::Y0 => Q::zero(),
            Side::XHalf => a / q(2),
            Side::YHalf => super::mpoly::qf(1, 2),
        }
    }

    /// Point of the side at parameter `t`.
    pub fn point(&self, a: f64, t: f64) -> (f64, f64) {
        match self {
            Side::X0 => (0.0, t),
            Side::XHalf => (a / 2.0, t),
            Side::Y0 => (t, 0.0),
            Side::YHalf => (t, 0.5),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Side::X0 => "x=0",
            Side::XHalf => "x=a/2",
            Side::Y0 => "y=0",
            Side::YHalf => "y=1/2",
        }
    }
}

/// Exact restriction `A t^2 + B t + C` of a conic to a side.
pub fn restrict_to_side(c: &PlaneConic, side: Side, a: &Q) -> [Q; 3] {
    let s = side.offset(a);
    match side {
        Side::X0 | Side::XHalf => [c.yy.clone(), &c.xy * &s + &c.y, &c.xx * &s * &s + &c.x * &s + &c.c],
        Side::Y0 | Side::YHalf => [c.xx.clone(), &c.xy * &s + &c.x, &c.yy * &s * &s + &c.y * &s + &c.c],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SideContact {
    Point {
        side: Side,
        x: f64,
        y: f64,
        /// Parameter along the side (`y` on vertical sides, `x` on horizontal ones).
        t: f64,
        multiplicity: u8,
    },
    /// The conic contains the whole side.
    WholeSide { side: Side },
}

pub fn side_intersections(c: &ConicCoeffs) -> Vec<SideContact> {
    side_intersections_with(&c.plane, &c.a, ZeroTest::Exact)
}

/// Intersections of the conic with each closed side of `F` for top-face
/// width `a`.  `tangency` decides when the restricted quadratic has a double
/// root.
pub fn side_intersections_with(c: &PlaneConic, a: &Q, tangency: ZeroTest) -> Vec<SideContact> {
    let af = q_to_f64(a);
    let mut out = Vec::new();
    for side in Side::ALL {
        let len = side.length(a);
        let lenf = q_to_f64(&len);
        let [qa, qb, qc] = restrict_to_side(c, side, a);
        let mut push = |t: f64, multiplicity: u8| {
            let slack = 1e-12 * lenf.max(1e-300);
            if t >= -slack && t <= lenf + slack {
                let t = t.clamp(0.0, lenf);
                let (x, y) = side.point(af, t);
                out.push(SideContact::Point { side, x, y, t, multiplicity });
            }
        };
        if qa.is_zero() {
            if qb.is_zero() {
                if qc.is_zero() {
                    out.push(SideContact::WholeSide { side });
                }
                continue;
            }
            push(q_to_f64(&(-&qc / &qb)), 1);
            continue;
        }
        let disc = &qb * &qb - q(4) * &qa * &qc;
        let scale = &qb * &qb + (q(4) * &qa * &qc).abs();
        if disc.is_zero() || tangency.is_zero(&disc, &scale) {
            push(q_to_f64(&(-&qb / (q(2) * &qa))), 2);
            continue;
        }
        if disc.is_negative() {
            continue;
        }
        let (fa, fb, fc) = (q_to_f64(&qa), q_to_f64(&qb), q_to_f64(&qc));
        let sq = q_to_f64(&disc).sqrt();
        let qq = -0.5 * (fb + fb.signum() * sq);
        let (r1, r2) = if qq == 0.0 { (sq / (2.0 * fa), -sq / (2.0 * fa)) } else { (qq / fa, fc / qq) };
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        push(lo, 1);
        push(hi, 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::mpoly::{constant_ratio, qf};
    use crate::distances::{squared_distance, SurfacePoint};

    fn a() -> MPoly {
        MPoly::var(Var::A)
    }
    fn b() -> MPoly {
        MPoly::var(Var::B)
    }
    fn x() -> MPoly {
        MPoly::var(Var::X)
    }
    fn y() -> MPoly {
        MPoly::var(Var::Y)
    }
    fn k(n: i64) -> MPoly {
        MPoly::constant(q(n))
    }

    #[test]
    fn distance_polys_match_closed_forms() {
        let d = BoxDims::new(0.7, 1.3).unwrap();
        let p = SurfacePoint::new(&d, 0.21, 0.37).unwrap();
        for l in crate::distances::TABLE_LABELS {
            let v = distance_poly(l).unwrap().eval_f64([0.7, 1.3, 0.21, 0.37]);
            let w = squared_distance(l, &d, &p).unwrap();
            assert!((v - w).abs() < 1e-12 * w, "{l}");
        }
    }

    #[test]
    fn the_two_lines() {
        let c = pair_conic_exact(PathLabel::R0, PathLabel::U2, &qf(1, 2), &q(1)).unwrap();
        assert_eq!(conic_classify(&c).unwrap(), ConicKind::Line);
        // (2b+2)y + ab - a - b - 1
        let want = &(&(&(&(&b().scale(&q(2)) + &k(2)) * &y()) + &(&a() * &b())) - &a()) - &(&b() + &k(1));
        assert!(constant_ratio(&c.symbolic(), &want).is_some());

        let c = pair_conic_exact(PathLabel::R2, PathLabel::U0, &qf(1, 2), &q(1)).unwrap();
        assert_eq!(conic_classify(&c).unwrap(), ConicKind::Line);
        // (2a+2b)x - a^2 - ab - a + b
        let want =
            &(&(&(&(&a() + &b()).scale(&q(2)) * &x()) - &(&a() * &a())) - &(&a() * &b())) - &(&a() - &b());
        assert!(constant_ratio(&c.symbolic(), &want).is_some());
    }

    #[test]
    fn r1_u1_factors() {
        let c = pair_conic_exact(PathLabel::R1, PathLabel::U1, &q(1), &q(1)).unwrap();
        assert_eq!((c.gamma.clone(), c.delta.clone(), c.phi.clone()), (q(0), q(8), q(0)));
        let want = &(&x() * &(&y().scale(&q(2)) - &b())).scale(&q(4));
        assert_eq!(c.symbolic(), *want);
    }

    #[test]
    fn classification_examples() {
        let c = pair_conic_exact(PathLabel::R0, PathLabel::R1, &qf(1, 2), &qf(1, 2)).unwrap();
        assert_eq!(conic_classify(&c).unwrap(), ConicKind::Hyperbola);
        let a0 = 0.6;
        let b0 = (2f64.sqrt() + 1.0) * a0 - 1.0;
        let c = pair_conic(PathLabel::R1, PathLabel::U0, &BoxDims::new(a0, b0).unwrap()).unwrap();
        assert_eq!(conic_classify(&c).unwrap(), ConicKind::DegenerateHyperbola);
        let zero = PlaneConic::from_mpoly(&MPoly::zero());
        assert_eq!(conic_classify_with(&zero, ZeroTest::Exact), Err(AlgebraError::ZeroConic));
    }

    #[test]
    fn antisymmetry() {
        for &p in &CANONICAL_SIX {
            for &r in &CANONICAL_SIX {
                if p == r {
                    continue;
                }
                let c1 = pair_conic_exact(p, r, &qf(3, 5), &qf(7, 4)).unwrap();
                let c2 = pair_conic_exact(r, p, &qf(3, 5), &qf(7, 4)).unwrap();
                assert_eq!(c1.symbolic(), -&c2.symbolic());
            }
        }
        assert!(pair_conic_exact(PathLabel::R0, PathLabel::R0, &q(1), &q(1)).is_err());
        assert!(pair_conic_exact(PathLabel::R0, PathLabel::L1, &q(1), &q(1)).is_err());
    }

    fn touches(contacts: &[SideContact], px: f64, py: f64) -> bool {
        contacts.iter().any(|c| match c {
            SideContact::Point { x, y, .. } => (x - px).abs() < 1e-12 && (y - py).abs() < 1e-12,
            SideContact::WholeSide { .. } => false,
        })
    }

    #[test]
    fn side_examples() {
        // a + 2b - 2 = 0 at (1, 1/2)
        let c = pair_conic_exact(PathLabel::R0, PathLabel::R1, &q(1), &qf(1, 2)).unwrap();
        assert!(touches(&side_intersections(&c), 0.0, 0.5));
        // a^2 + 2ab - 2b = 0 at a = 1/2, b = 1/4 / (2 - 1) ... b = a^2 / (2 - 2a)
        let (a0, b0) = (qf(1, 2), qf(1, 4));
        let c = pair_conic_exact(PathLabel::R0, PathLabel::U0, &a0, &b0).unwrap();
        assert!(touches(&side_intersections(&c), 0.0, 0.5));
        // a - b + 1 = 0: tangent to x = a/2 at (a/2, 1/2)
        let (a0, b0) = (qf(1, 2), qf(3, 2));
        let c = pair_conic_exact(PathLabel::R1, PathLabel::R2, &a0, &b0).unwrap();
        let hit = side_intersections(&c)
            .into_iter()
            .find(|s| matches!(s, SideContact::Point { side: Side::XHalf, .. }));
        match hit {
            Some(SideContact::Point { y, multiplicity, .. }) => {
                assert_eq!(multiplicity, 2);
                assert!((y - 0.5).abs() < 1e-12);
            }
            other => panic!("expected tangency, got {other:?}"),
        }
    }

    #[test]
    fn whole_side() {
        // d_R1 - d_U1 = 4x(2y - b) vanishes on x = 0
        let c = pair_conic_exact(PathLabel::R1, PathLabel::U1, &qf(1, 2), &q(1)).unwrap();
        assert!(side_intersections(&c).contains(&SideContact::WholeSide { side: Side::X0 }));
    }
}
