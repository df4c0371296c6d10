//! Exact rational polynomial tools for the pairwise difference conics.
//!
//! Symbolic work (resultants, gcds, factor splitting) is done over the
//! rationals; floats appear only at root-isolation endpoints and in reports.

mod conic;
mod mpoly;
mod unipoly;

pub use conic::{
    conic_classify, conic_classify_with, distance_poly, pair_conic, pair_conic_exact, restrict_to_side,
    side_intersections, side_intersections_with, ConicCoeffs, ConicKind, PlaneConic, Side, SideContact,
    ZeroTest, DEFAULT_RELATIVE_TOL,
};
pub use mpoly::{
    bareiss_det, constant_ratio, gcd, q, q_from_f64, q_to_f64, qf, resultant, split_factors, MPoly, Var, Q,
};
pub use unipoly::{AlgebraicConstant, UniPoly, ROOT_TOL};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::distances::{squared_distance, BoxDims, PathLabel, SurfacePoint, CANONICAL_SIX};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("the conic is identically zero")]
    ZeroConic,
    #[error("the conic has no points (nonzero constant)")]
    EmptyConic,
    #[error("the conic is not of hyperbolic type")]
    NotHyperbolic,
    #[error("the resultant vanishes identically; the curves share a component")]
    ZeroResultant,
    #[error("the three curves share a common component; intersection is not finite")]
    SharedComponent,
    #[error("labels must differ (got {0} twice)")]
    SameLabel(PathLabel),
    #[error("{0} is not one of the six candidate labels")]
    NotCanonical(PathLabel),
    #[error("no closed form for {0}")]
    NoClosedForm(PathLabel),
    #[error("unsupported triple {0}")]
    UnsupportedTriple(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eliminate {
    X,
    Y,
}

/// Resultant of two instantiated conics, eliminating `var`; the result is a
/// polynomial in the other coordinate.
pub fn resultant_eliminate(
    c1: &PlaneConic,
    c2: &PlaneConic,
    var: Eliminate,
) -> Result<UniPoly, AlgebraError> {
    let (v, keep) = match var {
        Eliminate::X => (Var::X, Var::Y),
        Eliminate::Y => (Var::Y, Var::X),
    };
    let r = resultant(&c1.to_mpoly(), &c2.to_mpoly(), v);
    if r.is_zero() {
        return Err(AlgebraError::ZeroResultant);
    }
    Ok(UniPoly::from_mpoly(&r, keep).expect("univariate after elimination"))
}

/// Agreement required of a reported triple point.
pub const TRIPLE_TOL: f64 = 1e-10;

/// Points of the closed region `F` where three squared distances agree.
pub fn triple_intersections(
    alpha: PathLabel,
    beta: PathLabel,
    gamma: PathLabel,
    dims: &BoxDims,
) -> Result<Vec<SurfacePoint>, AlgebraError> {
    let pts = triple_intersections_exact(alpha, beta, gamma, &q_from_f64(dims.a()), &q_from_f64(dims.b()))?;
    Ok(pts.into_iter().map(|(x, y)| SurfacePoint::new(dims, x, y).expect("inside F")).collect())
}

/// As [`triple_intersections`] for exact rational dimensions; returns plain
/// coordinates.
pub fn triple_intersections_exact(
    alpha: PathLabel,
    beta: PathLabel,
    gamma: PathLabel,
    a: &Q,
    b: &Q,
) -> Result<Vec<(f64, f64)>, AlgebraError> {
    if beta == gamma {
        return Err(AlgebraError::SameLabel(beta));
    }
    let c1 = pair_conic_exact(alpha, beta, a, b)?.plane;
    let c2 = pair_conic_exact(alpha, gamma, a, b)?.plane;
    let (af, bf) = (q_to_f64(a), q_to_f64(b));
    let half_a = a / q(2);
    let half = qf(1, 2);

    // project onto x, falling back to y when the projection degenerates
    let (elim, lo, hi) = match resultant_eliminate(&c1, &c2, Eliminate::Y) {
        Ok(r) => (Some((r, Eliminate::Y)), Q::zero(), half_a.clone()),
        Err(_) => match resultant_eliminate(&c1, &c2, Eliminate::X) {
            Ok(r) => (Some((r, Eliminate::X)), Q::zero(), half.clone()),
            Err(_) => (None, Q::zero(), Q::zero()),
        },
    };
    let (res, which) = elim.ok_or(AlgebraError::SharedComponent)?;
    let dims = BoxDims::new(af, bf).expect("valid dims");
    let d = |l: PathLabel, x: f64, y: f64| {
        squared_distance(l, &dims, &SurfacePoint::raw(x, y)).expect("canonical label")
    };
    let mut out: Vec<(f64, f64)> = Vec::new();
    for t in res.real_roots_in(&lo, &hi, ROOT_TOL) {
        let tq = q_from_f64(t);
        let (other_len, fixed) = match which {
            Eliminate::Y => (0.5, Var::X),
            Eliminate::X => (af / 2.0, Var::Y),
        };
        let mut candidates = Vec::new();
        for c in [&c1, &c2] {
            let p = c.to_mpoly().substitute(fixed, &tq);
            let free = if fixed == Var::X { Var::Y } else { Var::X };
            candidates.extend(quadratic_roots(&p, free));
        }
        for s in candidates {
            let slack = 1e-9;
            if s < -slack || s > other_len + slack {
                continue;
            }
            let s = s.clamp(0.0, other_len);
            let (x, y) = match which {
                Eliminate::Y => (t.clamp(0.0, af / 2.0), s),
                Eliminate::X => (s, t.clamp(0.0, 0.5)),
            };
            let da = d(alpha, x, y);
            if (da - d(beta, x, y)).abs() > TRIPLE_TOL || (da - d(gamma, x, y)).abs() > TRIPLE_TOL {
                continue;
            }
            if !out.iter().any(|p| (p.0 - x).hypot(p.1 - y) < 1e-9) {
                out.push((x, y));
            }
        }
    }
    out.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    Ok(out)
}

/// Real roots of a polynomial of degree at most two in `v`.
fn quadratic_roots(p: &MPoly, v: Var) -> Vec<f64> {
    let c = p.coeffs_in(v);
    let get = |k: usize| c.get(k).and_then(|m| m.constant_value()).unwrap_or_else(Q::zero);
    let (qa, qb, qc) = (get(2), get(1), get(0));
    if qa.is_zero() {
        if qb.is_zero() {
            return Vec::new();
        }
        return vec![q_to_f64(&(-qc / qb))];
    }
    let (fa, fb, fc) = (q_to_f64(&qa), q_to_f64(&qb), q_to_f64(&qc));
    let disc = fb * fb - 4.0 * fa * fc;
    let scale = fb * fb + (4.0 * fa * fc).abs();
    if disc < -1e-12 * scale {
        return Vec::new();
    }
    let sq = disc.max(0.0).sqrt();
    let qq = -0.5 * (fb + fb.signum() * sq);
    if qq == 0.0 {
        return vec![-fb / (2.0 * fa)];
    }
    vec![qq / fa, fc / qq]
}

/// Result of the generic elimination pipeline for one triple.
#[derive(Debug, Clone)]
pub struct SpontaneousReport {
    pub labels: [PathLabel; 3],
    /// Resultant in `y` of `d_a - d_b` and `d_a - d_c`, a polynomial in `a, b, x`.
    pub inner: MPoly,
    /// `inner` with repeated factors in `x` removed.
    pub inner_squarefree: MPoly,
    /// Resultant in `x` of the squarefree inner polynomial and its `x`-derivative.
    pub outer: MPoly,
    /// Distinct factors of `outer`, monic.
    pub factors: Vec<MPoly>,
}

/// Where on the `(a, b)` plane a triple intersection can be born inside `F`
/// for `(R1, R2, U2)` and `(R1, R2, U0)`.
pub fn spontaneous_generation_factors(labels: [PathLabel; 3]) -> Result<SpontaneousReport, AlgebraError> {
    use PathLabel as P;
    let supported = [[P::R1, P::R2, P::U2], [P::R1, P::R2, P::U0]];
    if !supported.contains(&labels) {
        return Err(AlgebraError::UnsupportedTriple(format!(
            "({}, {}, {})",
            labels[0], labels[1], labels[2]
        )));
    }
    let [alpha, beta, gamma] = labels;
    let da = distance_poly(alpha)?;
    let f = &da - &distance_poly(beta)?;
    let g = &da - &distance_poly(gamma)?;
    let inner = resultant(&f, &g, Var::Y);
    if inner.is_zero() {
        return Err(AlgebraError::ZeroResultant);
    }
    let inner_squarefree = inner.squarefree_part_in(Var::X);
    let outer = resultant(&inner_squarefree, &inner_squarefree.derivative(Var::X), Var::X);
    if outer.is_zero() {
        return Err(AlgebraError::ZeroResultant);
    }
    let factors = split_factors(&outer);
    Ok(SpontaneousReport { labels, inner, inner_squarefree, outer, factors })
}

/// `delta^2 - 4 gamma phi` for every pair of canonical labels whose
/// difference has a quadratic part.  The quadratic part does not depend on
/// the box.
pub fn quadratic_pair_discriminants() -> Vec<(PathLabel, PathLabel, Q)> {
    let mut out = Vec::new();
    for (i, &p) in CANONICAL_SIX.iter().enumerate() {
        for &r in &CANONICAL_SIX[i + 1..] {
            let c = pair_conic_exact(p, r, &qf(1, 2), &q(1)).expect("canonical pair");
            if c.gamma.is_zero() && c.delta.is_zero() && c.phi.is_zero() {
                continue;
            }
            out.push((p, r, &c.delta * &c.delta - q(4) * &c.gamma * &c.phi));
        }
    }
    out
}

/// Outcome of comparing an elimination against its expected factors.
#[derive(Debug, Clone, Serialize)]
pub struct SpontaneousCheck {
    pub labels: [PathLabel; 3],
    pub factors: Vec<String>,
    pub expected: Vec<String>,
    /// For `(R1, R2, U0)`: the linear form whose square the inner resultant is.
    pub inner_square_of: Option<String>,
    pub inner_is_square: Option<bool>,
    pub passed: bool,
}

fn affine(terms: &[(Var, i64)], c: i64) -> MPoly {
    let mut p = MPoly::constant(q(c));
    for &(v, k) in terms {
        p = &p + &MPoly::monomial(q(k), v, 1);
    }
    p
}

/// Every factor matches a distinct expected factor up to a constant.
fn same_factor_set(got: &[MPoly], want: &[MPoly]) -> bool {
    got.len() == want.len()
        && want.iter().all(|w| got.iter().filter(|f| constant_ratio(f, w).is_some()).count() == 1)
}

/// Runs the elimination for `(R1, R2, U2)` and `(R1, R2, U0)` and compares
/// the factor sets with `{b, a + 1, 2a + b + 2}` and `{a + b}`.
pub fn spontaneous_checks() -> Result<Vec<SpontaneousCheck>, AlgebraError> {
    use PathLabel as P;
    let show = |v: &[MPoly]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();

    let rep = spontaneous_generation_factors([P::R1, P::R2, P::U2])?;
    let want =
        vec![affine(&[(Var::B, 1)], 0), affine(&[(Var::A, 1)], 1), affine(&[(Var::A, 2), (Var::B, 1)], 2)];
    let first = SpontaneousCheck {
        labels: rep.labels,
        factors: show(&rep.factors),
        expected: show(&want),
        inner_square_of: None,
        inner_is_square: None,
        passed: same_factor_set(&rep.factors, &want),
    };

    let rep = spontaneous_generation_factors([P::R1, P::R2, P::U0])?;
    let want = vec![affine(&[(Var::A, 1), (Var::B, 1)], 0)];
    // a^2 - 2bx + ab + a - b - 2ax
    let (a, b, x) = (MPoly::var(Var::A), MPoly::var(Var::B), MPoly::var(Var::X));
    let mut l = &(&a * &a) + &(&a * &b);
    l = &(&l + &a) - &b;
    l = &l - &(&(&a + &b) * &x).scale(&q(2));
    let square = constant_ratio(&rep.inner, &(&l * &l)).is_some();
    let second = SpontaneousCheck {
        labels: rep.labels,
        factors: show(&rep.factors),
        expected: show(&want),
        inner_square_of: Some(l.to_string()),
        inner_is_square: Some(square),
        passed: square && same_factor_set(&rep.factors, &want),
    };
    Ok(vec![first, second])
}
