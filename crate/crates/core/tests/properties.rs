//! Invariants checked on random boxes and points.

use proptest::prelude::*;

use boxgeo_core::algebra::{pair_conic, pair_conic_exact, q_from_f64, AlgebraicConstant};
use boxgeo_core::classifier::{allowed_smallest, classify, representative, ClassId, DEFAULT_BOUNDARY_TOL};
use boxgeo_core::oracle::{mesh_geodesic, unfold};
use boxgeo_core::regions::boundary_arcs;
use boxgeo_core::{
    dominance_gaps, min_over_six, squared_distance, unfolded_opposite, BoxDims, PathLabel as P, SurfacePoint,
    CANONICAL_SIX, TABLE_LABELS,
};

/// A box and a point of its fundamental region, from unit-interval draws.
fn instance() -> impl Strategy<Value = (BoxDims, SurfacePoint)> {
    (1e-3..=1.0f64, 1e-3..4.0f64, 0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(a, b, s, t)| {
        let d = BoxDims::new(a, b).unwrap();
        let p = SurfacePoint::new(&d, s * a / 2.0, t / 2.0).unwrap();
        (d, p)
    })
}

fn d(l: P, dims: &BoxDims, p: &SurfacePoint) -> f64 {
    squared_distance(l, dims, p).unwrap()
}

fn scale(dims: &BoxDims) -> f64 {
    (1.0 + dims.a() + dims.b()).powi(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn opposite_points_give_the_distances((dims, p) in instance()) {
        for l in TABLE_LABELS {
            let (x, y) = unfolded_opposite(l, &dims, &p).unwrap();
            let v = (x - p.x()).powi(2) + (y - p.y()).powi(2);
            let w = d(l, &dims, &p);
            prop_assert!((v - w).abs() <= 1e-12 * w.max(1e-300) * 4.0, "{l}: {v} vs {w}");
        }
    }

    #[test]
    fn r1_minus_u1((dims, p) in instance()) {
        let diff = d(P::R1, &dims, &p) - d(P::U1, &dims, &p);
        let want = 4.0 * p.x() * (2.0 * p.y() - dims.b());
        prop_assert!((diff - want).abs() <= 1e-12 * scale(&dims));
    }

    #[test]
    fn u2_minus_r0((dims, p) in instance()) {
        let (a, b) = (dims.a(), dims.b());
        let diff = d(P::U2, &dims, &p) - d(P::R0, &dims, &p);
        let want = -(4.0 * b + 4.0) * p.y() + 2.0 * a + 2.0 * b + 2.0 - 2.0 * a * b;
        prop_assert!((diff - want).abs() <= 1e-12 * scale(&dims));
    }

    #[test]
    fn dominances((dims, p) in instance()) {
        let tol = 1e-12 * scale(&dims);
        for g in dominance_gaps(&dims, &p) {
            prop_assert!(g >= -tol, "{g}");
        }
        let m = d(P::R0, &dims, &p).min(d(P::R1, &dims, &p)).min(d(P::U1, &dims, &p));
        prop_assert!(d(P::D1, &dims, &p) >= m - tol);
    }

    #[test]
    fn argmin_is_within_tolerance((dims, p) in instance(), tie in 0.0..1e-6f64) {
        let m = min_over_six(&dims, &p, tie);
        prop_assert!(!m.argmin.is_empty());
        for l in &m.argmin {
            prop_assert!(d(*l, &dims, &p) <= m.value * (1.0 + tie));
        }
        for l in CANONICAL_SIX {
            prop_assert!(d(l, &dims, &p) >= m.value);
        }
        prop_assert_eq!(m.geodesic, m.value.sqrt());
    }

    #[test]
    fn minimum_is_lipschitz_in_the_values((dims, p) in instance(), s in 0.0..=1.0f64, t in 0.0..=1.0f64) {
        let r = SurfacePoint::new(&dims, s * dims.a() / 2.0, t / 2.0).unwrap();
        let worst = CANONICAL_SIX
            .iter()
            .map(|&l| (d(l, &dims, &p) - d(l, &dims, &r)).abs())
            .fold(0.0, f64::max);
        let gap = (min_over_six(&dims, &p, 0.0).value - min_over_six(&dims, &r, 0.0).value).abs();
        prop_assert!(gap <= worst + 1e-12 * scale(&dims));
    }

    #[test]
    fn twins_have_equal_unfoldings((dims, p) in instance()) {
        for l in TABLE_LABELS {
            let u = unfold(l, &dims, &p).squared_length;
            let v = unfold(l.twin(), &dims, &p).squared_length;
            prop_assert!((u - v).abs() <= 1e-12 * u.max(v));
        }
    }

    #[test]
    fn pair_conics_are_differences((dims, p) in instance()) {
        for (i, &l) in CANONICAL_SIX.iter().enumerate() {
            for &m in &CANONICAL_SIX[i + 1..] {
                let c = pair_conic(l, m, &dims).unwrap();
                let want = d(l, &dims, &p) - d(m, &dims, &p);
                prop_assert!((c.eval_f64(p.x(), p.y()) - want).abs() <= 1e-11 * scale(&dims));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn conics_are_hyperbolic_and_antisymmetric(a in 1e-3..=1.0f64, b in 1e-3..4.0f64) {
        let (qa, qb) = (q_from_f64(a), q_from_f64(b));
        for (i, &l) in CANONICAL_SIX.iter().enumerate() {
            for &m in &CANONICAL_SIX[i + 1..] {
                let c = pair_conic_exact(l, m, &qa, &qb).unwrap();
                let r = pair_conic_exact(m, l, &qa, &qb).unwrap();
                prop_assert_eq!(c.symbolic(), -&r.symbolic());
                let quad = [&c.gamma, &c.delta, &c.phi];
                if quad.iter().any(|v| **v != q_from_f64(0.0)) {
                    prop_assert!(c.plane.discriminant() > q_from_f64(0.0), "{l}/{m}");
                }
            }
        }
    }

    #[test]
    fn open_classes_allow_the_argmin(a in 1e-2..=1.0f64, b in 1e-2..3.0f64, s in 0.0..=1.0f64, t in 0.0..=1.0f64) {
        if let Some(id) = classify(a, b, DEFAULT_BOUNDARY_TOL).unwrap().id() {
            let dims = BoxDims::new(a, b).unwrap();
            let p = SurfacePoint::new(&dims, s * a / 2.0, t / 2.0).unwrap();
            let allowed = allowed_smallest(id);
            let m = min_over_six(&dims, &p, 0.0);
            prop_assert!(m.argmin.iter().any(|l| allowed.contains(l)), "class {id}: {:?}", m.argmin);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn boundary_arcs_lie_on_their_curves(a in 0.05..=1.0f64, b in 0.05..3.0f64) {
        let dims = BoxDims::new(a, b).unwrap();
        for arc in boundary_arcs(&dims) {
            let (l, m) = arc.labels;
            for &(x, y) in &arc.points {
                let p = SurfacePoint::new(&dims, x, y).unwrap();
                let (u, v) = (d(l, &dims, &p), d(m, &dims, &p));
                prop_assert!((u - v).abs() <= 1e-8 * u.max(v), "{l}/{m} at ({x}, {y})");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn mesh_distances_shrink_toward_the_geodesic((dims, p) in instance()) {
        let g = min_over_six(&dims, &p, 0.0).geodesic;
        let mut last = f64::INFINITY;
        for n in [32, 64, 128] {
            let m = mesh_geodesic(&dims, &p, n).unwrap().distance;
            prop_assert!(m >= g - 1e-12 * g, "n = {n}: {m} < {g}");
            prop_assert!(m <= last + 1e-12 * last, "n = {n}: {m} after {last}");
            last = m;
        }
    }
}

#[test]
fn representatives_allow_every_argmin() {
    // cell centres, since R0 and U1 tie identically at the corner (a/2, 1/2)
    // whether or not U1 is ever smallest; ties along the defining curves of
    // the lower-dimensional classes still count
    for id in ClassId::all() {
        let (a, b) = representative(id);
        let dims = BoxDims::new(a, b).unwrap();
        let allowed = allowed_smallest(id);
        for i in 0..40 {
            for j in 0..40 {
                let (s, t) = ((i as f64 + 0.5) / 40.0, (j as f64 + 0.5) / 40.0);
                let p = SurfacePoint::new(&dims, s * a / 2.0, t / 2.0).unwrap();
                let m = min_over_six(&dims, &p, 1e-9);
                assert!(
                    m.argmin.iter().all(|l| allowed.contains(l)),
                    "class {id} at ({}, {}): {:?}",
                    p.x(),
                    p.y(),
                    m.argmin
                );
            }
        }
    }
}

#[test]
fn constants_are_roots() {
    for c in AlgebraicConstant::all() {
        let v = c.defining.eval_f64(c.value);
        assert!(v.abs() < 1e-12, "{}: {v}", c.name);
    }
}
