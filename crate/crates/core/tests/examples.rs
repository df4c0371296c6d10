//! Worked examples through the public API, one module at a time.

use boxgeo_core::algebra::{
    conic_classify, pair_conic, pair_conic_exact, q, qf, resultant_eliminate, spontaneous_checks,
    triple_intersections, triple_intersections_exact, ConicKind, Eliminate, PlaneConic, UniPoly,
};
use boxgeo_core::classifier::{
    allowed_smallest, classify, representative, ClassId, Classification, DEFAULT_BOUNDARY_TOL,
};
use boxgeo_core::oracle::{enumerate_unfoldings, mesh_geodesic, unfold, verify_wrap_bound};
use boxgeo_core::regions::{boundary_arcs, label_region, signature, trace_pair_curve, RegionError};
use boxgeo_core::{
    dominance_gaps, min_over_six, squared_distance, unfolded_opposite, BoxDims, Direction, PathLabel as P,
    SurfacePoint,
};

fn dims(a: f64, b: f64) -> BoxDims {
    BoxDims::new(a, b).unwrap()
}

fn pt(d: &BoxDims, x: f64, y: f64) -> SurfacePoint {
    SurfacePoint::new(d, x, y).unwrap()
}

fn class(n: i64) -> ClassId {
    ClassId::new(n).unwrap()
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0)
}

#[test]
fn room_distances() {
    let d = dims(1.0, 2.5);
    let p = pt(&d, 0.0, 5.0 / 12.0);
    assert_eq!(squared_distance(P::U0, &d, &p).unwrap(), 12.25);
    assert!(close(squared_distance(P::U2, &d, &p).unwrap(), 100.0 / 9.0));
    let m = min_over_six(&d, &p, 1e-9);
    assert!(close(m.value, 100.0 / 9.0));
    assert!(m.argmin.contains(&P::U2));
    assert!(min_over_six(&d, &pt(&d, 0.0, 1.0 / 12.0), 1e-9).argmin.contains(&P::U0));
    assert!(min_over_six(&d, &pt(&d, 0.0, 3.0 / 12.0), 1e-9).argmin.contains(&P::R1));
}

#[test]
fn table_rows() {
    let d = dims(1.0, 1.0);
    assert!(close(squared_distance(P::R0, &d, &pt(&d, 0.0, 0.0)).unwrap(), 4.0));
    let d = dims(0.8, 0.7);
    let p = pt(&d, 0.3, 0.2);
    assert!(close(squared_distance(P::D1, &d, &p).unwrap(), 3.25));
    assert!(close(squared_distance(P::R0, &d, &p).unwrap(), 2.41));
}

#[test]
fn opposite_points() {
    let d = dims(0.6, 1.3);
    let (x, y) = unfolded_opposite(P::R0, &d, &pt(&d, 0.1, 0.2)).unwrap();
    assert!(close(x, 0.1 + 0.6 + 1.3) && close(y, -0.2));
    let d = dims(1.0, 1.0);
    assert_eq!(unfolded_opposite(P::U1, &d, &pt(&d, 0.0, 0.0)).unwrap(), (1.0, 2.0));
    let d = dims(0.5, 2.0);
    let p = pt(&d, 0.25, 0.5);
    let (x, y) = unfolded_opposite(P::R2, &d, &p).unwrap();
    assert!(close(x, 2.25) && close(y, -1.0));
    assert!(close((x - 0.25).powi(2) + (y - 0.5).powi(2), squared_distance(P::R2, &d, &p).unwrap()));
}

#[test]
fn unsupported_labels() {
    let d = dims(1.0, 1.0);
    let p = pt(&d, 0.1, 0.1);
    let l0 = P { direction: Direction::L, wrap: 0 };
    let r3 = P { direction: Direction::R, wrap: 3 };
    assert!(squared_distance(l0, &d, &p).is_err());
    assert!(squared_distance(r3, &d, &p).is_err());
}

#[test]
fn gaps() {
    let d = dims(0.7, 1.9);
    assert!(dominance_gaps(&d, &pt(&d, 0.0, 0.3))[0].abs() < 1e-12);
    assert!(dominance_gaps(&d, &pt(&d, 0.2, 0.0))[1].abs() < 1e-12);
    let d = dims(1.0, 1.0);
    assert!(dominance_gaps(&d, &pt(&d, 0.5, 0.5)).iter().all(|g| *g >= 0.0));
}

#[test]
fn domain_errors() {
    assert!(BoxDims::new(2.0, 1.0).is_err());
    assert!(BoxDims::new(0.5, -1.0).is_err());
    let d = dims(0.5, 1.0);
    assert!(SurfacePoint::new(&d, 0.3, 0.1).is_err());
    assert!(SurfacePoint::new(&d, 0.1, 0.6).is_err());
    assert!(SurfacePoint::new(&d, 0.25, 0.5).is_ok());
}

#[test]
fn conics() {
    let c = pair_conic_exact(P::R0, P::U2, &qf(1, 2), &q(1)).unwrap();
    assert_eq!(conic_classify(&c).unwrap(), ConicKind::Line);
    let c = pair_conic_exact(P::R2, P::U0, &qf(1, 2), &q(1)).unwrap();
    assert_eq!(conic_classify(&c).unwrap(), ConicKind::Line);
    let c = pair_conic_exact(P::R0, P::R1, &qf(1, 2), &qf(1, 2)).unwrap();
    assert_eq!(conic_classify(&c).unwrap(), ConicKind::Hyperbola);
    let a = 0.6;
    let c = pair_conic(P::R1, P::U0, &dims(a, (2f64.sqrt() + 1.0) * a - 1.0)).unwrap();
    assert_eq!(conic_classify(&c).unwrap(), ConicKind::DegenerateHyperbola);
    let c = pair_conic_exact(P::R1, P::U1, &q(1), &q(1)).unwrap();
    assert_eq!((c.gamma, c.delta, c.phi), (q(0), q(8), q(0)));
}

#[test]
fn roots_and_resultants() {
    let p = UniPoly::from_desc(&[4, 0, 3, -6]);
    assert!((p.isolate_root(&qf(9, 10), &q(1), 1e-15).unwrap() - 0.929).abs() < 5e-4);
    let p = UniPoly::from_desc(&[1, -2, 7, -6, 1]);
    assert!((p.isolate_root(&qf(7, 10), &qf(85, 100), 1e-15).unwrap() - 0.780).abs() < 5e-4);
    let p = UniPoly::from_desc(&[2, -1]);
    assert!((p.isolate_root(&q(0), &q(1), 1e-15).unwrap() - 0.5).abs() < 1e-15);
    assert!(p.isolate_root(&q(1), &q(2), 1e-15).is_err());

    let l1: PlaneConic = pair_conic_exact(P::R0, P::U2, &q(1), &q(1)).unwrap().plane;
    assert!(resultant_eliminate(&l1, &l1, Eliminate::Y).is_err());
}

#[test]
fn triples() {
    // a^2 + (2b - 2)a + 3b^2 - 2b - 1 = 0 at (14/19, 17/19)
    let pts = triple_intersections_exact(P::R0, P::R1, P::U1, &qf(14, 19), &qf(17, 19)).unwrap();
    assert_eq!(pts.len(), 1);
    assert!(pts[0].0.abs() < 1e-12);
    // 2a^2 + (1 - 3b)a + 2b^2 - 2b = 0 at (1, 3/2): on x = a/2
    let pts = triple_intersections_exact(P::R0, P::R1, P::R2, &q(1), &qf(3, 2)).unwrap();
    assert_eq!(pts.len(), 1);
    assert!((pts[0].0 - 0.5).abs() < 1e-12);
    // strictly between the two curves the triple point is interior
    let (a, b) = (0.9, 1.8);
    assert!(2.0 * a * a + (1.0 - 3.0 * b) * a + 2.0 * b * b - 2.0 * b > 0.0);
    assert!((2.0 * b - 2.0) * a * a * a + (b * b - 1.0) * a * a - b * b < 0.0);
    let pts = triple_intersections(P::R0, P::R1, P::R2, &dims(a, b)).unwrap();
    assert_eq!(pts.len(), 1, "{pts:?}");
    let p = pts[0];
    assert!(p.x() > 1e-9 && p.x() < a / 2.0 - 1e-9 && p.y() > 1e-9 && p.y() < 0.5 - 1e-9);
}

#[test]
fn spontaneous_generation() {
    assert!(spontaneous_checks().unwrap().iter().all(|c| c.passed));
}

#[test]
fn classes() {
    let id = |a, b| classify(a, b, DEFAULT_BOUNDARY_TOL).unwrap().id().map(|c| c.get());
    assert_eq!(id(1.0, 2.5), Some(47));
    assert_eq!(id(2.0 * 2f64.sqrt() - 2.0, 1.0), Some(20));
    assert_eq!(id(1.0, 1.5), Some(32));
    assert_eq!(id(0.3, 0.3), Some(1));
    assert!(classify(1.5, 1.0, DEFAULT_BOUNDARY_TOL).is_err());
    assert!(matches!(classify(0.5, 1e9, DEFAULT_BOUNDARY_TOL).unwrap(), Classification::Class { .. }));
    assert_eq!(allowed_smallest(class(1)), vec![P::R0]);
    assert_eq!(allowed_smallest(class(9)), vec![P::R0, P::U1]);
    assert_eq!(allowed_smallest(class(47)), vec![P::R0, P::R1, P::R2, P::U0, P::U2]);
    assert_eq!(representative(class(32)), (1.0, 1.5));
    assert_eq!(representative(class(47)), (1.0, 2.5));
    let (a, b) = representative(class(20));
    assert!(close(a, 2.0 * 2f64.sqrt() - 2.0) && b == 1.0);
}

#[test]
fn rasters() {
    let r = label_region(&dims(0.4, 0.2), 256, 1e-9).unwrap();
    assert_eq!(r.strict_labels(), vec![P::R0]);
    let r = label_region(&dims(1.0, 2.5), 256, 1e-9).unwrap();
    assert!(!r.strict_labels().contains(&P::U1));
    let d = dims(1.0, 1.0);
    for k in 0..=10 {
        let p = pt(&d, 0.0, k as f64 / 20.0);
        assert_eq!(squared_distance(P::R1, &d, &p).unwrap(), squared_distance(P::U1, &d, &p).unwrap());
    }
    assert!(matches!(label_region(&d, 32, 1e-9), Err(RegionError::Resolution(32))));
}

#[test]
fn signatures() {
    let sig = |n| {
        let (a, b) = representative(class(n));
        signature(&label_region(&dims(a, b), 512, 1e-9).unwrap()).unwrap()
    };
    let s1 = sig(1);
    assert_eq!(s1.components.into_iter().collect::<Vec<_>>(), vec![(P::R0, 1)]);
    assert!(s1.corner_labels.iter().all(|c| c == &vec![P::R0]));
    let s2 = sig(2);
    assert_eq!(s2.components.into_iter().collect::<Vec<_>>(), vec![(P::R0, 1), (P::U0, 1)]);
    assert_eq!(sig(13).components[&P::U0], 2);
}

#[test]
fn arcs() {
    // R0 = U2 on a horizontal line
    let (a, b) = (1.0, 2.5);
    let y0 = (a + b + 1.0 - a * b) / (2.0 * b + 2.0);
    let line = trace_pair_curve(&dims(a, b), P::R0, P::U2);
    assert!(!line.is_empty());
    assert!(line.iter().flatten().all(|p| (p.1 - y0).abs() < 1e-9));

    // R1 = U1 on x = 0 and y = b/2
    let d = dims(0.9, 0.6);
    let pieces = trace_pair_curve(&d, P::R1, P::U1);
    let pts: Vec<_> = pieces.iter().flatten().copied().collect();
    assert!(pts.iter().all(|p| p.0.abs() < 1e-9 || (p.1 - 0.3).abs() < 1e-9));
    assert!(pts.iter().any(|p| p.0.abs() < 1e-9) && pts.iter().any(|p| (p.1 - 0.3).abs() < 1e-9));

    // R0 = U0 along the diagonal when a = 1
    let d = dims(1.0, 0.25);
    let diag = boundary_arcs(&d);
    let r0u0: Vec<_> = diag.iter().filter(|c| c.labels == (P::R0, P::U0)).collect();
    assert!(!r0u0.is_empty());
    assert!(r0u0.iter().flat_map(|c| &c.points).all(|p| (p.0 - p.1).abs() < 1e-9));
}

#[test]
fn unfoldings() {
    let d = dims(0.7, 1.6);
    let p = pt(&d, 0.2, 0.3);
    let r0 = unfold(P::R0, &d, &p);
    assert!(close(r0.target.0, 0.2 + 0.7 + 1.6) && close(r0.target.1, -0.3));
    assert_eq!(r0.faces.len(), 3);
    let um1 = P { direction: Direction::U, wrap: -1 };
    assert!(close(unfold(um1, &d, &p).squared_length, unfold(P::R1, &d, &p).squared_length));
    let d = dims(1.0, 2.5);
    let p = pt(&d, 0.0, 5.0 / 12.0);
    let best = enumerate_unfoldings(&d, &p, 3).iter().map(|r| r.squared_length).fold(f64::INFINITY, f64::min);
    assert!(close(best, 100.0 / 9.0));
}

#[test]
fn mesh() {
    let d = dims(1.0, 1.0);
    let m = mesh_geodesic(&d, &pt(&d, 0.0, 0.0), 128).unwrap().distance;
    assert!((2.0..=2.02).contains(&m), "{m}");
    assert!(m >= d.b());
}

#[test]
fn wrap_bound() {
    for (a, b) in [(1.0, 2.5), (0.1, 0.1), (1.0, 10.0)] {
        let r = verify_wrap_bound(&dims(a, b), 1000, 5, 3);
        assert!(r.passed && r.violations == 0, "{r:?}");
    }
}
