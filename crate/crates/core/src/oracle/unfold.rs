//! Unfoldings built from the box's face geometry alone.
//!
//! Each face carries an orthonormal frame whose orientation agrees with the
//! outward normal.  Laying the next face of a circuit into the plane is the
//! rigid motion that matches the shared edge's two endpoints.

use serde::Serialize;

use crate::distances::{BoxDims, Direction, PathLabel, SurfacePoint};

type V3 = [f64; 3];
type V2 = (f64, f64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Face {
    Top,
    Bottom,
    R,
    U,
    L,
    D,
}

impl Face {
    fn side(d: Direction) -> Face {
        match d {
            Direction::R => Face::R,
            Direction::U => Face::U,
            Direction::L => Face::L,
            Direction::D => Face::D,
        }
    }

    /// Origin and in-plane axes `(u, v)` with `u x v` pointing outward.
    fn frame(self, dims: &BoxDims) -> (V3, V3, V3) {
        let (ha, b) = (dims.half_a(), dims.b());
        match self {
            Face::Top => ([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
            Face::Bottom => ([0.0, 0.0, -b], [1.0, 0.0, 0.0], [0.0, -1.0, 0.0]),
            Face::R => ([ha, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]),
            Face::L => ([-ha, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]),
            Face::U => ([0.0, 0.5, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]),
            Face::D => ([0.0, -0.5, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]),
        }
    }

    /// Axis and value of the coordinate that is constant on the face.
    fn plane(self, dims: &BoxDims) -> (usize, f64) {
        match self {
            Face::Top => (2, 0.0),
            Face::Bottom => (2, -dims.b()),
            Face::R => (0, dims.half_a()),
            Face::L => (0, -dims.half_a()),
            Face::U => (1, 0.5),
            Face::D => (1, -0.5),
        }
    }

    fn corners(self, dims: &BoxDims) -> Vec<V3> {
        let xs = [-dims.half_a(), dims.half_a()];
        let ys = [-0.5, 0.5];
        let zs = [-dims.b(), 0.0];
        let (axis, value) = self.plane(dims);
        let mut out = Vec::new();
        for &x in &xs {
            for &y in &ys {
                for &z in &zs {
                    let p = [x, y, z];
                    if p[axis] == value {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    fn local(self, dims: &BoxDims, p: V3) -> V2 {
        let (o, u, v) = self.frame(dims);
        let d = [p[0] - o[0], p[1] - o[1], p[2] - o[2]];
        (dot(d, u), dot(d, v))
    }
}

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Rotation angle plus translation: `z -> p + R(theta) (z - pivot)`.
#[derive(Debug, Clone, Copy)]
struct Rigid {
    cos: f64,
    sin: f64,
    pivot: V2,
    image: V2,
}

impl Rigid {
    fn identity() -> Self {
        Rigid { cos: 1.0, sin: 0.0, pivot: (0.0, 0.0), image: (0.0, 0.0) }
    }

    fn apply(&self, z: V2) -> V2 {
        let (dx, dy) = (z.0 - self.pivot.0, z.1 - self.pivot.1);
        (self.image.0 + self.cos * dx - self.sin * dy, self.image.1 + self.sin * dx + self.cos * dy)
    }
}

fn shared_edge(f: Face, g: Face, dims: &BoxDims) -> (V3, V3) {
    let cf = f.corners(dims);
    let cg = g.corners(dims);
    let common: Vec<V3> = cf.into_iter().filter(|p| cg.contains(p)).collect();
    assert_eq!(common.len(), 2, "{f:?} and {g:?} share an edge");
    (common[0], common[1])
}

/// Map for `g` given the map for `f`, so that the two agree on their
/// shared edge.
fn attach(f: Face, mf: &Rigid, g: Face, dims: &BoxDims) -> Rigid {
    let (p3, q3) = shared_edge(f, g, dims);
    let p = mf.apply(f.local(dims, p3));
    let q = mf.apply(f.local(dims, q3));
    let pg = g.local(dims, p3);
    let qg = g.local(dims, q3);
    let theta = (q.1 - p.1).atan2(q.0 - p.0) - (qg.1 - pg.1).atan2(qg.0 - pg.0);
    Rigid { cos: theta.cos(), sin: theta.sin(), pivot: pg, image: p }
}

/// The face after `f` when walking around the sides; clockwise seen from
/// above is `R -> D -> L -> U`.
fn next_side(f: Face, clockwise: bool) -> Face {
    let ring = [Face::R, Face::D, Face::L, Face::U];
    let i = ring.iter().position(|&r| r == f).expect("side face");
    if clockwise {
        ring[(i + 1) % 4]
    } else {
        ring[(i + 3) % 4]
    }
}

pub fn face_sequence(label: PathLabel) -> Vec<Face> {
    let mut faces = vec![Face::Top];
    let mut cur = Face::side(label.direction);
    faces.push(cur);
    for _ in 0..label.wrap.unsigned_abs() {
        cur = next_side(cur, label.wrap > 0);
        faces.push(cur);
    }
    faces.push(Face::Bottom);
    faces
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnfoldingResult {
    pub label: PathLabel,
    pub faces: Vec<Face>,
    pub target: (f64, f64),
    pub squared_length: f64,
    /// Whether the straight segment crosses the shared edges in order.
    pub segment_valid: bool,
}

pub fn unfold(label: PathLabel, dims: &BoxDims, pt: &SurfacePoint) -> UnfoldingResult {
    let faces = face_sequence(label);
    let mut maps = vec![Rigid::identity()];
    for w in faces.windows(2) {
        let m = attach(w[0], maps.last().expect("nonempty"), w[1], dims);
        maps.push(m);
    }
    let bottom = *maps.last().expect("nonempty");
    let anti = Face::Bottom.local(dims, [-pt.x(), -pt.y(), -dims.b()]);
    let target = bottom.apply(anti);
    let start = (pt.x(), pt.y());
    let squared_length = (target.0 - start.0).powi(2) + (target.1 - start.1).powi(2);

    let mut last = -1e-12;
    let mut segment_valid = true;
    for (k, w) in faces.windows(2).enumerate() {
        let (p3, q3) = shared_edge(w[0], w[1], dims);
        let p = maps[k].apply(w[0].local(dims, p3));
        let q = maps[k].apply(w[0].local(dims, q3));
        match crossing(start, target, p, q) {
            Some(t) if t >= last => last = t,
            _ => {
                segment_valid = false;
                break;
            }
        }
    }
    UnfoldingResult { label, faces, target, squared_length, segment_valid }
}

/// Parameter along `s -> t` where it meets the segment `p q`.
fn crossing(s: V2, t: V2, p: V2, q: V2) -> Option<f64> {
    let r = (t.0 - s.0, t.1 - s.1);
    let e = (q.0 - p.0, q.1 - p.1);
    let den = r.0 * e.1 - r.1 * e.0;
    if den.abs() < 1e-300 {
        return None;
    }
    let w = (p.0 - s.0, p.1 - s.1);
    let lam = (w.0 * e.1 - w.1 * e.0) / den;
    let mu = (w.0 * r.1 - w.1 * r.0) / den;
    let eps = 1e-12;
    if (-eps..=1.0 + eps).contains(&lam) && (-eps..=1.0 + eps).contains(&mu) {
        Some(lam)
    } else {
        None
    }
}

/// Every unfolding with `|wrap| <= max_wrap` from each of the four sides.
pub fn enumerate_unfoldings(dims: &BoxDims, pt: &SurfacePoint, max_wrap: u8) -> Vec<UnfoldingResult> {
    let m = max_wrap as i8;
    let mut out = Vec::new();
    for d in Direction::ALL {
        for j in -m..=m {
            out.push(unfold(PathLabel::new(d, j), dims, pt));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distances::{unfolded_opposite, TABLE_LABELS};

    #[test]
    fn face_counts() {
        for j in -4..=4i8 {
            let l = PathLabel::new(Direction::U, j);
            assert_eq!(face_sequence(l).len(), j.unsigned_abs() as usize + 3);
        }
    }

    #[test]
    fn direct_path_target() {
        let d = BoxDims::new(0.6, 1.7).unwrap();
        let p = SurfacePoint::new(&d, 0.1, 0.3).unwrap();
        let r = unfold(PathLabel::R0, &d, &p);
        assert!((r.target.0 - (0.1 + 0.6 + 1.7)).abs() < 1e-12);
        assert!((r.target.1 + 0.3).abs() < 1e-12);
        assert!(r.segment_valid);
    }

    #[test]
    fn targets_match_closed_forms() {
        let d = BoxDims::new(0.83, 1.21).unwrap();
        let p = SurfacePoint::new(&d, 0.17, 0.29).unwrap();
        for l in TABLE_LABELS {
            let got = unfold(l, &d, &p).target;
            let want = unfolded_opposite(l, &d, &p).unwrap();
            assert!(
                (got.0 - want.0).abs() < 1e-12 && (got.1 - want.1).abs() < 1e-12,
                "{l}: {got:?} vs {want:?}"
            );
        }
    }

    #[test]
    fn tall_room_minimum() {
        let d = BoxDims::new(1.0, 2.5).unwrap();
        let p = SurfacePoint::new(&d, 0.0, 5.0 / 12.0).unwrap();
        let m =
            enumerate_unfoldings(&d, &p, 3).iter().map(|r| r.squared_length).fold(f64::INFINITY, f64::min);
        assert!((m - 100.0 / 9.0).abs() < 1e-12);
    }
}
