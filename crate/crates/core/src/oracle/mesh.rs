//! Shortest paths on a lattice graph covering the box surface.
//!
//! Each face is a rectangular lattice; a vertex is joined to every lattice
//! point of the same face reachable by a primitive offset with both
//! components at most [`RING`].  Vertices on an edge belong to both faces,
//! so paths change face there.  The two endpoints join every lattice point
//! within a fixed radius on their own face and, by unfolded distance, on
//! adjacent faces.  Graph paths are surface paths, so the result never
//! undercuts the true geodesic.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_integer::Integer;
use serde::Serialize;

use crate::distances::{BoxDims, SurfacePoint};

/// Offset ring size.  The worst angular gap between primitive offsets with
/// components up to 5 costs under half a percent of length.
pub const RING: i32 = 5;

/// Endpoint connection radius in box units; fixed so that refining the
/// lattice only adds edges.
const ENDPOINT_RADIUS: f64 = RING as f64 / 32.0;

#[derive(Debug, Clone, Serialize)]
pub struct MeshGeodesic {
    pub n: usize,
    pub vertices: usize,
    /// Cells along the x, y and z edges of the box.
    pub cells: [usize; 3],
    pub distance: f64,
}

/// Lattice cells along an edge of length `len`.  For `n` a multiple of 32
/// the count doubles with `n`, so lattices along a doubling ladder nest.
pub fn cells_along(len: f64, n: usize) -> usize {
    if n % 32 == 0 {
        ((32.0 * len).ceil() as usize).max(1) * (n / 32)
    } else {
        ((len * n as f64).ceil() as usize).max(1)
    }
}

struct Lattice {
    m: [i32; 3],
    h: [f64; 3],
    lo: [f64; 3],
    ring_len: i32,
    top_len: usize,
}

impl Lattice {
    fn new(dims: &BoxDims, n: usize) -> Self {
        let len = [dims.a(), 1.0, dims.b()];
        let m = len.map(|l| cells_along(l, n) as i32);
        let h = [len[0] / m[0] as f64, len[1] / m[1] as f64, len[2] / m[2] as f64];
        Lattice {
            m,
            h,
            lo: [-dims.half_a(), -0.5, 0.0],
            ring_len: 2 * (m[0] + m[1]),
            top_len: ((m[0] + 1) * (m[1] + 1)) as usize,
        }
    }

    fn count(&self) -> usize {
        2 * self.top_len + (self.m[2] - 1).max(0) as usize * self.ring_len as usize
    }

    fn on_surface(&self, c: [i32; 3]) -> bool {
        (0..3).all(|k| c[k] >= 0 && c[k] <= self.m[k]) && (0..3).any(|k| c[k] == 0 || c[k] == self.m[k])
    }

    /// Index of a surface lattice point; `k` counts down from the top face.
    fn id(&self, c: [i32; 3]) -> usize {
        let [i, j, k] = c;
        let (mx, my) = (self.m[0], self.m[1]);
        if k == 0 {
            return (i * (my + 1) + j) as usize;
        }
        if k == self.m[2] {
            return self.top_len + (i * (my + 1) + j) as usize;
        }
        let r = if j == 0 {
            i
        } else if i == mx {
            mx + j
        } else if j == my {
            mx + my + (mx - i)
        } else {
            2 * mx + my + (my - j)
        };
        2 * self.top_len + ((k - 1) * self.ring_len + r) as usize
    }

    fn coords(&self, id: usize) -> [i32; 3] {
        let (mx, my) = (self.m[0], self.m[1]);
        if id < 2 * self.top_len {
            let (k, rest) = if id < self.top_len { (0, id) } else { (self.m[2], id - self.top_len) };
            let rest = rest as i32;
            return [rest / (my + 1), rest % (my + 1), k];
        }
        let rest = (id - 2 * self.top_len) as i32;
        let k = rest / self.ring_len + 1;
        let r = rest % self.ring_len;
        let (i, j) = if r < mx {
            (r, 0)
        } else if r < mx + my {
            (mx, r - mx)
        } else if r < 2 * mx + my {
            (mx - (r - mx - my), my)
        } else {
            (0, my - (r - 2 * mx - my))
        };
        [i, j, k]
    }

    /// Position with the third coordinate measured down from the top face.
    fn position(&self, c: [i32; 3]) -> [f64; 3] {
        [0, 1, 2].map(|k| self.lo[k] + c[k] as f64 * self.h[k])
    }
}

/// A face as (fixed axis, fixed lattice value).
type FaceKey = (usize, i32);

fn faces_of(l: &Lattice, c: [i32; 3]) -> impl Iterator<Item = FaceKey> + '_ {
    (0..3).flat_map(move |ax| {
        let mut v = Vec::with_capacity(2);
        if c[ax] == 0 {
            v.push((ax, 0));
        }
        if c[ax] == l.m[ax] {
            v.push((ax, l.m[ax]));
        }
        v
    })
}

fn free_axes(ax: usize) -> (usize, usize) {
    match ax {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

fn primitive_offsets() -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for p in -RING..=RING {
        for q in -RING..=RING {
            if (p, q) != (0, 0) && p.gcd(&q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

/// Endpoint edges: lattice points within the radius on the endpoint's face,
/// plus points on adjacent faces measured through the shared edge.
fn endpoint_edges(l: &Lattice, pos: [f64; 3], face: FaceKey) -> HashMap<usize, f64> {
    let mut out = HashMap::new();
    let (fa, fv) = face;
    let (p_ax, q_ax) = free_axes(fa);
    let rho = ENDPOINT_RADIUS;
    let lat = |ax: usize, x: f64| (x - l.lo_axis(ax)) / l.h[ax];
    let range = |ax: usize| {
        let c = lat(ax, pos[ax]);
        let r = rho / l.h[ax];
        (((c - r).ceil() as i32).max(0), ((c + r).floor() as i32).min(l.m[ax]))
    };
    let (p0, p1) = range(p_ax);
    let (q0, q1) = range(q_ax);
    for p in p0..=p1 {
        for q in q0..=q1 {
            let mut c = [0; 3];
            c[fa] = fv;
            c[p_ax] = p;
            c[q_ax] = q;
            let w = l.position(c);
            let d = ((w[p_ax] - pos[p_ax]).powi(2) + (w[q_ax] - pos[q_ax]).powi(2)).sqrt();
            out.insert(l.id(c), d);
        }
    }
    // across each of the four edges of the face
    for (ga, gv) in [(p_ax, 0), (p_ax, l.m[p_ax]), (q_ax, 0), (q_ax, l.m[q_ax])] {
        let along = if ga == p_ax { q_ax } else { p_ax };
        let edge_pos = l.lo_axis(ga) + gv as f64 * l.h[ga];
        let d_self = (pos[ga] - edge_pos).abs();
        if d_self > rho {
            continue;
        }
        let (a0, a1) = range(along);
        let depth = ((rho / l.h[fa]).floor() as i32).min(l.m[fa]);
        for s in a0..=a1 {
            for t in 1..=depth {
                let mut c = [0; 3];
                c[ga] = gv;
                c[along] = s;
                c[fa] = if fv == 0 { t } else { fv - t };
                let w = l.position(c);
                let d_other = (w[fa] - l.position_axis(fa, fv)).abs();
                let da = w[along] - pos[along];
                let d = (da * da + (d_self + d_other).powi(2)).sqrt();
                let e = out.entry(l.id(c)).or_insert(f64::INFINITY);
                *e = e.min(d);
            }
        }
    }
    out
}

impl Lattice {
    fn lo_axis(&self, ax: usize) -> f64 {
        self.lo[ax]
    }

    fn position_axis(&self, ax: usize, v: i32) -> f64 {
        let mut c = [0; 3];
        c[ax] = v;
        self.position(c)[ax]
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeshError {
    #[error("mesh resolution must be at least 32 (got {0})")]
    Resolution(usize),
}

/// Shortest graph distance from `pt` on the top face to its antipode.
pub fn mesh_geodesic(dims: &BoxDims, pt: &SurfacePoint, n: usize) -> Result<MeshGeodesic, MeshError> {
    if n < 32 {
        return Err(MeshError::Resolution(n));
    }
    let l = Lattice::new(dims, n);
    let count = l.count();
    let spider = [pt.x(), pt.y(), 0.0];
    let fly = [-pt.x(), -pt.y(), dims.b()];
    let src = endpoint_edges(&l, spider, (2, 0));
    let dst = endpoint_edges(&l, fly, (2, l.m[2]));
    let heur = |c: [i32; 3]| {
        let p = l.position(c);
        ((p[0] - fly[0]).powi(2) + (p[1] - fly[1]).powi(2) + (p[2] - fly[2]).powi(2)).sqrt()
    };

    let offsets = primitive_offsets();
    let mut weights: [Vec<f64>; 3] = Default::default();
    for (ax, w) in weights.iter_mut().enumerate() {
        let (p_ax, q_ax) = free_axes(ax);
        *w = offsets
            .iter()
            .map(|&(p, q)| ((p as f64 * l.h[p_ax]).powi(2) + (q as f64 * l.h[q_ax]).powi(2)).sqrt())
            .collect();
    }

    let target = count;
    let mut g = vec![f64::INFINITY; count + 1];
    let mut done = vec![false; count + 1];
    let mut heap = BinaryHeap::new();
    let key = |f: f64| Reverse(f.to_bits());
    for (&v, &w) in &src {
        if w < g[v] {
            g[v] = w;
            heap.push((key(w + heur(l.coords(v))), v));
        }
    }
    while let Some((Reverse(_), u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == target {
            break;
        }
        let gu = g[u];
        if let Some(&w) = dst.get(&u) {
            if gu + w < g[target] {
                g[target] = gu + w;
                heap.push((key(gu + w), target));
            }
        }
        let c = l.coords(u);
        for (fa, _) in faces_of(&l, c) {
            let (p_ax, q_ax) = free_axes(fa);
            for (k, &(dp, dq)) in offsets.iter().enumerate() {
                let mut nc = c;
                nc[p_ax] += dp;
                nc[q_ax] += dq;
                if nc[p_ax] < 0 || nc[p_ax] > l.m[p_ax] || nc[q_ax] < 0 || nc[q_ax] > l.m[q_ax] {
                    continue;
                }
                debug_assert!(l.on_surface(nc));
                let v = l.id(nc);
                if done[v] {
                    continue;
                }
                let nd = gu + weights[fa][k];
                if nd < g[v] {
                    g[v] = nd;
                    heap.push((key(nd + heur(nc)), v));
                }
            }
        }
    }
    Ok(MeshGeodesic { n, vertices: count, cells: l.m.map(|v| v as usize), distance: g[target] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_ids_round_trip() {
        let d = BoxDims::new(0.7, 1.3).unwrap();
        let l = Lattice::new(&d, 40);
        let mut seen = vec![false; l.count()];
        for i in 0..=l.m[0] {
            for j in 0..=l.m[1] {
                for k in 0..=l.m[2] {
                    let c = [i, j, k];
                    if !l.on_surface(c) {
                        continue;
                    }
                    let id = l.id(c);
                    assert!(!seen[id], "{c:?}");
                    seen[id] = true;
                    assert_eq!(l.coords(id), c);
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn nested_cell_counts() {
        for len in [0.3, 1.0, 2.71] {
            assert_eq!(cells_along(len, 64), 2 * cells_along(len, 32));
        }
    }

    #[test]
    fn unit_cube_centre() {
        let d = BoxDims::new(1.0, 1.0).unwrap();
        let p = SurfacePoint::new(&d, 0.0, 0.0).unwrap();
        let m = mesh_geodesic(&d, &p, 64).unwrap().distance;
        assert!((2.0 - 1e-12..=2.0 * 1.01).contains(&m), "{m}");
        assert!(mesh_geodesic(&d, &p, 16).is_err());
    }
}
