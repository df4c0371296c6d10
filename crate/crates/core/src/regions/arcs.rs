//! Tracing the curves `d_alpha = d_beta` through `F` and keeping the parts
//! where the pair is the minimum.

use serde::Serialize;

use crate::algebra::{
    conic_classify_with, pair_conic, q_from_f64, side_intersections_with, ConicKind, PlaneConic, SideContact,
    ZeroTest,
};
use crate::distances::{six_values, BoxDims, PathLabel, SurfacePoint, CANONICAL_SIX};

/// Relative slack for "this label attains the minimum".
pub const ON_MIN_TOL: f64 = 1e-9;
/// Tangency and degeneracy test for conics built from floating-point boxes.
pub const CONIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Conic64 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
    pub x: f64,
    pub y: f64,
    pub c: f64,
}

impl Conic64 {
    fn from_plane(p: &PlaneConic) -> Self {
        let [xx, xy, yy, x, y, c] = p.coefficients().map(crate::algebra::q_to_f64);
        Conic64 { xx, xy, yy, x, y, c }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.xx * x + self.xy * y + self.x) * x + (self.yy * y + self.y) * y + self.c
    }

    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        (2.0 * self.xx * x + self.xy * y + self.x, self.xy * x + 2.0 * self.yy * y + self.y)
    }

    /// Newton steps along the gradient onto the zero set.
    fn project(&self, mut p: (f64, f64)) -> (f64, f64) {
        for _ in 0..8 {
            let f = self.eval(p.0, p.1);
            let (gx, gy) = self.gradient(p.0, p.1);
            let g2 = gx * gx + gy * gy;
            if g2 < 1e-300 {
                break;
            }
            p = (p.0 - f * gx / g2, p.1 - f * gy / g2);
            if f.abs() < 1e-16 {
                break;
            }
        }
        p
    }
}

/// The conic for every unordered pair of the six labels at one box.
pub(crate) struct PairConic {
    pub alpha: PathLabel,
    pub beta: PathLabel,
    pub plane: PlaneConic,
    pub f: Conic64,
    pub contacts: Vec<SideContact>,
}

pub(crate) fn pair_conics(dims: &BoxDims) -> Vec<PairConic> {
    let aq = q_from_f64(dims.a());
    let mut out = Vec::new();
    for (i, &alpha) in CANONICAL_SIX.iter().enumerate() {
        for &beta in &CANONICAL_SIX[i + 1..] {
            let plane = pair_conic(alpha, beta, dims).expect("distinct canonical labels").plane;
            let contacts = side_intersections_with(&plane, &aq, ZeroTest::Relative(CONIC_TOL));
            out.push(PairConic { alpha, beta, f: Conic64::from_plane(&plane), plane, contacts });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryArc {
    pub labels: (PathLabel, PathLabel),
    pub points: Vec<(f64, f64)>,
}

fn inside(dims: &BoxDims, p: (f64, f64), slack: f64) -> bool {
    p.0 >= -slack && p.0 <= dims.half_a() + slack && p.1 >= -slack && p.1 <= 0.5 + slack
}

/// Whether both labels of the pair attain the minimum at `p`.
fn on_min(dims: &BoxDims, pc: &PairConic, p: (f64, f64)) -> bool {
    let v = six_values(dims, &SurfacePoint::raw(p.0, p.1));
    let m = v.iter().copied().fold(f64::INFINITY, f64::min);
    let idx = |l| CANONICAL_SIX.iter().position(|&c| c == l).expect("canonical");
    let cut = m + ON_MIN_TOL * m.abs();
    v[idx(pc.alpha)] <= cut && v[idx(pc.beta)] <= cut
}

/// Clip `p0 + s u` to `F`.
fn clip_line(dims: &BoxDims, p0: (f64, f64), u: (f64, f64)) -> Option<((f64, f64), (f64, f64))> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (p, d, max) in [(p0.0, u.0, dims.half_a()), (p0.1, u.1, 0.5)] {
        if d.abs() < 1e-300 {
            if p < -1e-12 || p > max + 1e-12 {
                return None;
            }
            continue;
        }
        let (s0, s1) = ((0.0 - p) / d, (max - p) / d);
        lo = lo.max(s0.min(s1));
        hi = hi.min(s0.max(s1));
    }
    if hi - lo < 1e-12 {
        return None;
    }
    let at = |s: f64| ((p0.0 + s * u.0).clamp(0.0, dims.half_a()), (p0.1 + s * u.1).clamp(0.0, 0.5));
    Some((at(lo), at(hi)))
}

fn sample_segment(a: (f64, f64), b: (f64, f64), step: f64) -> Vec<(f64, f64)> {
    let len = (b.0 - a.0).hypot(b.1 - a.1);
    let n = ((len / step).ceil() as usize).max(1);
    (0..=n)
        .map(|k| {
            let t = k as f64 / n as f64;
            (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
        })
        .collect()
}

/// Polylines covering the part of the conic inside `F`.
fn conic_pieces(dims: &BoxDims, pc: &PairConic, step: f64) -> Vec<Vec<(f64, f64)>> {
    let f = pc.f;
    let kind = conic_classify_with(&pc.plane, ZeroTest::Relative(CONIC_TOL));
    match kind {
        Ok(ConicKind::Line) => {
            // f.x * x + f.y * y + f.c = 0
            let n = f.x.hypot(f.y);
            let p0 = (-f.c * f.x / (n * n), -f.c * f.y / (n * n));
            clip_line(dims, p0, (-f.y / n, f.x / n))
                .map(|(a, b)| vec![sample_segment(a, b, step)])
                .unwrap_or_default()
        }
        Ok(ConicKind::DegenerateHyperbola) => {
            // two lines through the centre
            let det = 4.0 * f.xx * f.yy - f.xy * f.xy;
            let cx = (-2.0 * f.yy * f.x + f.xy * f.y) / det;
            let cy = (f.xy * f.x - 2.0 * f.xx * f.y) / det;
            let mut dirs: Vec<(f64, f64)> = Vec::new();
            if f.yy.abs() > 1e-300 {
                // yy v^2 + xy v + xx = 0 with direction (1, v)
                let disc = (f.xy * f.xy - 4.0 * f.xx * f.yy).max(0.0).sqrt();
                for s in [-1.0, 1.0] {
                    dirs.push((1.0, (-f.xy + s * disc) / (2.0 * f.yy)));
                }
            } else {
                dirs.push((0.0, 1.0));
                // xx + xy v = 0
                dirs.push((1.0, -f.xx / f.xy));
            }
            dirs.into_iter()
                .filter_map(|(ux, uy)| {
                    let n = ux.hypot(uy);
                    clip_line(dims, (cx, cy), (ux / n, uy / n))
                })
                .map(|(a, b)| sample_segment(a, b, step))
                .collect()
        }
        _ => march_hyperbola(dims, pc, step),
    }
}

fn march_hyperbola(dims: &BoxDims, pc: &PairConic, step: f64) -> Vec<Vec<(f64, f64)>> {
    let f = pc.f;
    let seeds: Vec<(f64, f64)> = pc
        .contacts
        .iter()
        .filter_map(|c| match *c {
            SideContact::Point { x, y, multiplicity: 1, .. } => Some((x, y)),
            _ => None,
        })
        .collect();
    let mut used = vec![false; seeds.len()];
    let mut out = Vec::new();
    let max_steps = (4.0 * (dims.half_a() + 0.5) / step) as usize + 10;
    for s in 0..seeds.len() {
        if used[s] {
            continue;
        }
        used[s] = true;
        let start = seeds[s];
        let (gx, gy) = f.gradient(start.0, start.1);
        let gn = gx.hypot(gy);
        let mut t = (-gy / gn, gx / gn);
        // point the tangent into F
        let probe = (start.0 + 1e-6 * t.0, start.1 + 1e-6 * t.1);
        if !inside(dims, probe, 0.0) {
            t = (-t.0, -t.1);
            let probe = (start.0 + 1e-6 * t.0, start.1 + 1e-6 * t.1);
            if !inside(dims, probe, 0.0) {
                continue;
            }
        }
        let mut pts = vec![start];
        let mut p = start;
        for _ in 0..max_steps {
            let q = f.project((p.0 + step * t.0, p.1 + step * t.1));
            if !inside(dims, q, 0.0) {
                // finish at the nearest unused seed
                let end = seeds.iter().enumerate().filter(|(k, _)| *k != s).min_by(|x, y| {
                    let dx = (x.1 .0 - q.0).hypot(x.1 .1 - q.1);
                    let dy = (y.1 .0 - q.0).hypot(y.1 .1 - q.1);
                    dx.total_cmp(&dy)
                });
                if let Some((k, &e)) = end {
                    used[k] = true;
                    pts.push(e);
                }
                break;
            }
            let (gx, gy) = f.gradient(q.0, q.1);
            let gn = gx.hypot(gy);
            let nt = (-gy / gn, gx / gn);
            t = if nt.0 * t.0 + nt.1 * t.1 < 0.0 { (-nt.0, -nt.1) } else { nt };
            pts.push(q);
            p = q;
        }
        if pts.len() >= 2 {
            out.push(pts);
        }
    }
    out
}

/// Bisect between a point on the minimum and one off it, staying on the conic.
fn refine(dims: &BoxDims, pc: &PairConic, mut good: (f64, f64), mut bad: (f64, f64)) -> (f64, f64) {
    for _ in 0..60 {
        let mid = pc.f.project(((good.0 + bad.0) / 2.0, (good.1 + bad.1) / 2.0));
        if on_min(dims, pc, mid) {
            good = mid;
        } else {
            bad = mid;
        }
        if (good.0 - bad.0).hypot(good.1 - bad.1) < 1e-13 {
            break;
        }
    }
    good
}

/// The whole curve `d_alpha = d_beta` inside `F`, whether or not the pair
/// is smallest there.
pub fn trace_pair_curve(dims: &BoxDims, alpha: PathLabel, beta: PathLabel) -> Vec<Vec<(f64, f64)>> {
    let step = dims.half_a().min(0.5) / 200.0;
    pair_conics(dims)
        .into_iter()
        .find(|pc| (pc.alpha, pc.beta) == (alpha, beta) || (pc.beta, pc.alpha) == (alpha, beta))
        .map(|pc| conic_pieces(dims, &pc, step))
        .unwrap_or_default()
}

/// Boundary curves between regions: for each pair of the six labels, the
/// parts of `d_alpha = d_beta` inside `F` where both attain the minimum.
pub fn boundary_arcs(dims: &BoxDims) -> Vec<BoundaryArc> {
    let step = dims.half_a().min(0.5) / 200.0;
    let mut out = Vec::new();
    for pc in pair_conics(dims) {
        for piece in conic_pieces(dims, &pc, step) {
            let flags: Vec<bool> = piece.iter().map(|&p| on_min(dims, &pc, p)).collect();
            let mut cur: Vec<(f64, f64)> = Vec::new();
            for k in 0..piece.len() {
                if flags[k] {
                    if cur.is_empty() && k > 0 {
                        cur.push(refine(dims, &pc, piece[k], piece[k - 1]));
                    }
                    cur.push(piece[k]);
                } else if !cur.is_empty() {
                    let last = *cur.last().expect("nonempty");
                    cur.push(refine(dims, &pc, last, piece[k]));
                    push_arc(&mut out, &pc, std::mem::take(&mut cur));
                }
            }
            push_arc(&mut out, &pc, cur);
        }
    }
    out
}

fn push_arc(out: &mut Vec<BoundaryArc>, pc: &PairConic, mut pts: Vec<(f64, f64)>) {
    pts.dedup_by(|p, q| (p.0 - q.0).hypot(p.1 - q.1) < 1e-14);
    let len: f64 = pts.windows(2).map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1)).sum();
    if pts.len() >= 2 && len > 1e-9 {
        out.push(BoundaryArc { labels: (pc.alpha, pc.beta), points: pts });
    }
}
