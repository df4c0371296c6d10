//! Combinatorial fingerprint of a labelled `F`.
//!
//! Components come from the raster.  Everything else comes from the exact
//! pair conics, so features of zero width (a junction sitting on a side, a
//! tie at a corner) survive.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::algebra::{triple_intersections, Side, SideContact};
use crate::distances::{six_values, BoxDims, PathLabel, SurfacePoint, CANONICAL_SIX};

use super::arcs::{boundary_arcs, pair_conics, PairConic};
use super::raster::LabeledRaster;
use super::RegionError;

/// Largest tie-cell fraction for which a signature is computed.
pub const MAX_TIE_FRACTION: f64 = 0.2;
/// Relative tolerance for ties at analytic points.
pub const POINT_TIE_TOL: f64 = 1e-8;
/// Breakpoints on a side closer than this are one point.
const MERGE_TOL: f64 = 1e-9;

/// Shorter shared boundaries are tolerance artefacts at a junction.
const MIN_ARC: f64 = 1e-6;

fn arc_length(pts: &[(f64, f64)]) -> f64 {
    pts.windows(2).map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1)).sum()
}

/// The corners of `F` in signature order.
pub const CORNERS: [&str; 4] = ["(0,0)", "(0,1/2)", "(a/2,0)", "(a/2,1/2)"];

fn corner_points(dims: &BoxDims) -> [(f64, f64); 4] {
    let h = dims.half_a();
    [(0.0, 0.0), (0.0, 0.5), (h, 0.0), (h, 0.5)]
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "labels", rename_all = "snake_case")]
pub enum SideItem {
    /// A stretch of positive length on which these labels are smallest.
    Run(Vec<PathLabel>),
    /// An isolated point where these labels tie for smallest.
    Point(Vec<PathLabel>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionSignature {
    /// Labels whose regions reach each corner, in [`CORNERS`] order.
    pub corner_labels: Vec<Vec<PathLabel>>,
    /// Per side, in increasing `x` or `y`.
    pub side_sequences: BTreeMap<Side, Vec<SideItem>>,
    /// Region count per label.
    pub components: BTreeMap<PathLabel, usize>,
    /// Label pairs whose regions share a boundary curve.
    pub adjacency: BTreeSet<(PathLabel, PathLabel)>,
    /// Tie sets of interior points where three or more regions meet.
    pub interior_junctions: Vec<Vec<PathLabel>>,
}

fn tie_set(dims: &BoxDims, p: (f64, f64)) -> Vec<PathLabel> {
    let v = six_values(dims, &SurfacePoint::raw(p.0, p.1));
    let m = v.iter().copied().fold(f64::INFINITY, f64::min);
    let cut = m + POINT_TIE_TOL * m.abs();
    CANONICAL_SIX.iter().zip(v).filter(|(_, v)| *v <= cut).map(|(&l, _)| l).collect()
}

fn argmin(dims: &BoxDims, p: (f64, f64)) -> PathLabel {
    let v = six_values(dims, &SurfacePoint::raw(p.0, p.1));
    let k = (0..6).fold(0, |m, k| if v[k] < v[m] { k } else { m });
    CANONICAL_SIX[k]
}

/// Labels tied at the corner whose regions actually enter `F` there.
fn corner_labels(dims: &BoxDims, c: (f64, f64)) -> Vec<PathLabel> {
    let ties = tie_set(dims, c);
    if ties.len() == 1 {
        return ties;
    }
    let sx = if c.0 > 0.0 { -1.0 } else { 1.0 };
    let sy = if c.1 > 0.0 { -1.0 } else { 1.0 };
    let mut seen = BTreeSet::new();
    for r in [1e-6, 1e-5] {
        // open quarter disc only: two labels can agree along a whole side
        for k in 1..64 {
            let th = std::f64::consts::FRAC_PI_2 * k as f64 / 64.0;
            let p = (c.0 + sx * r * th.cos(), c.1 + sy * r * th.sin());
            seen.insert(argmin(dims, p));
        }
    }
    ties.into_iter().filter(|l| seen.contains(l)).collect()
}

/// Unit normal of a side pointing into `F`.
fn inward(side: Side) -> (f64, f64) {
    match side {
        Side::X0 => (1.0, 0.0),
        Side::XHalf => (-1.0, 0.0),
        Side::Y0 => (0.0, 1.0),
        Side::YHalf => (0.0, -1.0),
    }
}

/// Parameters along `side` where the conic changes sign.  A conic that
/// contains the side is the side times a line; the line crosses where the
/// normal derivative vanishes.
fn side_breakpoints(dims: &BoxDims, pc: &PairConic, side: Side) -> Vec<f64> {
    let mut out = Vec::new();
    for c in &pc.contacts {
        match *c {
            SideContact::Point { side: s, t, .. } if s == side => out.push(t),
            SideContact::WholeSide { side: s } if s == side => {
                let f = &pc.f;
                let t = match side {
                    Side::X0 | Side::XHalf => {
                        let x = if side == Side::X0 { 0.0 } else { dims.half_a() };
                        -(2.0 * f.xx * x + f.x) / f.xy
                    }
                    Side::Y0 | Side::YHalf => {
                        let y = if side == Side::Y0 { 0.0 } else { 0.5 };
                        -(2.0 * f.yy * y + f.y) / f.xy
                    }
                };
                if t.is_finite() {
                    out.push(t);
                }
            }
            _ => {}
        }
    }
    out
}

fn side_sequence(dims: &BoxDims, conics: &[PairConic], side: Side) -> Vec<SideItem> {
    let len = match side {
        Side::X0 | Side::XHalf => 0.5,
        Side::Y0 | Side::YHalf => dims.half_a(),
    };
    let mut ts = vec![0.0, len];
    for pc in conics {
        ts.extend(side_breakpoints(dims, pc, side).into_iter().filter(|t| (0.0..=len).contains(t)));
    }
    ts.sort_by(f64::total_cmp);
    let mut clusters: Vec<f64> = Vec::new();
    for t in ts {
        match clusters.last() {
            Some(&l) if t - l <= MERGE_TOL => {}
            _ => clusters.push(t),
        }
    }
    if let Some(l) = clusters.last_mut() {
        if len - *l <= MERGE_TOL {
            *l = len;
        }
    }
    let at = |t: f64| side.point(dims.a(), t);
    let n = inward(side);
    let eps = 1e-6 * len;
    let mut points = Vec::new();
    let mut runs = Vec::new();
    for (k, &t) in clusters.iter().enumerate() {
        points.push(tie_set(dims, at(t)));
        if let Some(&next) = clusters.get(k + 1) {
            let m = at((t + next) / 2.0);
            let inside = (m.0 + eps * n.0, m.1 + eps * n.1);
            runs.push((tie_set(dims, m), vec![argmin(dims, inside)]));
        }
    }
    // a point is kept when the ties there differ from the ties on the side
    // to either hand; points with a single label are ordinary
    let mut out: Vec<SideItem> = Vec::new();
    for (k, p) in points.iter().enumerate() {
        let left = k.checked_sub(1).map(|i| &runs[i].0);
        let right = runs.get(k).map(|r| &r.0);
        let plain = left.map_or(true, |l| l == p) && right.map_or(true, |r| r == p);
        if p.len() > 1 && !plain {
            out.push(SideItem::Point(p.clone()));
        }
        if let Some((_, inner)) = runs.get(k) {
            let run = SideItem::Run(inner.clone());
            if out.last() != Some(&run) {
                out.push(run);
            }
        }
    }
    out
}

/// Points of `F` off the sides where three or more labels tie for smallest.
fn interior_junctions(dims: &BoxDims) -> Vec<Vec<PathLabel>> {
    let six = CANONICAL_SIX;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                let Ok(found) = triple_intersections(six[i], six[j], six[k], dims) else {
                    continue;
                };
                for p in found {
                    let p = (p.x(), p.y());
                    let on_side = p.0 <= MERGE_TOL
                        || p.1 <= MERGE_TOL
                        || dims.half_a() - p.0 <= MERGE_TOL
                        || 0.5 - p.1 <= MERGE_TOL;
                    if on_side || pts.iter().any(|q| (q.0 - p.0).hypot(q.1 - p.1) < 1e-7) {
                        continue;
                    }
                    if tie_set(dims, p).len() >= 3 {
                        pts.push(p);
                    }
                }
            }
        }
    }
    let mut out: Vec<Vec<PathLabel>> = pts.into_iter().map(|p| tie_set(dims, p)).collect();
    out.sort();
    out
}

/// 4-connected components of equal argmin; a component counts only if it
/// holds at least one cell where its label is certainly smallest.
pub(crate) fn components(r: &LabeledRaster) -> Vec<(PathLabel, Vec<usize>)> {
    let n = r.cells.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let lab = r.cells[start];
        let mut cells = Vec::new();
        let mut strict = false;
        seen[start] = true;
        stack.push(start);
        while let Some(k) = stack.pop() {
            cells.push(k);
            strict |= !r.is_tie(k);
            let (i, j) = (k % r.nx, k / r.nx);
            let mut nb = Vec::with_capacity(4);
            if i > 0 {
                nb.push(k - 1);
            }
            if i + 1 < r.nx {
                nb.push(k + 1);
            }
            if j > 0 {
                nb.push(k - r.nx);
            }
            if j + 1 < r.ny {
                nb.push(k + r.nx);
            }
            for m in nb {
                if !seen[m] && r.cells[m] == lab {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        if strict {
            out.push((CANONICAL_SIX[lab as usize], cells));
        }
    }
    out
}

pub fn signature(r: &LabeledRaster) -> Result<RegionSignature, RegionError> {
    let tf = r.tie_fraction();
    if tf >= MAX_TIE_FRACTION {
        return Err(RegionError::TooManyTies { fraction: tf, a: r.dims.a(), b: r.dims.b() });
    }
    let dims = &r.dims;
    let comps = components(r);
    let mut counts: BTreeMap<PathLabel, usize> = BTreeMap::new();
    for (l, _) in &comps {
        *counts.entry(*l).or_default() += 1;
    }
    // arcs lying along a side of F separate nothing
    let along_side = |pts: &[(f64, f64)]| {
        let h = dims.half_a();
        let all = |f: &dyn Fn(&(f64, f64)) -> bool| pts.iter().all(f);
        all(&|p| p.0 <= MERGE_TOL)
            || all(&|p| h - p.0 <= MERGE_TOL)
            || all(&|p| p.1 <= MERGE_TOL)
            || all(&|p| 0.5 - p.1 <= MERGE_TOL)
    };
    let adjacency = boundary_arcs(dims)
        .into_iter()
        .filter(|arc| !along_side(&arc.points) && arc_length(&arc.points) > MIN_ARC)
        .map(|arc| arc.labels)
        .collect();
    let conics = pair_conics(dims);
    let side_sequences: BTreeMap<Side, Vec<SideItem>> =
        Side::ALL.iter().map(|&s| (s, side_sequence(dims, &conics, s))).collect();
    let mut corners: Vec<Vec<PathLabel>> =
        corner_points(dims).iter().map(|&c| corner_labels(dims, c)).collect();
    // a region squeezed against a side can reach a corner in a cusp that the
    // angular probe misses; the side runs see it
    for (&side, items) in &side_sequences {
        let (c0, c1) = RegionSignature::side_corners(side);
        let runs: Vec<&Vec<PathLabel>> = items
            .iter()
            .filter_map(|i| match i {
                SideItem::Run(l) => Some(l),
                SideItem::Point(_) => None,
            })
            .collect();
        for (c, run) in [(c0, runs.first()), (c1, runs.last())] {
            for l in run.into_iter().flat_map(|r| r.iter()) {
                if !corners[c].contains(l) {
                    corners[c].push(*l);
                    corners[c].sort();
                }
            }
        }
    }
    Ok(RegionSignature {
        corner_labels: corners,
        side_sequences,
        components: counts,
        adjacency,
        interior_junctions: interior_junctions(dims),
    })
}

impl RegionSignature {
    /// Corners at the start and end of each side, as indices into
    /// [`CORNERS`].
    pub fn side_corners(side: Side) -> (usize, usize) {
        match side {
            Side::X0 => (0, 1),
            Side::XHalf => (2, 3),
            Side::Y0 => (0, 2),
            Side::YHalf => (1, 3),
        }
    }

    /// Every run touching a corner uses only labels listed at that corner.
    pub fn endpoints_consistent(&self) -> bool {
        self.side_sequences.iter().all(|(&side, items)| {
            let (c0, c1) = Self::side_corners(side);
            let runs: Vec<&Vec<PathLabel>> = items
                .iter()
                .filter_map(|i| match i {
                    SideItem::Run(l) => Some(l),
                    SideItem::Point(_) => None,
                })
                .collect();
            let ok = |run: Option<&&Vec<PathLabel>>, c: usize| {
                run.is_some_and(|r| r.iter().all(|l| self.corner_labels[c].contains(l)))
            };
            ok(runs.first(), c0) && ok(runs.last(), c1)
        })
    }
}
