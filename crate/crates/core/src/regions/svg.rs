//! SVG output for a labelled `F` and for the class partition of the plank.
//! Output is deterministic: fixed palette, fixed number formatting.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{classify, Classification, Curve};
use crate::distances::CANONICAL_SIX;

use super::arcs::BoundaryArc;
use super::raster::LabeledRaster;
use super::signature::components;

const LABEL_COLORS: [&str; 6] = ["#8dd3c7", "#fdb462", "#bebada", "#fb8072", "#80b1d3", "#b3de69"];

/// Pixels along the longer side of `F`.
const F_PIXELS: f64 = 800.0;

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    );
}

/// Cells as row runs of equal argmin, boundary arcs, and a label per region.
pub fn region_svg(r: &LabeledRaster, arcs: &[BoundaryArc]) -> String {
    let (hx, hy) = r.cell_size();
    let scale = F_PIXELS / r.dims.half_a().max(0.5);
    let (w, h) = (r.dims.half_a() * scale, 0.5 * scale);
    let margin = 30.0;
    let mut s = String::new();
    header(&mut s, w + 2.0 * margin, h + 2.0 * margin);
    let px = |x: f64| margin + x * scale;
    let py = |y: f64| margin + h - y * scale;
    let _ = writeln!(
        s,
        r#"<text x="{margin}" y="20" font-family="sans-serif" font-size="14">a = {}, b = {}</text>"#,
        r.dims.a(),
        r.dims.b()
    );
    for j in 0..r.ny {
        let mut i = 0;
        while i < r.nx {
            let lab = r.cells[r.index(i, j)];
            let mut e = i + 1;
            while e < r.nx && r.cells[r.index(e, j)] == lab {
                e += 1;
            }
            let (x0, x1) = (px(i as f64 * hx), px(e as f64 * hx));
            let (y1, y0) = (py(j as f64 * hy), py((j + 1) as f64 * hy));
            let _ = writeln!(
                s,
                r#"<rect x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                x1 - x0,
                y1 - y0 + 0.05,
                LABEL_COLORS[lab as usize]
            );
            i = e;
        }
    }
    let _ = writeln!(
        s,
        r#"<rect x="{:.3}" y="{:.3}" width="{w:.3}" height="{h:.3}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        px(0.0),
        py(0.5)
    );
    for arc in arcs {
        let pts: Vec<String> =
            arc.points.iter().map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="black" stroke-width="1"><title>{}/{}</title></polyline>"#,
            pts.join(" "),
            arc.labels.0,
            arc.labels.1
        );
    }
    for (label, cells) in components(r) {
        // the cell nearest the centroid
        let n = cells.len() as f64;
        let (cx, cy) = cells.iter().fold((0.0, 0.0), |acc, &k| {
            let c = r.center(k % r.nx, k / r.nx);
            (acc.0 + c.0 / n, acc.1 + c.1 / n)
        });
        let best = cells
            .iter()
            .filter(|&&k| !r.is_tie(k))
            .min_by(|&&p, &&q| {
                let cp = r.center(p % r.nx, p / r.nx);
                let cq = r.center(q % r.nx, q / r.nx);
                (cp.0 - cx).hypot(cp.1 - cy).total_cmp(&(cq.0 - cx).hypot(cq.1 - cy))
            })
            .copied()
            .unwrap_or(cells[0]);
        let (x, y) = r.center(best % r.nx, best / r.nx);
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="13" text-anchor="middle">{label}</text>"#,
            px(x),
            py(y)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Class per grid cell of a window of the plank.
#[derive(Debug, Clone, Serialize)]
pub struct PlankGrid {
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub na: usize,
    pub nb: usize,
    /// Class id per cell centre, `b` outer; `None` for ambiguous points.
    pub cells: Vec<Option<u8>>,
}

impl PlankGrid {
    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        let da = (self.a_range.1 - self.a_range.0) / self.na as f64;
        let db = (self.b_range.1 - self.b_range.0) / self.nb as f64;
        (self.a_range.0 + (i as f64 + 0.5) * da, self.b_range.0 + (j as f64 + 0.5) * db)
    }

    pub fn ambiguous(&self) -> usize {
        self.cells.iter().filter(|c| c.is_none()).count()
    }
}

pub fn plank_grid(
    a_range: (f64, f64),
    b_range: (f64, f64),
    na: usize,
    nb: usize,
    boundary_tol: f64,
) -> PlankGrid {
    let mut g = PlankGrid { a_range, b_range, na, nb, cells: Vec::new() };
    g.cells = (0..na * nb)
        .into_par_iter()
        .map(|k| {
            let (a, b) = g.center(k % na, k / na);
            match classify(a, b, boundary_tol) {
                Ok(Classification::Class { id }) => Some(id.get()),
                _ => None,
            }
        })
        .collect();
    g
}

fn class_color(id: u8) -> String {
    let hue = (id as f64 * 137.508) % 360.0;
    let light = if id % 2 == 0 { 62 } else { 74 };
    format!("hsl({hue:.1},65%,{light}%)")
}

/// Coloured class cells, the defining curves, and class numbers.
pub fn plank_svg(g: &PlankGrid) -> String {
    let (wa, wb) = (g.a_range.1 - g.a_range.0, g.b_range.1 - g.b_range.0);
    let scale = 900.0 / wa.max(wb);
    let (w, h) = (wa * scale, wb * scale);
    let margin = 30.0;
    let px = |a: f64| margin + (a - g.a_range.0) * scale;
    let py = |b: f64| margin + h - (b - g.b_range.0) * scale;
    let (da, db) = (wa / g.na as f64, wb / g.nb as f64);
    let mut s = String::new();
    header(&mut s, w + 2.0 * margin, h + 2.0 * margin);
    for j in 0..g.nb {
        let mut i = 0;
        while i < g.na {
            let c = g.cells[j * g.na + i];
            let mut e = i + 1;
            while e < g.na && g.cells[j * g.na + e] == c {
                e += 1;
            }
            let fill = c.map(class_color).unwrap_or_else(|| "#999999".to_string());
            let a0 = g.a_range.0 + i as f64 * da;
            let a1 = g.a_range.0 + e as f64 * da;
            let b0 = g.b_range.0 + j as f64 * db;
            let _ = writeln!(
                s,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{fill}"/>"#,
                px(a0),
                py(b0 + db),
                px(a1) - px(a0),
                py(b0) - py(b0 + db) + 0.05
            );
            i = e;
        }
    }
    // curves by marching squares on the cell-centre lattice
    for c in Curve::ALL {
        let mut d = String::new();
        for j in 0..g.nb.saturating_sub(1) {
            for i in 0..g.na.saturating_sub(1) {
                let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
                let pts: Vec<(f64, f64)> = corners.iter().map(|&(p, q)| g.center(p, q)).collect();
                let v: Vec<f64> = pts.iter().map(|&(a, b)| c.eval(a, b)).collect();
                let mut cross = Vec::new();
                for e in 0..4 {
                    let (p, q) = (e, (e + 1) % 4);
                    if (v[p] < 0.0) != (v[q] < 0.0) {
                        let t = v[p] / (v[p] - v[q]);
                        cross.push((
                            pts[p].0 + t * (pts[q].0 - pts[p].0),
                            pts[p].1 + t * (pts[q].1 - pts[p].1),
                        ));
                    }
                }
                for pair in cross.chunks(2) {
                    if let [u, v] = pair {
                        let _ = write!(d, "M{:.2},{:.2}L{:.2},{:.2}", px(u.0), py(u.1), px(v.0), py(v.1));
                    }
                }
            }
        }
        if !d.is_empty() {
            let _ = writeln!(
                s,
                r#"<path d="{d}" fill="none" stroke="black" stroke-width="0.6"><title>{c}</title></path>"#
            );
        }
    }
    // class numbers at the cell nearest each class centroid
    let mut sums = vec![(0.0f64, 0.0f64, 0usize); 48];
    for (k, c) in g.cells.iter().enumerate() {
        if let Some(id) = c {
            let (a, b) = g.center(k % g.na, k / g.na);
            let e = &mut sums[*id as usize];
            *e = (e.0 + a, e.1 + b, e.2 + 1);
        }
    }
    for (id, &(sa, sb, n)) in sums.iter().enumerate() {
        if n < 40 {
            continue;
        }
        let (ca, cb) = (sa / n as f64, sb / n as f64);
        let best = g
            .cells
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == Some(id as u8))
            .map(|(k, _)| g.center(k % g.na, k / g.na))
            .min_by(|p, q| (p.0 - ca).hypot(p.1 - cb).total_cmp(&(q.0 - ca).hypot(q.1 - cb)))
            .expect("class has cells");
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{id}</text>"#,
            px(best.0),
            py(best.1)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// One row per cell: `i,j,x,y,label,tie`.
pub fn raster_csv(r: &LabeledRaster) -> String {
    let mut s = String::from("i,j,x,y,label,tie\n");
    for j in 0..r.ny {
        for i in 0..r.nx {
            let k = r.index(i, j);
            let (x, y) = r.center(i, j);
            let _ =
                writeln!(s, "{i},{j},{x},{y},{},{}", CANONICAL_SIX[r.cells[k] as usize], r.is_tie(k) as u8);
        }
    }
    s
}
