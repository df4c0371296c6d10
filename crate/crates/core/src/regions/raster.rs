//! Cell-centre labelling of `F`.
//!
//! Besides the argmin, every cell gets the set of labels that could be
//! smallest somewhere inside it.  Each squared distance is `|T(p) - p|^2`
//! with `T` affine, so the variation of a difference over a cell is bounded
//! exactly by its gradient at the centre plus a constant Hessian term.

use rayon::prelude::*;
use serde::Serialize;

use crate::distances::{opposite_affine, six_values, BoxDims, PathLabel, SurfacePoint, CANONICAL_SIX};

use super::RegionError;

pub const MIN_RESOLUTION: usize = 64;
/// Fewest cells allowed along the short side of the raster.
pub const MIN_CELLS: usize = 4;

/// Label set as a bitmask over [`CANONICAL_SIX`].
pub type LabelMask = u8;

pub fn mask_labels(m: LabelMask) -> Vec<PathLabel> {
    CANONICAL_SIX.iter().enumerate().filter(|(i, _)| m & (1 << i) != 0).map(|(_, &l)| l).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LabeledRaster {
    pub dims: BoxDims,
    pub resolution: usize,
    pub tie_tol: f64,
    /// Cells along `x` and `y`.
    pub nx: usize,
    pub ny: usize,
    /// Argmin index into [`CANONICAL_SIX`], row-major with `y` outer.
    pub cells: Vec<u8>,
    /// Labels that may be smallest somewhere in the cell.
    pub near: Vec<LabelMask>,
}

/// `(J, c)` with `T(p) - p = J p + c` for the label's unfolding.
#[derive(Debug, Clone, Copy)]
struct Linear {
    j: [[f64; 2]; 2],
    c: [f64; 2],
}

impl Linear {
    fn new(label: PathLabel, dims: &BoxDims) -> Self {
        let f = opposite_affine(label).expect("canonical label");
        let c = [0, 1].map(|k| f[k][0] + f[k][1] * dims.a() + f[k][2] * dims.b());
        Linear { j: [[f[0][3] - 1.0, f[0][4]], [f[1][3], f[1][4] - 1.0]], c }
    }

    fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        let v = [0, 1].map(|k| self.j[k][0] * x + self.j[k][1] * y + self.c[k]);
        [0, 1].map(|k| 2.0 * (self.j[0][k] * v[0] + self.j[1][k] * v[1]))
    }

    /// `2 J^T J`.
    fn hessian(&self) -> [[f64; 2]; 2] {
        let mut h = [[0.0; 2]; 2];
        for (r, row) in h.iter_mut().enumerate() {
            for (s, e) in row.iter_mut().enumerate() {
                *e = 2.0 * (self.j[0][r] * self.j[0][s] + self.j[1][r] * self.j[1][s]);
            }
        }
        h
    }
}

impl LabeledRaster {
    pub fn cell_size(&self) -> (f64, f64) {
        (self.dims.half_a() / self.nx as f64, 0.5 / self.ny as f64)
    }

    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        let (hx, hy) = self.cell_size();
        ((i as f64 + 0.5) * hx, (j as f64 + 0.5) * hy)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn label(&self, i: usize, j: usize) -> PathLabel {
        CANONICAL_SIX[self.cells[self.index(i, j)] as usize]
    }

    pub fn is_tie(&self, k: usize) -> bool {
        self.near[k].count_ones() > 1
    }

    pub fn tie_fraction(&self) -> f64 {
        let t = (0..self.cells.len()).filter(|&k| self.is_tie(k)).count();
        t as f64 / self.cells.len() as f64
    }

    /// Labels that are the argmin of at least one non-tie cell.
    pub fn strict_labels(&self) -> Vec<PathLabel> {
        let mut m: LabelMask = 0;
        for (k, &c) in self.cells.iter().enumerate() {
            if !self.is_tie(k) {
                m |= 1 << c;
            }
        }
        mask_labels(m)
    }
}

/// Labels each cell centre of `F` by the smallest of the six distances.
/// `tie_tol` is a relative slack added to the cell-variation bound when
/// deciding which labels are near the minimum.
pub fn label_region(dims: &BoxDims, resolution: usize, tie_tol: f64) -> Result<LabeledRaster, RegionError> {
    if resolution < MIN_RESOLUTION {
        return Err(RegionError::Resolution(resolution));
    }
    let nx = (resolution as f64 * dims.half_a()).ceil() as usize;
    let ny = resolution.div_ceil(2);
    if nx < MIN_CELLS {
        return Err(RegionError::Degenerate { a: dims.a(), resolution });
    }
    let lin = CANONICAL_SIX.map(|l| Linear::new(l, dims));
    let hess = lin.map(|l| l.hessian());
    let (hx, hy) = (dims.half_a() / nx as f64, 0.5 / ny as f64);
    let r = 0.5 * hx.hypot(hy);

    let rows: Vec<(Vec<u8>, Vec<LabelMask>)> = (0..ny)
        .into_par_iter()
        .map(|j| {
            let mut cells = Vec::with_capacity(nx);
            let mut near = Vec::with_capacity(nx);
            let y = (j as f64 + 0.5) * hy;
            for i in 0..nx {
                let x = (i as f64 + 0.5) * hx;
                let v = six_values(dims, &SurfacePoint::raw(x, y));
                let best = (0..6).fold(0, |m, k| if v[k] < v[m] { k } else { m });
                let gb = lin[best].gradient(x, y);
                let mut mask: LabelMask = 1 << best;
                for k in 0..6 {
                    if k == best {
                        continue;
                    }
                    let gk = lin[k].gradient(x, y);
                    let g = (gk[0] - gb[0]).hypot(gk[1] - gb[1]);
                    let h = frobenius_diff(&hess[k], &hess[best]);
                    let bound = g * r + 0.5 * h * r * r + tie_tol * v[best].abs();
                    if v[k] - v[best] <= bound * (1.0 + 1e-9) {
                        mask |= 1 << k;
                    }
                }
                cells.push(best as u8);
                near.push(mask);
            }
            (cells, near)
        })
        .collect();
    let mut cells = Vec::with_capacity(nx * ny);
    let mut near = Vec::with_capacity(nx * ny);
    for (c, n) in rows {
        cells.extend(c);
        near.extend(n);
    }
    Ok(LabeledRaster { dims: *dims, resolution, tie_tol, nx, ny, cells, near })
}

fn frobenius_diff(p: &[[f64; 2]; 2], q: &[[f64; 2]; 2]) -> f64 {
    let mut s = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            s += (p[r][c] - q[r][c]).powi(2);
        }
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distances::squared_distance;

    #[test]
    fn gradients_are_exact() {
        let d = BoxDims::new(0.7, 1.4).unwrap();
        let h = 1e-6;
        for l in CANONICAL_SIX {
            let lin = Linear::new(l, &d);
            let (x, y) = (0.13, 0.31);
            let f = |x, y| squared_distance(l, &d, &SurfacePoint::raw(x, y)).unwrap();
            let g = lin.gradient(x, y);
            assert!((g[0] - (f(x + h, y) - f(x - h, y)) / (2.0 * h)).abs() < 1e-6, "{l}");
            assert!((g[1] - (f(x, y + h) - f(x, y - h)) / (2.0 * h)).abs() < 1e-6, "{l}");
        }
    }

    #[test]
    fn flat_box_is_all_r0() {
        let d = BoxDims::new(0.4, 0.2).unwrap();
        let r = label_region(&d, 256, 1e-9).unwrap();
        assert_eq!(r.strict_labels(), vec![PathLabel::R0]);
        assert_eq!((r.nx, r.ny), (52, 128));
    }

    #[test]
    fn square_top_splits_along_the_diagonal() {
        // with a = 1 the U0 path wins below the diagonal x = y
        let d = BoxDims::new(1.0, 0.25).unwrap();
        let r = label_region(&d, 256, 1e-9).unwrap();
        assert_eq!(r.strict_labels(), vec![PathLabel::R0, PathLabel::U0]);
    }

    #[test]
    fn tall_room_has_no_u1() {
        let d = BoxDims::new(1.0, 2.5).unwrap();
        let r = label_region(&d, 256, 1e-9).unwrap();
        let s = r.strict_labels();
        assert!(!s.contains(&PathLabel::U1));
        for l in &s {
            assert!([PathLabel::R0, PathLabel::R1, PathLabel::R2, PathLabel::U0, PathLabel::U2].contains(l));
        }
    }

    #[test]
    fn resolution_checks() {
        let d = BoxDims::new(1.0, 1.0).unwrap();
        assert!(matches!(label_region(&d, 32, 1e-9), Err(RegionError::Resolution(32))));
        let thin = BoxDims::new(0.01, 1.0).unwrap();
        assert!(matches!(label_region(&thin, 64, 1e-9), Err(RegionError::Degenerate { .. })));
    }

    #[test]
    fn near_sets_contain_the_pointwise_minimum() {
        // every sub-cell sample's argmin must lie in the near set of its cell
        let d = BoxDims::new(0.8, 1.1).unwrap();
        let r = label_region(&d, 64, 0.0).unwrap();
        let (hx, hy) = r.cell_size();
        for j in 0..r.ny {
            for i in 0..r.nx {
                for (fx, fy) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (0.3, 0.7)] {
                    let p = SurfacePoint::raw((i as f64 + fx) * hx, (j as f64 + fy) * hy);
                    let v = six_values(&d, &p);
                    let best = (0..6).fold(0, |m, k| if v[k] < v[m] { k } else { m });
                    assert!(r.near[r.index(i, j)] & (1 << best) != 0);
                }
            }
        }
    }
}
