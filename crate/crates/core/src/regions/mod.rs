//! Which candidate path is shortest where on `F`.
//!
//! A [`LabeledRaster`] samples cell centres and records, per cell, every
//! label that could be smallest somewhere in it.  [`signature`] reduces a
//! raster plus the exact pair curves to data that two boxes of the same
//! class share and boxes of different classes do not.

mod arcs;
mod raster;
mod signature;
mod suite;
mod svg;

pub use arcs::{boundary_arcs, trace_pair_curve, BoundaryArc};
pub use raster::{label_region, mask_labels, LabelMask, LabeledRaster, MIN_CELLS, MIN_RESOLUTION};
pub use signature::{signature, RegionSignature, SideItem, CORNERS, MAX_TIE_FRACTION, POINT_TIE_TOL};
pub use suite::{verify_signatures, ClassSignature, SignatureSuite};
pub use svg::{plank_grid, plank_svg, raster_csv, region_svg, PlankGrid};

/// Raster resolution used for signatures unless overridden.
pub const DEFAULT_RESOLUTION: usize = 512;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RegionError {
    #[error("resolution must be at least {MIN_RESOLUTION} (got {0})")]
    Resolution(usize),
    #[error("a = {a} is too small for resolution {resolution}: fewer than {MIN_CELLS} cells across")]
    Degenerate { a: f64, resolution: usize },
    #[error(
        "{:.1}% of cells are near a tie at a = {a}, b = {b}; the box is too close to a class border, move it slightly",
        fraction * 100.0
    )]
    TooManyTies { fraction: f64, a: f64, b: f64 },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{representative, ClassId};
    use crate::distances::{BoxDims, PathLabel};

    fn sig_of(id: u8, res: usize) -> RegionSignature {
        let (a, b) = representative(ClassId::new(id as i64).unwrap());
        let d = BoxDims::new(a, b).unwrap();
        signature(&label_region(&d, res, 1e-9).unwrap()).unwrap()
    }

    #[test]
    fn class_one_is_a_single_region() {
        let s = sig_of(1, 256);
        assert_eq!(s.components.into_iter().collect::<Vec<_>>(), vec![(PathLabel::R0, 1)]);
        assert!(s.corner_labels.iter().all(|c| c == &vec![PathLabel::R0]));
        assert!(s.adjacency.is_empty());
    }

    #[test]
    fn class_two_has_r0_and_u0() {
        let s = sig_of(2, 256);
        let c: Vec<_> = s.components.clone().into_iter().collect();
        assert_eq!(c, vec![(PathLabel::R0, 1), (PathLabel::U0, 1)]);
        assert!(s.endpoints_consistent());
    }

    #[test]
    fn class_thirteen_has_two_u0_regions() {
        let s = sig_of(13, 512);
        assert_eq!(s.components.get(&PathLabel::U0), Some(&2), "{s:?}");
    }

    #[test]
    fn too_many_ties() {
        // a tie tolerance of 50% makes every cell ambiguous
        let d = BoxDims::new(0.9, 1.2).unwrap();
        let r = label_region(&d, 64, 0.5).unwrap();
        assert!(matches!(signature(&r), Err(RegionError::TooManyTies { .. })));
    }

    #[test]
    fn signature_is_serializable() {
        let s = sig_of(47, 128);
        let j = serde_json::to_value(&s).unwrap();
        assert!(j["side_sequences"]["x0"].is_array());
    }
}
