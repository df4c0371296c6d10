//! Shortest surface paths between antipodal points of a `1 x a x b` box.

pub mod algebra;
pub mod classifier;
pub mod distances;
pub mod oracle;
pub mod regions;

pub use distances::{
    dominance_gaps, min_over_six, squared_distance, unfolded_opposite, BoxDims, Direction, DistanceError,
    DomainError, MinResult, PathLabel, SurfacePoint, CANONICAL_SIX, TABLE_LABELS,
};
