//! Small-triangle problems for point sets in a unit-area triangle.
//!
//! The crate works in a fixed equilateral reference triangle `T` of area 1
//! and represents points by barycentric weights, so triangle areas are plain
//! 3x3 determinants. On top of that it provides:
//!
//! * [`geometry`]: coordinates, areas, distances and area strips;
//! * [`partition`]: the k x k triangular grid of `T`, lattice-aligned regions
//!   (hexagons, corner triangles, parallelograms) and the three-case covering
//!   argument for five points;
//! * [`objectives`]: configuration-level area statistics and the explicit
//!   constructions (the 1/6 five-point witness, four clusters);
//! * [`search`]: multi-start annealing, exhaustive lattice enumeration and
//!   random falsification;
//! * [`lemma`]: closed-form scans of the strip argument for pairs of nearby
//!   points and the parallelogram halving bound;
//! * [`render`]: deterministic SVG output.

pub mod error;
pub mod geometry;
pub mod lemma;
pub mod objectives;
pub mod partition;
pub mod render;
pub mod search;

pub use error::{Error, Result};
pub use geometry::{BaryPoint, CartPoint, ReferenceTriangle, Strip};
pub use objectives::{Configuration, ExactConfiguration, TripleAreaReport};
pub use partition::{GridCell, LatticeBox, ParallelogramSpec, RegionSpec};
pub use search::{Objective, SearchParams, SearchResult};

/// Threshold of the classical five-point bound.
pub const QUARTER: f64 = 0.25;

/// The improved five-point threshold, 6/25.
pub const SIX_TWENTY_FIFTHS: f64 = 0.24;
