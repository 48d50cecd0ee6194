//! Construction, validation and audit tools for 1-bend right-angle-crossing
//! (RAC₁) drawings.
//!
//! * [`geom`] exact/floating predicates.
//! * [`drawing`] the drawing model, JSON/SVG I/O and RAC validation.
//! * [`planarize`] planarizations, facial walks and face statistics.
//! * [`augment`] insertion of crossing-free helper edges until every
//!   crossing-free face is good.
//! * [`charge`] the two-phase discharging audit and the per-face bound.
//! * [`removal`] triangulation edge-removal traces and their potential.
//! * [`generator`] the nested dodecahedral family with `5n - 10` edges.

pub mod augment;
pub mod charge;
pub mod drawing;
pub mod generator;
pub mod geom;
pub mod planarize;
pub mod removal;

pub use drawing::{Drawing, Edge, ValidationReport};
pub use geom::{Coord, Point, Segment};
pub use planarize::{Planarization, Scope};
