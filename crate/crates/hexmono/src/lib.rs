//! A hexagonal aperiodic monotile with two matching rules.
//!
//! * **R1**: the black off-centre curves of adjacent tiles must meet at the
//!   same point of every shared edge.
//! * **R2**: each newly placed tile's red tree must touch the tree of an
//!   already placed neighbour, so the union of all trees stays connected.
//!
//! Modules, bottom up:
//!
//! * [`hexlattice`]: axial coordinates, rotations, isometries;
//! * [`prototile`]: the tile's decorations and per-edge matching predicates;
//! * [`engine`]: patches, legality of placements, direct constructibility;
//! * [`csp`]: black-curve constraint propagation;
//! * [`analysis`]: curve tracing, tree graphs, pinwheels, periods, classes;
//! * [`constructions`]: spiral patches and the other explicit patches;
//! * [`search`]: exhaustive bounded growth search and refutations;
//! * [`io`] and [`svg`]: the `hexmono v1` file format and rendering.

pub mod analysis;
pub mod constructions;
pub mod csp;
pub mod engine;
pub mod hexlattice;
pub mod io;
pub mod prototile;
pub mod search;
pub mod svg;

pub use engine::{Patch, Placement, Verdict};
pub use hexlattice::Hex;
pub use prototile::PrototileTemplate;
