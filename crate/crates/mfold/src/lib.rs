//! Periodic tilings that bound the m-fold chromatic number of the plane.
//!
//! In an m-fold coloring every point of the plane receives m of k colors and
//! points at unit distance share none. An upper bound `χ_m ≤ k` follows from a
//! periodic tiling in which tiles have width at most 1 and tiles of the same
//! color stay at distance at least 1 from each other. This crate builds two
//! such constructions and the bookkeeping around them:
//!
//! - [`geometry`] — the two-parameter centrally symmetric hexagonal tile and
//!   distance primitives (segments, unit-radius arcs, convex polygons).
//! - [`tiling`] — the layered hexagonal construction: integer configurations,
//!   the same-color sublattice, separation `d`, verification verdicts, and the
//!   wavy-sides variant.
//! - [`optsearch`] — derivative-free optimization of the tile shape and the
//!   exhaustive integer search over configurations.
//! - [`tables`] — density thresholds, the best-known-k table, combination
//!   closure, and the empirical δ predictor.
//! - [`cellular`] — the large-m construction from rectangular cells.
//! - [`io`] / [`render`] — JSONL and CSV persistence, SVG rendering.

pub mod cellular;
pub mod geometry;
pub mod io;
pub mod optsearch;
pub mod render;
mod scalar;
pub mod tables;
pub mod tiling;

pub use geometry::{build_hexagon, polygon_diameter, polygon_distance, primitive_distance};
pub use geometry::{Hexagon, Point, Primitive, Segment, TileShape, UnitArc};
pub use tables::{predict_delta, thresholds, SolutionTable, Thresholds};
pub use tiling::{
    derive_points, same_color_distance, side_shift_fractions, verify_solution, DerivedPoints,
    Provenance, TilingConfig, TilingSolution, VerdictReport,
};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid tile shape: {0}")]
    Shape(String),
    #[error("invalid tiling config: {0}")]
    Config(String),
    #[error("invalid cell tiling: {0}")]
    Cell(String),
    #[error("line {line}: {msg}")]
    Schema { line: usize, msg: String },
    #[error("search budget exhausted below k={k_stop}; best bound so far: {best}")]
    BudgetExhausted {
        k_stop: u32,
        best: String,
        solution: Option<Box<TilingSolution>>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
