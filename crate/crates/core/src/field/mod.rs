//! Sign fields on structured grids and nodal-domain counting.
//!
//! A field is sampled at cell centers of a [`GridSpec`]. Two axis-adjacent
//! cells belong to the same nodal domain when they carry the same strict sign,
//! the segment joining their centers does not meet a crack, and (on planar
//! charts) the field keeps that sign at the midpoint of the segment. Counts
//! are certified by refinement: a [`NodalCountReport`] is stable once two
//! consecutive grids agree.

mod chart;
mod grid;
mod lines;

pub use chart::{Chart, Crack, CrackSet, GridSpec, Hub, Region};
pub use grid::{count_nodal_domains, count_on_grid, sample, NodalCountReport, Refinement, SignGrid, MAX_CELLS};
pub use lines::{extract_nodal_lines, Polyline};

#[cfg(test)]
mod tests;
