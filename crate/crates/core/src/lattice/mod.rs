//! Point lattices, their duals, point enumeration and Epstein-type sums.

mod epstein;
mod point_lattice;

pub use epstein::{epstein_sum, epstein_sum_shells, lattice_constant, LatticeConstant, LatticeSum};
pub use point_lattice::{make_lattice, Lattice, ENUMERATION_LIMIT};
