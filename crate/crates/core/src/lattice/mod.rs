//! Exact lattice geometry: vectors, integer matrices, cones, fans and lattice polytopes.
//!
//! Everything here is exact (big integers and rationals); there is no floating point.

pub mod cone;
pub mod fan;
pub mod lp;
pub mod matrix;
pub mod polytope;
pub mod vector;

pub use cone::{gl_change_of_basis, Cone};
pub use fan::{point_location_check, validate_fan, Fan, ValidationReport};
pub use matrix::IntMatrix;
pub use polytope::LatticePolytope;
pub use vector::LatticeVector;
