//! Hecke algebra side: operators on lattice families, vertex-lattice maps,
//! the potential map, multiplicities, Satake parameters and admissibility.

pub mod admissible;
mod ball;
mod formal_sum;
mod identities;
mod multiplicity;
mod operators;
pub mod satake;
mod vertex_maps;

pub use ball::ball;
pub use formal_sum::FormalSum;
pub use operators::{deg_t1, deg_t2, Hecke};
pub use identities::{composite_checks, nabla, nabla_row_checks, over_ball, siegel_checks};
pub use vertex_maps::vertex_diagram_checks;
pub use multiplicity::{multiplicity_checks, Multiplicity, SpecialMeet};
