//! Exact local computations around GSp₄ and spin groups at a prime q:
//! lattice families and Hecke operators, vertex lattices, Weil-representation
//! Schwartz calculus, admissibility linear algebra and definite theta series.

pub mod arith;
pub mod error;
pub mod galoislocal;
pub mod hecke;
pub mod lattices;
pub mod report;
pub mod spaces;
pub mod testfns;
pub mod thetadef;
pub mod verify;
pub mod weil;

pub use arith::{val_q, CycloScalar, LaurentPoly, Rat, ResidueInt, SqrtQ};
pub use error::{Result, SpinError};
