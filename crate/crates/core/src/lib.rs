//! Refined counts of rational tropical curves with boundary moment constraints.
//!
//! The pipeline enumerates combinatorial types of a toric degree, solves the
//! linear evaluation system exactly for a moment vector, sums Block-Göttsche
//! multiplicities, and converts the result into counts of real curves graded
//! by quantum index.

pub mod invariants;
pub mod lattice;
pub mod laurent;
pub mod real;
pub mod solver;
pub mod subdivision;
pub mod tree;

pub type Rational = num_rational::BigRational;

pub use lattice::{Degree, LatticePolygon, LatticeVector, MomentVector, RatPoint};
pub use laurent::HalfLaurent;
pub use solver::{solve, SolveOutcome, TropicalSolution};
pub use tree::{enumerate_types, CombinatorialType};
