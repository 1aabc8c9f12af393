//! Numerical toolkit for bounds on the quantum communication complexity of
//! symmetric predicates `f(x, y) = D(|x ∩ y|)`.
//!
//! The crate computes the jump profile of a predicate, the exact eigenvalues
//! of the Johnson scheme, the multi-dimensional discrepancy functional
//! `phi^eps` by linear programming, approximate degrees, and simulates small
//! quantum protocols to check the trace-norm bound they must obey.

pub mod approx;
pub mod bound;
pub mod check;
pub mod combinat;
pub mod error;
pub mod family;
pub mod johnson;
pub mod linalg;
pub mod lp;
pub mod matnorm;
pub mod matrix;
pub mod predicate;
pub mod protosim;
pub mod verify;

pub use error::{Error, Result};
pub use family::{InstanceFamily, Subset};
pub use matrix::{DenseMatrix, ExactMatrix, Matrix};
pub use predicate::{JumpProfile, ReductionParams, SymmetricPredicate};
