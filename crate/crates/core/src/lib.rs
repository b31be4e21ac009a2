//! Finite-dimensional general probabilistic theories: state spaces, effects
//! and meters, with exact decision procedures for meter simulability,
//! compatibility and operational restrictions.
//!
//! All decision procedures run on exact rational arithmetic. Feasibility
//! questions are answered by an exact simplex solver that returns either a
//! solution verifying every constraint with zero residual or a Farkas
//! certificate of infeasibility that can be re-checked independently.
//!
//! The crate is organized around the objects it models:
//!
//! - [`numerics`]: arbitrary-precision rationals, dense exact linear algebra
//!   and the LP solver used by every decision procedure.
//! - [`gpt`]: state spaces (polytope or ball backend), effects, meters,
//!   extremal values, indecomposable effects and their decompositions.
//! - [`simulation`]: classical post-processing and mixing of meters, the
//!   simulability LP, closure-operator checks and effective n-tomicity
//!   certificates.
//! - [`restrictions`]: effect restrictions, convexity and subalgebra tests,
//!   the noise restriction family and the R1/R2/R3 classification.
//! - [`compatibility`]: joint-meter existence and the compatibility set.
//! - [`qubit`]: Bloch-ball analytics, unambiguous state discrimination and
//!   depolarizing effect restrictions.
//! - [`model`]: the JSON model schema shared with the command line tool.

pub mod compatibility;
pub mod error;
pub mod geometry;
pub mod gpt;
pub mod model;
pub mod numerics;
pub mod qubit;
pub mod restrictions;
pub mod sampling;
pub mod simulation;

pub use error::Error;
pub use numerics::rational::Rational;
