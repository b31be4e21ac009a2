//! Exact rational arithmetic, dense linear algebra and linear programming.
//!
//! Everything in this module is exact: no floating point enters any decision
//! procedure. All types are immutable values after construction and all
//! operations are pure functions.

pub mod lp;
pub mod matrix;
pub mod radical;
pub mod rational;

pub use lp::{FarkasCertificate, LinearProgram, LpOutcome, Sense};
pub use matrix::{Matrix, Solution};
pub use radical::ExtremeValue;
pub use rational::{int, rat, Rational};
