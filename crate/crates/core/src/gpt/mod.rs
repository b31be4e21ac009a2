//! States, effects and meters of a finite-dimensional GPT.
//!
//! A state space of affine dimension `d` is embedded in `V = R^{d+1}` as
//! `(1, x)`, so the unit functional `u` reads off the first coordinate.
//! Effects are stored in dual coordinates `(c, v)` with `e(s) = c + v·x`;
//! the unit effect is `(1, 0)`. Two backends are supported: a polytope given
//! by its vertex list (all scalars rational, all decisions exact) and the
//! unit ball, whose extremal values are radical expressions compared
//! exactly.

mod decompose;
mod effect;
mod meter;
mod space;

pub use decompose::{decompose_indecomposable, is_indecomposable, BallSplit, Decomposition};
pub use effect::Effect;
pub use meter::{Meter, DEFAULT_RANGE_CAP};
pub use space::{BallSpace, PolytopeSpace, StateSpace};
