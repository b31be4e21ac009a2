//! Affine effect functionals.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::radical::ExtremeValue;
use crate::numerics::rational::{dot, is_zero_vec, norm_sq, Rational};

use super::space::StateSpace;

/// An affine functional `e(s) = c + v·x` in dual coordinates `(c, v)`.
///
/// A *valid* effect takes values in `[0, 1]` on the whole state space; most
/// constructors in this crate check validity against a concrete space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Effect {
    constant: Rational,
    linear: Vec<Rational>,
}

impl Effect {
    pub fn new(constant: Rational, linear: Vec<Rational>) -> Self {
        Effect { constant, linear }
    }

    /// The unit effect `u = (1, 0)`.
    pub fn unit(dim: usize) -> Self {
        Effect::new(Rational::one(), vec![Rational::zero(); dim])
    }

    /// The zero effect `o`.
    pub fn zero(dim: usize) -> Self {
        Effect::new(Rational::zero(), vec![Rational::zero(); dim])
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn linear(&self) -> &[Rational] {
        &self.linear
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    /// Coordinates `[c, v…]` as a vector in `V* = R^{d+1}`.
    pub fn coords(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.linear.len() + 1);
        out.push(self.constant.clone());
        out.extend(self.linear.iter().cloned());
        out
    }

    pub fn from_coords(coords: &[Rational]) -> Result<Self> {
        let (c, v) = coords
            .split_first()
            .ok_or_else(|| Error::InvalidEffect("empty coordinate list".into()))?;
        Ok(Effect::new(c.clone(), v.to_vec()))
    }

    /// Value at a state point, without checking membership in the space.
    pub fn evaluate_at(&self, x: &[Rational]) -> Rational {
        &self.constant + dot(&self.linear, x)
    }

    /// Value at a state `s ∈ S`; points outside the space are a domain error.
    pub fn evaluate(&self, x: &[Rational], space: &StateSpace) -> Result<Rational> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has {} coordinates, effect expects {}",
                x.len(),
                self.dim()
            )));
        }
        if !space.contains(x) {
            return Err(Error::Domain("point lies outside the state space".into()));
        }
        Ok(self.evaluate_at(x))
    }

    /// Smallest value on the state space. Attained at a vertex on the
    /// polytope backend; `c − √(‖v‖²)` on the ball.
    pub fn lambda_min(&self, space: &StateSpace) -> ExtremeValue {
        self.extremal(space, Ordering::Less)
    }

    /// Largest value on the state space.
    pub fn lambda_max(&self, space: &StateSpace) -> ExtremeValue {
        self.extremal(space, Ordering::Greater)
    }

    fn extremal(&self, space: &StateSpace, want: Ordering) -> ExtremeValue {
        match space {
            StateSpace::Polytope(p) => {
                let values = p.vertices().iter().map(|v| self.evaluate_at(v));
                let best = match want {
                    Ordering::Greater => values.max(),
                    _ => values.min(),
                };
                ExtremeValue::exact(best.expect("polytope has at least one vertex"))
            }
            StateSpace::Ball(_) => {
                let sign = match want {
                    Ordering::Greater => Rational::one(),
                    _ => -Rational::one(),
                };
                ExtremeValue::surd(self.constant.clone(), sign, norm_sq(&self.linear))
                    .expect("squared norm is nonnegative")
            }
        }
    }

    /// Exact validity check `0 ≤ e ≤ 1` on the whole space.
    pub fn is_valid(&self, space: &StateSpace) -> bool {
        self.validate(space).is_ok()
    }

    /// Validity check that names a violating vertex on failure.
    pub fn validate(&self, space: &StateSpace) -> Result<()> {
        if self.dim() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "effect dimension {} does not match space dimension {}",
                self.dim(),
                space.dim()
            )));
        }
        match space {
            StateSpace::Polytope(p) => {
                for (k, v) in p.vertices().iter().enumerate() {
                    let value = self.evaluate_at(v);
                    if value.is_negative() || value > Rational::one() {
                        return Err(Error::InvalidEffect(format!(
                            "takes value {value} at vertex {k}"
                        )));
                    }
                }
                Ok(())
            }
            StateSpace::Ball(_) => {
                if self.lambda_min(space).sign() == Ordering::Less {
                    return Err(Error::InvalidEffect("λmin < 0 on the ball".into()));
                }
                if self
                    .lambda_max(space)
                    .cmp_rational(&Rational::one())
                    == Ordering::Greater
                {
                    return Err(Error::InvalidEffect("λmax > 1 on the ball".into()));
                }
                Ok(())
            }
        }
    }

    /// The complement effect `u − e`.
    pub fn complement(&self) -> Effect {
        Effect::new(
            Rational::one() - &self.constant,
            self.linear.iter().map(|v| -v).collect(),
        )
    }

    pub fn add(&self, other: &Effect) -> Effect {
        debug_assert_eq!(self.dim(), other.dim());
        Effect::new(
            &self.constant + &other.constant,
            self.linear
                .iter()
                .zip(&other.linear)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Effect) -> Effect {
        debug_assert_eq!(self.dim(), other.dim());
        Effect::new(
            &self.constant - &other.constant,
            self.linear
                .iter()
                .zip(&other.linear)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Effect {
        Effect::new(
            &self.constant * c,
            self.linear.iter().map(|v| v * c).collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && is_zero_vec(&self.linear)
    }

    pub fn is_unit(&self) -> bool {
        self.constant.is_one() && is_zero_vec(&self.linear)
    }

    /// True for multiples of the unit effect (state-independent value).
    pub fn is_trivial(&self) -> bool {
        is_zero_vec(&self.linear)
    }
}
