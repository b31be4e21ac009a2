//! Indecomposable effects and decompositions into them.
//!
//! An effect is indecomposable when it lies on an extreme ray of the dual
//! cone `V*₊`. On the polytope backend that holds exactly when the embedded
//! vertices annihilated by the effect span a subspace of dimension `d`; on
//! the ball it reduces to `c² = ‖v‖²` with `c > 0`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::matrix::Matrix;
use crate::numerics::radical::ExtremeValue;
use crate::numerics::rational::{exact_sqrt, norm_sq, rat, Rational};

use super::effect::Effect;
use super::space::{PolytopeSpace, StateSpace};

/// Extreme-ray membership of a nonzero effect in the dual cone.
pub fn is_indecomposable(e: &Effect, space: &StateSpace) -> Result<bool> {
    if e.is_zero() {
        return Err(Error::Domain(
            "the zero effect is neither decomposable nor indecomposable".into(),
        ));
    }
    match space {
        StateSpace::Polytope(p) => Ok(active_rank(e, p) == p.dim()),
        StateSpace::Ball(_) => {
            let c = e.constant();
            let vv = norm_sq(e.linear());
            Ok(c.is_positive() && c * c == vv)
        }
    }
}

/// Rank of the embedded vertices on which `e` vanishes.
fn active_rank(e: &Effect, p: &PolytopeSpace) -> usize {
    let rows: Vec<Vec<Rational>> = p
        .vertices()
        .iter()
        .filter(|v| e.evaluate_at(v).is_zero())
        .map(|v| embed(v))
        .collect();
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(rows).expect("embedded vertices share a length").rank()
}

fn embed(vertex: &[Rational]) -> Vec<Rational> {
    let mut row = Vec::with_capacity(vertex.len() + 1);
    row.push(Rational::one());
    row.extend(vertex.iter().cloned());
    row
}

/// A ball-backend split `e = α·(1, v̂)/… + β·(1, −v̂)/…` whose weights are
/// irrational; the direction is returned unnormalized.
#[derive(Debug, Clone)]
pub struct BallSplit {
    /// Weight `(c + ‖v‖)/2` on the rank-one effect aligned with `v`.
    pub aligned_weight: ExtremeValue,
    /// Weight `(c − ‖v‖)/2` on the opposite rank-one effect.
    pub opposed_weight: ExtremeValue,
    /// The unnormalized direction `v`.
    pub direction: Vec<Rational>,
}

/// Result of decomposing an effect into indecomposable summands.
#[derive(Debug, Clone)]
pub enum Decomposition {
    /// Summands with rational coordinates, summing exactly to the input.
    Exact(Vec<Effect>),
    /// Ball split whose coefficients carry radical expressions because the
    /// norm `‖v‖` is irrational.
    Symbolic(BallSplit),
}

impl Decomposition {
    pub fn exact_parts(&self) -> Option<&[Effect]> {
        match self {
            Decomposition::Exact(parts) => Some(parts),
            Decomposition::Symbolic(_) => None,
        }
    }
}

/// Decomposes a valid nonzero effect into indecomposable effects summing to
/// it exactly.
///
/// Ball: split along `±v̂` with weights `(c ± ‖v‖)/2`; exact when `‖v‖` is
/// rational, symbolic otherwise. Polytope: greedy peeling — find an extreme
/// ray `r` of the dual cone with `e − λr` still in the cone for the maximal
/// rational `λ`, then recurse on the rest. Each peel enlarges the span of
/// the active vertex set, so the loop takes at most `d + 1` steps.
pub fn decompose_indecomposable(e: &Effect, space: &StateSpace) -> Result<Decomposition> {
    if e.is_zero() {
        return Err(Error::Domain("cannot decompose the zero effect".into()));
    }
    e.validate(space)?;
    match space {
        StateSpace::Ball(_) => decompose_ball(e),
        StateSpace::Polytope(p) => decompose_polytope(e, p).map(Decomposition::Exact),
    }
}

fn decompose_ball(e: &Effect) -> Result<Decomposition> {
    let c = e.constant().clone();
    let v = e.linear().to_vec();
    let vv = norm_sq(&v);
    if c.is_positive() && &c * &c == vv {
        return Ok(Decomposition::Exact(vec![e.clone()]));
    }
    if vv.is_zero() {
        // Trivial effect c·u: split along the last coordinate axis.
        let half = &c / rat(2, 1);
        let dim = e.dim();
        let mut plus = vec![Rational::zero(); dim];
        plus[dim - 1] = half.clone();
        let mut minus = vec![Rational::zero(); dim];
        minus[dim - 1] = -half.clone();
        return Ok(Decomposition::Exact(vec![
            Effect::new(half.clone(), plus),
            Effect::new(half, minus),
        ]));
    }
    match exact_sqrt(&vv) {
        Some(norm) => {
            let alpha = (&c + &norm) / rat(2, 1);
            let beta = (&c - &norm) / rat(2, 1);
            let unit_v: Vec<Rational> = v.iter().map(|x| x / &norm).collect();
            let aligned = Effect::new(alpha.clone(), unit_v.iter().map(|x| x * &alpha).collect());
            let opposed = Effect::new(beta.clone(), unit_v.iter().map(|x| -(x * &beta)).collect());
            let parts = if beta.is_zero() {
                vec![aligned]
            } else {
                vec![aligned, opposed]
            };
            Ok(Decomposition::Exact(parts))
        }
        None => {
            let half = rat(1, 2);
            let aligned_weight =
                ExtremeValue::surd(&c / rat(2, 1), half.clone(), vv.clone())?;
            let opposed_weight = ExtremeValue::surd(&c / rat(2, 1), -half, vv)?;
            Ok(Decomposition::Symbolic(BallSplit {
                aligned_weight,
                opposed_weight,
                direction: v,
            }))
        }
    }
}

fn decompose_polytope(e: &Effect, p: &PolytopeSpace) -> Result<Vec<Effect>> {
    let mut rest = e.clone();
    let mut parts = Vec::new();
    loop {
        if rest.is_zero() {
            return Ok(parts);
        }
        if active_rank(&rest, p) == p.dim() {
            parts.push(rest);
            return Ok(parts);
        }
        let ray = extreme_ray_below(&rest, p)?;
        // Maximal λ with rest − λ·ray still nonnegative on every vertex.
        let lambda = p
            .vertices()
            .iter()
            .filter_map(|v| {
                let rv = ray.evaluate_at(v);
                rv.is_positive().then(|| rest.evaluate_at(v) / rv)
            })
            .min()
            .ok_or_else(|| Error::Domain("extreme ray vanishes on every vertex".into()))?;
        debug_assert!(lambda.is_positive());
        let summand = ray.scale(&lambda);
        rest = rest.sub(&summand);
        parts.push(summand);
    }
}

/// Walks from `f` to an extreme ray of the dual cone that vanishes wherever
/// `f` does, staying inside the cone. Each boundary hit adds a vertex
/// outside the span of the previous active set, so the rank grows every
/// step and the walk ends at rank `d`.
fn extreme_ray_below(f: &Effect, p: &PolytopeSpace) -> Result<Effect> {
    let d = p.dim();
    let mut f = f.clone();
    loop {
        let active: Vec<Vec<Rational>> = p
            .vertices()
            .iter()
            .filter(|v| f.evaluate_at(v).is_zero())
            .map(|v| embed(v))
            .collect();
        let rank = if active.is_empty() {
            0
        } else {
            Matrix::from_rows(active.clone())?.rank()
        };
        if rank == d {
            return Ok(f);
        }
        // A direction in the dual space vanishing on the active vertices and
        // not proportional to f. The annihilator has dimension d + 1 − rank
        // ≥ 2, so such a direction exists.
        let annihilator = if active.is_empty() {
            Matrix::zeros(0, d + 1).nullspace()
        } else {
            Matrix::from_rows(active)?.nullspace()
        };
        let f_coords = f.coords();
        let g = annihilator
            .into_iter()
            .find(|g| !proportional(g, &f_coords))
            .ok_or_else(|| Error::Domain("no independent direction in the face".into()))?;
        let g = Effect::from_coords(&g)?;

        let step = |dir: &Effect| -> Option<Rational> {
            p.vertices()
                .iter()
                .filter_map(|v| {
                    let gv = dir.evaluate_at(v);
                    gv.is_positive().then(|| f.evaluate_at(v) / gv)
                })
                .min()
        };
        // The dual cone is pointed, so at least one direction is bounded.
        let (dir, t) = match step(&g) {
            Some(t) => (g, t),
            None => {
                let neg = g.scale(&-Rational::one());
                let t = step(&neg).ok_or_else(|| {
                    Error::Domain("dual cone contains a line; state space is degenerate".into())
                })?;
                (neg, t)
            }
        };
        f = f.sub(&dir.scale(&t));
    }
}

fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    let rows = Matrix::from_rows(vec![a.to_vec(), b.to_vec()]).expect("equal lengths");
    rows.rank() <= 1
}
