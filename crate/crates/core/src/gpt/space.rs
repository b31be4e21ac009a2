//! State spaces: polytope and ball backends.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::lp::LinearProgram;
use crate::numerics::matrix::Matrix;
use crate::numerics::rational::{norm_sq, sub, Rational};

/// A compact convex state space of affine dimension `d`, given by a finite
/// vertex list. The vertex list is minimal: no vertex is a convex
/// combination of the others (checked on construction by LP).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeSpace {
    vertices: Vec<Vec<Rational>>,
    dim: usize,
}

impl PolytopeSpace {
    pub fn new(vertices: Vec<Vec<Rational>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::InvalidStateSpace("empty vertex list".into()));
        };
        let dim = first.len();
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidStateSpace(
                "vertices have differing coordinate counts".into(),
            ));
        }
        // The embedding assumes the polytope spans the ambient coordinates.
        let diffs: Vec<Vec<Rational>> = vertices[1..]
            .iter()
            .map(|v| sub(v, &vertices[0]))
            .collect();
        let affine_rank = if diffs.is_empty() {
            0
        } else {
            Matrix::from_rows(diffs)?.rank()
        };
        if affine_rank != dim {
            return Err(Error::InvalidStateSpace(format!(
                "affine dimension {affine_rank} differs from coordinate dimension {dim}"
            )));
        }
        let space = PolytopeSpace { vertices, dim };
        for k in 0..space.vertices.len() {
            if space.in_hull_of_others(k) {
                return Err(Error::InvalidStateSpace(format!(
                    "vertex {k} is a convex combination of the others"
                )));
            }
        }
        Ok(space)
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Membership of `point` in the convex hull of the vertices, by LP.
    pub fn contains(&self, point: &[Rational]) -> bool {
        if point.len() != self.dim {
            return false;
        }
        convex_combination_exists(&self.vertices, point, None)
    }

    fn in_hull_of_others(&self, k: usize) -> bool {
        let others: Vec<Vec<Rational>> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, v)| v.clone())
            .collect();
        if others.is_empty() {
            return false;
        }
        convex_combination_exists(&others, &self.vertices[k], None)
    }

    /// The square gbit: vertices `(±1, ±1)`.
    pub fn square_gbit() -> Self {
        let pm = [Rational::one(), -Rational::one()];
        let vertices = pm
            .iter()
            .flat_map(|a| pm.iter().map(|b| vec![a.clone(), b.clone()]))
            .collect();
        PolytopeSpace::new(vertices).expect("square gbit is a valid polytope")
    }

    /// Classical system with `n` pure states: the standard simplex with
    /// vertices `0, e_1, …, e_{n−1}` in `R^{n−1}`.
    pub fn classical_simplex(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidStateSpace("need at least one state".into()));
        }
        let d = n - 1;
        let mut vertices = vec![vec![Rational::zero(); d]];
        for i in 0..d {
            let mut v = vec![Rational::zero(); d];
            v[i] = Rational::one();
            vertices.push(v);
        }
        PolytopeSpace::new(vertices)
    }
}

/// Feasibility of `Σ λ_j points_j = target, λ ≥ 0, Σ λ = 1`, optionally
/// returning the weights.
pub(crate) fn convex_combination_exists(
    points: &[Vec<Rational>],
    target: &[Rational],
    weights_out: Option<&mut Vec<Rational>>,
) -> bool {
    let n = points.len();
    let mut lp = LinearProgram::new(n);
    lp.set_all_nonneg();
    lp.add_eq(vec![Rational::one(); n], Rational::one());
    for c in 0..target.len() {
        let row: Vec<Rational> = points.iter().map(|p| p[c].clone()).collect();
        lp.add_eq(row, target[c].clone());
    }
    match lp.solve() {
        Ok(outcome) => match (outcome.point(), weights_out) {
            (Some(point), Some(out)) => {
                *out = point.to_vec();
                true
            }
            (Some(_), None) => true,
            (None, _) => false,
        },
        Err(_) => false,
    }
}

/// The unit ball `{x ∈ R^n : ‖x‖ ≤ 1}`; `n = 3` is the qubit Bloch ball.
/// States are represented implicitly, never enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallSpace {
    dim: usize,
}

impl BallSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidStateSpace("ball dimension must be ≥ 1".into()));
        }
        Ok(BallSpace { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        point.len() == self.dim && norm_sq(point) <= Rational::one()
    }
}

/// A state space with one of the two supported backends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSpace {
    Polytope(PolytopeSpace),
    Ball(BallSpace),
}

impl StateSpace {
    pub fn square_gbit() -> Self {
        StateSpace::Polytope(PolytopeSpace::square_gbit())
    }

    pub fn bloch_ball() -> Self {
        StateSpace::Ball(BallSpace::new(3).expect("dimension 3 is valid"))
    }

    /// Affine dimension `d` of the state space.
    pub fn dim(&self) -> usize {
        match self {
            StateSpace::Polytope(p) => p.dim(),
            StateSpace::Ball(b) => b.dim(),
        }
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        match self {
            StateSpace::Polytope(p) => p.contains(point),
            StateSpace::Ball(b) => b.contains(point),
        }
    }

    pub fn as_polytope(&self) -> Option<&PolytopeSpace> {
        match self {
            StateSpace::Polytope(p) => Some(p),
            StateSpace::Ball(_) => None,
        }
    }

    /// The polytope backend, or the unsupported-backend error.
    pub fn require_polytope(&self) -> Result<&PolytopeSpace> {
        self.as_polytope().ok_or_else(|| {
            Error::Unsupported("this operation requires the polytope backend".into())
        })
    }
}
