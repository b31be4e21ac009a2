//! Compatibility of meter pairs.
//!
//! Two meters are compatible when both are simulable from one common meter.
//! For finite outcome sets that is equivalent to the existence of a joint
//! meter: a grid of valid effects whose row sums reproduce one meter and
//! whose column sums reproduce the other. From a common simulator `C` one
//! builds `G_xy = Σ_z ν^A_zx ν^B_zy C_z`, and conversely the joint meter
//! itself simulates both marginals, so the LP below decides compatibility
//! exactly.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gpt::{Effect, Meter, StateSpace};
use crate::numerics::lp::{InfeasibilityProof, LinearProgram, LpOutcome};
use crate::numerics::rational::Rational;
use crate::sampling;
use crate::simulation::{mix, post_process, PostProcessing};

use num_traits::{One, Zero};

/// A joint meter for the pair `(A, B)`: effects indexed by outcome pairs
/// with `Σ_y G_xy = A_x` and `Σ_x G_xy = B_y`.
#[derive(Debug, Clone)]
pub struct JointMeter {
    grid: Vec<Vec<Effect>>,
}

impl JointMeter {
    /// Validates the grid against its intended marginals.
    pub fn new(grid: Vec<Vec<Effect>>, a: &Meter, b: &Meter, space: &StateSpace) -> Result<Self> {
        if grid.len() != a.num_outcomes()
            || grid.iter().any(|row| row.len() != b.num_outcomes())
        {
            return Err(Error::DimensionMismatch(
                "joint grid shape must be |Ω_A| × |Ω_B|".into(),
            ));
        }
        let d = space.dim();
        for (x, row) in grid.iter().enumerate() {
            for (y, g) in row.iter().enumerate() {
                g.validate(space).map_err(|e| {
                    Error::InvalidMeter(format!("joint effect ({x},{y}): {e}"))
                })?;
            }
        }
        for (x, row) in grid.iter().enumerate() {
            let sum = row.iter().fold(Effect::zero(d), |acc, g| acc.add(g));
            if &sum != a.effect(x) {
                return Err(Error::InvalidMeter(format!(
                    "row {x} does not marginalize to the first meter"
                )));
            }
        }
        for y in 0..b.num_outcomes() {
            let sum = grid
                .iter()
                .fold(Effect::zero(d), |acc, row| acc.add(&row[y]));
            if &sum != b.effect(y) {
                return Err(Error::InvalidMeter(format!(
                    "column {y} does not marginalize to the second meter"
                )));
            }
        }
        Ok(JointMeter { grid })
    }

    pub fn effect(&self, x: usize, y: usize) -> &Effect {
        &self.grid[x][y]
    }

    pub fn rows(&self) -> usize {
        self.grid.len()
    }

    pub fn cols(&self) -> usize {
        self.grid[0].len()
    }

    /// The joint meter flattened to a single outcome list `(x, y)`.
    pub fn flattened(&self) -> Vec<Effect> {
        self.grid.iter().flatten().cloned().collect()
    }
}

/// Outcome of the compatibility decision.
#[derive(Debug, Clone)]
pub enum CompatibilityOutcome {
    Compatible(JointMeter),
    Incompatible(InfeasibilityProof),
}

impl CompatibilityOutcome {
    pub fn is_compatible(&self) -> bool {
        matches!(self, CompatibilityOutcome::Compatible(_))
    }
}

/// Decides joint-meter existence for `(a, b)` by exact LP feasibility.
///
/// Variables are the dual coordinates of every grid effect; constraints are
/// nonnegativity at every state-space vertex plus both marginal identities.
/// Upper validity `G_xy ≤ u` follows from the marginals.
pub fn are_compatible(a: &Meter, b: &Meter, space: &StateSpace) -> Result<CompatibilityOutcome> {
    let poly = space.require_polytope()?;
    let d = poly.dim();
    if a.dim() != d || b.dim() != d {
        return Err(Error::DimensionMismatch(
            "meters must live on the given state space".into(),
        ));
    }
    let (na, nb) = (a.num_outcomes(), b.num_outcomes());
    let width = d + 1;
    let num_vars = na * nb * width;
    let var = |x: usize, y: usize, t: usize| (x * nb + y) * width + t;

    let mut lp = LinearProgram::new(num_vars);

    // G_xy(v_k) ≥ 0 at every vertex.
    for x in 0..na {
        for y in 0..nb {
            for vertex in poly.vertices() {
                let mut row = vec![Rational::zero(); num_vars];
                row[var(x, y, 0)] = Rational::one();
                for (t, coord) in vertex.iter().enumerate() {
                    row[var(x, y, t + 1)] = coord.clone();
                }
                lp.add_ge(row, Rational::zero());
            }
        }
    }
    // Σ_y G_xy = A_x.
    for x in 0..na {
        let coords = a.effect(x).coords();
        for t in 0..width {
            let mut row = vec![Rational::zero(); num_vars];
            for y in 0..nb {
                row[var(x, y, t)] = Rational::one();
            }
            lp.add_eq(row, coords[t].clone());
        }
    }
    // Σ_x G_xy = B_y.
    for y in 0..nb {
        let coords = b.effect(y).coords();
        for t in 0..width {
            let mut row = vec![Rational::zero(); num_vars];
            for x in 0..na {
                row[var(x, y, t)] = Rational::one();
            }
            lp.add_eq(row, coords[t].clone());
        }
    }

    match lp.solve()? {
        LpOutcome::Infeasible { certificate } => Ok(CompatibilityOutcome::Incompatible(
            InfeasibilityProof {
                program: lp,
                certificate,
            },
        )),
        outcome => {
            let point = outcome.point().expect("feasible outcome carries a point");
            let mut grid = Vec::with_capacity(na);
            for x in 0..na {
                let mut row = Vec::with_capacity(nb);
                for y in 0..nb {
                    let coords: Vec<Rational> =
                        (0..width).map(|t| point[var(x, y, t)].clone()).collect();
                    row.push(Effect::from_coords(&coords)?);
                }
                grid.push(row);
            }
            Ok(CompatibilityOutcome::Compatible(JointMeter::new(
                grid, a, b, space,
            )?))
        }
    }
}

/// Membership of `d` in the compatibility set `C(a)`.
pub fn in_compat_set(d: &Meter, a: &Meter, space: &StateSpace) -> Result<bool> {
    Ok(are_compatible(d, a, space)?.is_compatible())
}

/// Sampled check that `C(A)` is closed under mixing and post-processing.
#[derive(Debug, Clone)]
pub struct CompatClosureReport {
    pub seed: u64,
    pub samples: usize,
    pub violations: usize,
}

/// Samples members of `C(A)` (random joint splittings of `A`), forms random
/// mixtures and post-processings, and re-tests membership.
pub fn check_compat_closure(
    a: &Meter,
    samples: usize,
    seed: u64,
    space: &StateSpace,
) -> Result<CompatClosureReport> {
    let mut rng = sampling::rng_from_seed(seed);
    let mut violations = 0;

    let sample_member = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<Meter> {
        // A random joint meter with marginal A: split each A_x across 2–4
        // columns; the other marginal is then compatible with A.
        let cols = rng.gen_range(2..=4);
        let splits = PostProcessing::new(sampling::random_stochastic_rows(
            rng,
            a.num_outcomes(),
            cols,
        ))?;
        post_process(&splits, a, space)
    };

    for round in 0..samples {
        let member = match round % 3 {
            0 => {
                let m1 = sample_member(&mut rng)?;
                let m2 = sample_member(&mut rng)?;
                let w = sampling::random_unit_rational(&mut rng, 6);
                mix(&[m1, m2], &[w.clone(), Rational::one() - w], space)?
            }
            1 => {
                let m = sample_member(&mut rng)?;
                let cols = rng.gen_range(2..=3);
                let nu = PostProcessing::new(sampling::random_stochastic_rows(
                    &mut rng,
                    m.num_outcomes(),
                    cols,
                ))?;
                post_process(&nu, &m, space)?
            }
            _ => {
                let outcomes = rng.gen_range(2..=3);
                Meter::trivial(sampling::random_distribution(&mut rng, outcomes), a.dim())?
            }
        };
        if !in_compat_set(&member, a, space)? {
            violations += 1;
        }
    }
    Ok(CompatClosureReport {
        seed,
        samples,
        violations,
    })
}
