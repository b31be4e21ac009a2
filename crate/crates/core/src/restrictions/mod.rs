//! Operational restrictions on meters.
//!
//! An effect restriction is the convex hull of finitely many effects;
//! membership is one LP. A meter restriction is generated by simulation
//! from a meter list, induced by an effect restriction, or the noise family
//! at a fixed noise level. The classifier sorts restrictions into the three
//! classes: induced by effects (R1), effect-complete but meter-restricted
//! (R2), and everything else (R3), emitting machine-checkable witnesses.

mod classify;

pub use classify::{
    classify, tomographic_completeness, ClassificationResult, ClassificationWitness,
    ClassifyOptions, RestrictionLabel,
};

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry;
use crate::gpt::{
    decompose_indecomposable, is_indecomposable, Decomposition, Effect, Meter, StateSpace,
    DEFAULT_RANGE_CAP,
};
use crate::numerics::lp::LinearProgram;
use crate::numerics::matrix::Matrix;
use crate::numerics::radical::ExtremeValue;
use crate::numerics::rational::{rat, Rational};
use crate::simulation::simulable;

/// Default cap on the effect-space dimension `d + 1` for vertex and facet
/// enumeration. Override per call, or through `GPT_RESTRICT_DIM_CAP` in the
/// command line tool.
pub const DEFAULT_DIM_CAP: usize = 6;

/// A finitely generated effect restriction: the convex hull of its
/// generators. Membership is decided by LP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectRestriction {
    generators: Vec<Effect>,
}

impl EffectRestriction {
    pub fn new(generators: Vec<Effect>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidEffect("no generators".into()));
        };
        let dim = first.dim();
        if generators.iter().any(|g| g.dim() != dim) {
            return Err(Error::DimensionMismatch(
                "generators have differing dimensions".into(),
            ));
        }
        Ok(EffectRestriction { generators })
    }

    pub fn generators(&self) -> &[Effect] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    /// Hull membership by LP.
    pub fn contains(&self, e: &Effect) -> bool {
        if e.dim() != self.dim() {
            return false;
        }
        let n = self.generators.len();
        let mut lp = LinearProgram::new(n);
        lp.set_all_nonneg();
        lp.add_eq(vec![Rational::one(); n], Rational::one());
        let target = e.coords();
        for t in 0..=self.dim() {
            let row: Vec<Rational> = self.generators.iter().map(|g| g.coords()[t].clone()).collect();
            lp.add_eq(row, target[t].clone());
        }
        matches!(lp.solve(), Ok(outcome) if outcome.is_feasible())
    }

    /// Every generator of `other` lies in this hull.
    pub fn includes(&self, other: &EffectRestriction) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    /// Mutual hull inclusion.
    pub fn same_hull(&self, other: &EffectRestriction) -> bool {
        self.includes(other) && other.includes(self)
    }
}

/// Outcome of validating an effect restriction against the consistency
/// conditions: the unit and zero effects must be in the hull, and every
/// generator's complement must be in the hull (which realizes each effect
/// inside a dichotomic meter of the restriction).
#[derive(Debug, Clone)]
pub struct RestrictionValidation {
    pub unit_in_hull: bool,
    pub zero_in_hull: bool,
    /// Generator indices whose complement `u − g` escapes the hull.
    pub complement_violations: Vec<usize>,
    /// Generator indices that are not valid effects on the space.
    pub invalid_generators: Vec<usize>,
}

impl RestrictionValidation {
    pub fn is_valid(&self) -> bool {
        self.unit_in_hull
            && self.zero_in_hull
            && self.complement_violations.is_empty()
            && self.invalid_generators.is_empty()
    }
}

/// Checks the consistency conditions of an effect restriction.
pub fn effect_restriction_validate(
    restriction: &EffectRestriction,
    space: &StateSpace,
) -> RestrictionValidation {
    let d = restriction.dim();
    let invalid_generators = restriction
        .generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.is_valid(space))
        .map(|(i, _)| i)
        .collect();
    let complement_violations = restriction
        .generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| !restriction.contains(&g.complement()))
        .map(|(i, _)| i)
        .collect();
    RestrictionValidation {
        unit_in_hull: restriction.contains(&Effect::unit(d)),
        zero_in_hull: restriction.contains(&Effect::zero(d)),
        complement_violations,
        invalid_generators,
    }
}

/// Convexity of a hull-represented restriction. Always true by
/// construction; simulation closedness of the induced meter set is
/// equivalent to exactly this convexity.
pub fn is_convex_closed_restriction(_restriction: &EffectRestriction) -> bool {
    true
}

/// Tests a user-supplied membership oracle for convexity on the midpoints
/// of its accepted points; returns the first rejected pair.
pub fn convexity_counterexample<F>(accepted: &[Effect], oracle: F) -> Option<(usize, usize)>
where
    F: Fn(&Effect) -> bool,
{
    let half = rat(1, 2);
    for i in 0..accepted.len() {
        for j in i + 1..accepted.len() {
            let midpoint = accepted[i].scale(&half).add(&accepted[j].scale(&half));
            if !oracle(&midpoint) {
                return Some((i, j));
            }
        }
    }
    None
}

/// A restriction on meters.
#[derive(Debug, Clone)]
pub enum MeterRestriction {
    /// The simulation closure of a finite generator list.
    GeneratedBySimulation { generators: Vec<Meter> },
    /// All meters whose range lies inside an effect restriction.
    InducedByEffects { effects: EffectRestriction },
    /// Meters of the form `t·B + (1−t)·(trivial)`: noise level `1 − t`.
    NoiseFamily { t: Rational },
}

impl MeterRestriction {
    /// Membership of a meter in the restriction.
    pub fn contains(&self, meter: &Meter, space: &StateSpace) -> Result<bool> {
        match self {
            MeterRestriction::GeneratedBySimulation { generators } => {
                Ok(simulable(meter, generators, space)?.is_simulable())
            }
            MeterRestriction::InducedByEffects { effects } => {
                let range = meter.range(DEFAULT_RANGE_CAP)?;
                Ok(range.iter().all(|e| effects.contains(e)))
            }
            MeterRestriction::NoiseFamily { t } => Ok(in_noise_restriction(meter, t, space)),
        }
    }
}

/// Vertices of the full effect set `E(S) = {e : 0 ≤ e(v_k) ≤ 1}` of a
/// polytope space.
pub fn effect_space_vertices(space: &StateSpace, dim_cap: usize) -> Result<Vec<Effect>> {
    let poly = space.require_polytope()?;
    let d = poly.dim();
    let mut inequalities = Vec::with_capacity(2 * poly.vertices().len());
    for vertex in poly.vertices() {
        // 0 ≤ c + v·x_k ≤ 1 over the coordinates (c, v).
        let mut lower = vec![-Rational::one()];
        lower.extend(vertex.iter().map(|x| -x));
        inequalities.push((lower, Rational::zero()));
        let mut upper = vec![Rational::one()];
        upper.extend(vertex.iter().cloned());
        inequalities.push((upper, Rational::one()));
    }
    let vertices = geometry::polytope_vertices(&inequalities, &[], d + 1, dim_cap)?;
    vertices.iter().map(|v| Effect::from_coords(v)).collect()
}

/// The effect restriction induced by a meter restriction: all effects that
/// occur in the range of some allowed meter, as a hull.
pub fn effects_of_restriction(
    restriction: &MeterRestriction,
    space: &StateSpace,
    dim_cap: usize,
) -> Result<EffectRestriction> {
    match restriction {
        // Every subset sum of a simulated meter is a convex combination of
        // generator range elements and o, and conversely every hull element
        // appears in the range of a mixture of range dichotomies, so the
        // hull of the united ranges is exact.
        MeterRestriction::GeneratedBySimulation { generators } => {
            if generators.is_empty() {
                return Err(Error::Domain("no generator meters".into()));
            }
            let mut effects = Vec::new();
            for meter in generators {
                effects.extend(meter.range(DEFAULT_RANGE_CAP)?);
            }
            effects.sort();
            effects.dedup();
            EffectRestriction::new(effects)
        }
        // An effect occurs in the range of a meter with range inside the
        // hull iff both it and its complement lie in the hull (given o and
        // u do): compute hull(G) ∩ (u − hull(G)) by facet enumeration.
        MeterRestriction::InducedByEffects { effects } => {
            let d = effects.dim();
            if !effects.contains(&Effect::unit(d)) || !effects.contains(&Effect::zero(d)) {
                return Err(Error::Domain(
                    "the hull misses o or u, so no meter has its range inside it".into(),
                ));
            }
            let points: Vec<Vec<Rational>> =
                effects.generators().iter().map(Effect::coords).collect();
            let reflected: Vec<Vec<Rational>> = effects
                .generators()
                .iter()
                .map(|g| g.complement().coords())
                .collect();
            let h1 = geometry::polytope_facets(&points, d + 1, dim_cap)?;
            let h2 = geometry::polytope_facets(&reflected, d + 1, dim_cap)?;
            let mut inequalities = h1.inequalities;
            inequalities.extend(h2.inequalities);
            let mut equalities = h1.equalities;
            equalities.extend(h2.equalities);
            let vertices =
                geometry::polytope_vertices(&inequalities, &equalities, d + 1, dim_cap)?;
            let generators: Vec<Effect> = vertices
                .iter()
                .map(|v| Effect::from_coords(v))
                .collect::<Result<_>>()?;
            EffectRestriction::new(generators)
        }
        // E_{R_t} = { t·e + (1−t)·r·u }: generated by the images of the
        // extreme effects at r ∈ {0, 1}.
        MeterRestriction::NoiseFamily { t } => {
            if t.is_negative() || t > &Rational::one() {
                return Err(Error::Domain("noise parameter t must be in [0, 1]".into()));
            }
            let extreme = effect_space_vertices(space, dim_cap)?;
            let d = space.dim();
            let unit = Effect::unit(d);
            let mut generators = Vec::with_capacity(2 * extreme.len());
            for g in &extreme {
                let shrunk = g.scale(t);
                generators.push(shrunk.clone());
                generators.push(shrunk.add(&unit.scale(&(Rational::one() - t))));
            }
            generators.sort();
            generators.dedup();
            EffectRestriction::new(generators)
        }
    }
}

/// The linear span of a family of effects together with `u`, representing
/// the convex subalgebra `U ∩ E(S)`.
#[derive(Debug, Clone)]
pub struct SubalgebraClosure {
    basis: Vec<Vec<Rational>>,
}

impl SubalgebraClosure {
    /// Basis of `span(effects ∪ {u})` in dual coordinates.
    pub fn new(effects: &[Effect], dim: usize) -> Self {
        let mut basis: Vec<Vec<Rational>> = Vec::new();
        let mut rank = 0;
        let unit = Effect::unit(dim);
        for coords in std::iter::once(unit.coords())
            .chain(effects.iter().map(Effect::coords))
        {
            let mut candidate = basis.clone();
            candidate.push(coords.clone());
            let r = Matrix::from_rows(candidate).expect("uniform lengths").rank();
            if r > rank {
                rank = r;
                basis.push(coords);
            }
        }
        SubalgebraClosure { basis }
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Dimension of the spanned subspace.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Membership in `U ∩ E(S)`: solve for span coefficients, then check
    /// effect validity.
    pub fn contains(&self, e: &Effect, space: &StateSpace) -> Result<bool> {
        if !e.is_valid(space) {
            return Ok(false);
        }
        let matrix = Matrix::from_rows(self.basis.clone())?.transpose();
        let solution = matrix.solve(&e.coords())?;
        Ok(solution.particular().is_some())
    }
}

/// Span of a family of effects together with `u`, plus a membership test.
pub fn subalgebra_closure(effects: &[Effect], space: &StateSpace) -> SubalgebraClosure {
    SubalgebraClosure::new(effects, space.dim())
}

/// Evidence behind the subalgebra decision: the span dimension and the
/// mutual-inclusion check between the hull and `span ∩ E(S)`.
#[derive(Debug, Clone)]
pub struct SubalgebraReport {
    /// Dimension of `span(generators ∪ {u})`.
    pub span_rank: usize,
    pub unit_in_hull: bool,
    /// Number of vertices of `span ∩ E(S)` that were tested.
    pub intersection_vertices: usize,
    /// A vertex of `span ∩ E(S)` outside the hull, when one exists.
    pub escaped_vertex: Option<Effect>,
}

impl SubalgebraReport {
    pub fn is_subalgebra(&self) -> bool {
        self.unit_in_hull && self.escaped_vertex.is_none()
    }
}

/// Decides whether the hull equals `span(generators ∪ {u}) ∩ E(S)`, the
/// canonical form of a convex effect subalgebra, with evidence.
///
/// The hull is always contained in that intersection, so the test is (i)
/// the unit effect must lie in the hull, and (ii) every vertex of the
/// intersection polytope must lie in the hull.
pub fn subalgebra_report(
    restriction: &EffectRestriction,
    space: &StateSpace,
    dim_cap: usize,
) -> Result<SubalgebraReport> {
    for g in restriction.generators() {
        g.validate(space)?;
    }
    let d = restriction.dim();
    let closure = SubalgebraClosure::new(restriction.generators(), d);
    let unit_in_hull = restriction.contains(&Effect::unit(d));

    // H-representation of span ∩ E(S): the value constraints of E(S) plus
    // orthogonality to the complement of the span.
    let poly = space.require_polytope()?;
    let mut inequalities = Vec::new();
    for vertex in poly.vertices() {
        let mut lower = vec![-Rational::one()];
        lower.extend(vertex.iter().map(|x| -x));
        inequalities.push((lower, Rational::zero()));
        let mut upper = vec![Rational::one()];
        upper.extend(vertex.iter().cloned());
        inequalities.push((upper, Rational::one()));
    }
    let span_matrix = Matrix::from_rows(closure.basis().to_vec())?;
    let equalities: Vec<(Vec<Rational>, Rational)> = span_matrix
        .nullspace()
        .into_iter()
        .map(|n| (n, Rational::zero()))
        .collect();
    let vertices = geometry::polytope_vertices(&inequalities, &equalities, d + 1, dim_cap)?;
    let intersection_vertices = vertices.len();
    let mut escaped_vertex = None;
    for v in vertices {
        let e = Effect::from_coords(&v)?;
        if !restriction.contains(&e) {
            escaped_vertex = Some(e);
            break;
        }
    }
    Ok(SubalgebraReport {
        span_rank: closure.rank(),
        unit_in_hull,
        intersection_vertices,
        escaped_vertex,
    })
}

/// Boolean form of [`subalgebra_report`].
pub fn is_subalgebra(
    restriction: &EffectRestriction,
    space: &StateSpace,
    dim_cap: usize,
) -> Result<bool> {
    Ok(subalgebra_report(restriction, space, dim_cap)?.is_subalgebra())
}

/// The noise content `w(B; T) = Σ_x λmin(B_x)`: the largest trivial-meter
/// weight in any convex decomposition of the meter.
pub fn noise_content(meter: &Meter, space: &StateSpace) -> ExtremeValue {
    meter
        .effects()
        .iter()
        .fold(ExtremeValue::zero(), |acc, e| acc.add(&e.lambda_min(space)))
}

/// Membership in the noise restriction: `w(B; T) ≥ 1 − t`, exactly.
pub fn in_noise_restriction(meter: &Meter, t: &Rational, space: &StateSpace) -> bool {
    let threshold = Rational::one() - t;
    noise_content(meter, space).cmp_rational(&threshold) != Ordering::Less
}

/// A meter witnessing that the noise family is not induced by any effect
/// restriction, together with the construction parameters.
#[derive(Debug, Clone)]
pub struct R3Witness {
    pub meter: Meter,
    /// Scaling applied to the λmax = 1 block of the indecomposable meter.
    pub q: Rational,
    /// Total trivial weight `Σ r_i`; the witness has `w(A; T) = (1−t)·r`.
    pub r: Rational,
}

/// Constructs a meter whose effects all belong to `E_{R_t}` while the meter
/// itself fails the noise-content bound, so it lies in `M_{E_{R_t}} \ R_t`.
///
/// Requires `t ∈ (0, 1)` and an extreme indecomposable effect with
/// `λmax(e) = 1`. The construction decomposes `u − e` into indecomposables,
/// splits the sharp outcomes with `q = (t+1)/2`, and adds trivial weight
/// `r` at the midpoint of its admissible interval, split uniformly.
pub fn build_r3_witness(
    t: &Rational,
    e: &Effect,
    space: &StateSpace,
) -> Result<R3Witness> {
    if !t.is_positive() || t >= &Rational::one() {
        return Err(Error::Domain(
            "the noise construction needs t strictly between 0 and 1".into(),
        ));
    }
    e.validate(space)?;
    if e.lambda_max(space).cmp_rational(&Rational::one()) != Ordering::Equal
        || !is_indecomposable(e, space)?
    {
        return Err(Error::Domain(
            "need an extreme indecomposable effect with λmax = 1".into(),
        ));
    }
    let d = space.dim();
    let unit = Effect::unit(d);
    let residual = unit.sub(e);
    if residual.is_zero() {
        return Err(Error::Domain(
            "u − e is zero; the state space is degenerate".into(),
        ));
    }
    let mut parts = vec![e.clone()];
    match decompose_indecomposable(&residual, space)? {
        Decomposition::Exact(rest) => parts.extend(rest),
        Decomposition::Symbolic(_) => {
            return Err(Error::NotRepresentable(
                "u − e does not decompose with rational coefficients".into(),
            ))
        }
    }
    // Indecomposable effects sit on the boundary of the dual cone, so their
    // minima vanish; the base meter carries no trivial weight.
    for p in &parts {
        if p.lambda_min(space).sign() != Ordering::Equal {
            return Err(Error::Domain(
                "an indecomposable summand has nonzero minimum".into(),
            ));
        }
    }
    let one = Rational::one();
    let sharp: Vec<Effect> = parts
        .iter()
        .filter(|p| p.lambda_max(space).cmp_rational(&one) == Ordering::Equal)
        .cloned()
        .collect();
    let dull: Vec<Effect> = parts
        .iter()
        .filter(|p| p.lambda_max(space).cmp_rational(&one) != Ordering::Equal)
        .cloned()
        .collect();
    debug_assert!(!sharp.is_empty());

    let q = (t + &one) / rat(2, 1);
    let mut base_effects: Vec<Effect> = sharp.iter().map(|p| p.scale(&q)).collect();
    base_effects.extend(dull.iter().cloned());
    base_effects.extend(sharp.iter().map(|p| p.scale(&(&one - &q))));
    let base = Meter::new(base_effects, space)?;

    let l_max = base
        .effects()
        .iter()
        .map(|b| {
            b.lambda_max(space)
                .as_rational()
                .cloned()
                .ok_or_else(|| Error::NotRepresentable("irrational λmax in the base meter".into()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .expect("base meter has outcomes");
    debug_assert!(l_max >= *t && l_max < one);

    let r_low = (&l_max - t) / ((&one - t) * &l_max);
    let r = (&r_low + &one) / rat(2, 1);
    let outcomes = base.num_outcomes();
    let r_split = &r / rat(outcomes as i64, 1);

    // A_i = (1 − (1−t)·r)·B_i + (1−t)·r_i·u.
    let shrink = &one - &((&one - t) * &r);
    let lift = (&one - t) * &r_split;
    let witness_effects: Vec<Effect> = base
        .effects()
        .iter()
        .map(|b| b.scale(&shrink).add(&unit.scale(&lift)))
        .collect();
    let meter = Meter::new(witness_effects, space)?;

    // Each effect is t·a_i + (1−t)·r_i·u with a_i a valid effect.
    let scale_a = &shrink / t;
    for b in base.effects() {
        let a = b.scale(&scale_a);
        a.validate(space).map_err(|_| {
            Error::Domain("construction produced an inadmissible component".into())
        })?;
    }
    let expected_noise = (&one - t) * &r;
    if noise_content(&meter, space) != ExtremeValue::exact(expected_noise) {
        return Err(Error::Domain(
            "witness noise content differs from (1−t)·r".into(),
        ));
    }
    Ok(R3Witness { meter, q, r })
}
