//! The simulation scheme for meters: classical post-processing, mixing,
//! the simulability LP and its closure-operator properties.
//!
//! A meter `A` is simulable from meters `B⁽¹⁾…B⁽ᵐ⁾` when
//! `A_y = Σ_i p_i (ν⁽ⁱ⁾ ∘ B⁽ⁱ⁾)_y` for a probability distribution `p` and
//! row-stochastic matrices `ν⁽ⁱ⁾`. Substituting `q⁽ⁱ⁾_xy = p_i ν⁽ⁱ⁾_xy`
//! turns the bilinear search into a single exact LP; a feasible solution is
//! returned as a witness that reconstructs the target with zero residual,
//! an infeasible one as a Farkas certificate.

mod ntomic;

pub use ntomic::{certify_n_tomic, NTomicCertificate, NTomicEvidence, NTomicVerdict};
pub(crate) use ntomic::{pair_completes_unit, proportional_effects};

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::gpt::{Effect, Meter, StateSpace};
use crate::numerics::lp::{InfeasibilityProof, LinearProgram, LpOutcome};
use crate::numerics::rational::Rational;
use crate::sampling;

/// A row-stochastic post-processing matrix: entry `(x, y)` is the
/// probability that source outcome `x` is relabeled to target outcome `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostProcessing {
    matrix: Vec<Vec<Rational>>,
}

impl PostProcessing {
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        if matrix.is_empty() || matrix[0].is_empty() {
            return Err(Error::DimensionMismatch(
                "post-processing matrix must be nonempty".into(),
            ));
        }
        let cols = matrix[0].len();
        for (x, row) in matrix.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(
                    "post-processing rows have differing lengths".into(),
                ));
            }
            if row.iter().any(Signed::is_negative)
                || row.iter().sum::<Rational>() != Rational::one()
            {
                return Err(Error::NotADistribution(format!(
                    "row {x} of the post-processing matrix"
                )));
            }
        }
        Ok(PostProcessing { matrix })
    }

    pub fn identity(n: usize) -> Self {
        let matrix = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| if x == y { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        PostProcessing { matrix }
    }

    /// Merges every outcome into a single one.
    pub fn merge_all(n: usize) -> Self {
        PostProcessing {
            matrix: vec![vec![Rational::one()]; n],
        }
    }

    pub fn num_source(&self) -> usize {
        self.matrix.len()
    }

    pub fn num_target(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn entry(&self, x: usize, y: usize) -> &Rational {
        &self.matrix[x][y]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.matrix
    }
}

/// Applies a post-processing: `A_y = Σ_x ν_xy B_x`.
pub fn post_process(nu: &PostProcessing, meter: &Meter, space: &StateSpace) -> Result<Meter> {
    if nu.num_source() != meter.num_outcomes() {
        return Err(Error::DimensionMismatch(format!(
            "post-processing has {} source outcomes, meter has {}",
            nu.num_source(),
            meter.num_outcomes()
        )));
    }
    let d = meter.dim();
    let effects: Vec<Effect> = (0..nu.num_target())
        .map(|y| {
            meter
                .effects()
                .iter()
                .enumerate()
                .fold(Effect::zero(d), |acc, (x, b)| {
                    acc.add(&b.scale(nu.entry(x, y)))
                })
        })
        .collect();
    Meter::new(effects, space)
}

/// Mixes meters with weights `p`, padding outcome sets with zero effects.
pub fn mix(meters: &[Meter], p: &[Rational], space: &StateSpace) -> Result<Meter> {
    if meters.is_empty() || meters.len() != p.len() {
        return Err(Error::DimensionMismatch(
            "need one weight per meter".into(),
        ));
    }
    if p.iter().any(Signed::is_negative) || p.iter().sum::<Rational>() != Rational::one() {
        return Err(Error::NotADistribution("mixing weights".into()));
    }
    let outcomes = meters.iter().map(Meter::num_outcomes).max().unwrap();
    let d = meters[0].dim();
    let mut effects = vec![Effect::zero(d); outcomes];
    for (meter, weight) in meters.iter().zip(p) {
        for (x, e) in meter.effects().iter().enumerate() {
            effects[x] = effects[x].add(&e.scale(weight));
        }
    }
    Meter::new(effects, space)
}

/// A simulation of a target meter: mixing weights and one post-processing
/// per simulator.
#[derive(Debug, Clone)]
pub struct SimulationWitness {
    pub weights: Vec<Rational>,
    pub post_processings: Vec<PostProcessing>,
}

impl SimulationWitness {
    /// Rebuilds `Σ_i p_i (ν⁽ⁱ⁾ ∘ B⁽ⁱ⁾)` exactly.
    pub fn reconstruct(&self, simulators: &[Meter], space: &StateSpace) -> Result<Meter> {
        if simulators.len() != self.weights.len() {
            return Err(Error::DimensionMismatch(
                "witness size differs from simulator count".into(),
            ));
        }
        let processed: Vec<Meter> = simulators
            .iter()
            .zip(&self.post_processings)
            .map(|(b, nu)| post_process(nu, b, space))
            .collect::<Result<_>>()?;
        mix(&processed, &self.weights, space)
    }
}

/// Outcome of the simulability decision.
#[derive(Debug, Clone)]
pub enum SimulationOutcome {
    Simulable(SimulationWitness),
    NotSimulable(InfeasibilityProof),
}

impl SimulationOutcome {
    pub fn is_simulable(&self) -> bool {
        matches!(self, SimulationOutcome::Simulable(_))
    }

    pub fn witness(&self) -> Option<&SimulationWitness> {
        match self {
            SimulationOutcome::Simulable(w) => Some(w),
            SimulationOutcome::NotSimulable(_) => None,
        }
    }
}

/// Decides by one exact LP whether `target` is simulable from `simulators`.
///
/// Variables are `q⁽ⁱ⁾_xy = p_i ν⁽ⁱ⁾_xy ≥ 0` plus the weights `p_i`, with
/// row-sum consistency `Σ_y q⁽ⁱ⁾_xy = p_i`, normalization `Σ_i p_i = 1` and
/// the dual-coordinate equalities `A_y = Σ_{i,x} q⁽ⁱ⁾_xy B⁽ⁱ⁾_x`. Rows of
/// simulators with `p_i = 0` are recovered as uniform post-processings.
pub fn simulable(
    target: &Meter,
    simulators: &[Meter],
    space: &StateSpace,
) -> Result<SimulationOutcome> {
    if simulators.is_empty() {
        return Err(Error::Domain("need at least one simulator".into()));
    }
    let d = space.dim();
    if target.dim() != d || simulators.iter().any(|b| b.dim() != d) {
        return Err(Error::DimensionMismatch(
            "target and simulators must live on the given state space".into(),
        ));
    }
    let n_target = target.num_outcomes();

    // Variable layout: q blocks per simulator (row-major), then the p_i.
    let mut q_offset = Vec::with_capacity(simulators.len());
    let mut next = 0;
    for b in simulators {
        q_offset.push(next);
        next += b.num_outcomes() * n_target;
    }
    let p_offset = next;
    let num_vars = next + simulators.len();

    let mut lp = LinearProgram::new(num_vars);
    lp.set_all_nonneg();

    // Σ_y q⁽ⁱ⁾_xy = p_i for every simulator i and source outcome x.
    for (i, b) in simulators.iter().enumerate() {
        for x in 0..b.num_outcomes() {
            let mut row = vec![Rational::zero(); num_vars];
            for y in 0..n_target {
                row[q_offset[i] + x * n_target + y] = Rational::one();
            }
            row[p_offset + i] = -Rational::one();
            lp.add_eq(row, Rational::zero());
        }
    }

    // Σ_i p_i = 1.
    let mut norm = vec![Rational::zero(); num_vars];
    for i in 0..simulators.len() {
        norm[p_offset + i] = Rational::one();
    }
    lp.add_eq(norm, Rational::one());

    // A_y = Σ_{i,x} q⁽ⁱ⁾_xy B⁽ⁱ⁾_x, one equality per target outcome and
    // dual coordinate.
    for y in 0..n_target {
        let target_coords = target.effect(y).coords();
        for t in 0..=d {
            let mut row = vec![Rational::zero(); num_vars];
            for (i, b) in simulators.iter().enumerate() {
                for (x, bx) in b.effects().iter().enumerate() {
                    row[q_offset[i] + x * n_target + y] = bx.coords()[t].clone();
                }
            }
            lp.add_eq(row, target_coords[t].clone());
        }
    }

    match lp.solve()? {
        LpOutcome::Infeasible { certificate } => Ok(SimulationOutcome::NotSimulable(
            InfeasibilityProof {
                program: lp,
                certificate,
            },
        )),
        outcome => {
            let point = outcome
                .point()
                .expect("feasible outcome carries a point")
                .to_vec();
            let weights: Vec<Rational> =
                (0..simulators.len()).map(|i| point[p_offset + i].clone()).collect();
            let mut post_processings = Vec::with_capacity(simulators.len());
            for (i, b) in simulators.iter().enumerate() {
                let m = b.num_outcomes();
                let mut rows = Vec::with_capacity(m);
                for x in 0..m {
                    let row: Vec<Rational> = if weights[i].is_zero() {
                        vec![
                            Rational::new(1.into(), (n_target as i64).into());
                            n_target
                        ]
                    } else {
                        (0..n_target)
                            .map(|y| &point[q_offset[i] + x * n_target + y] / &weights[i])
                            .collect()
                    };
                    rows.push(row);
                }
                post_processings.push(PostProcessing::new(rows)?);
            }
            let witness = SimulationWitness {
                weights,
                post_processings,
            };
            debug_assert_eq!(&witness.reconstruct(simulators, space)?, target);
            Ok(SimulationOutcome::Simulable(witness))
        }
    }
}

/// Sampled check of the closure-operator laws of the simulation map.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub seed: u64,
    pub samples: usize,
    /// Generators that failed to simulate themselves (reflexivity).
    pub sim1_failures: Vec<usize>,
    /// Re-simulated samples that left the closure (idempotence).
    pub sim2_failures: usize,
    /// Subset-generated samples not simulable from the full set
    /// (monotonicity).
    pub sim3_failures: usize,
    /// Feasible witnesses whose reconstruction differed from the target.
    pub reconstruction_failures: usize,
}

impl ClosureReport {
    pub fn total_violations(&self) -> usize {
        self.sim1_failures.len()
            + self.sim2_failures
            + self.sim3_failures
            + self.reconstruction_failures
    }
}

/// Samples random simulations to exercise the three closure laws.
pub fn check_closure_axioms(
    generators: &[Meter],
    samples: usize,
    seed: u64,
    space: &StateSpace,
) -> Result<ClosureReport> {
    if generators.is_empty() {
        return Err(Error::Domain("need at least one generator".into()));
    }
    let mut rng = sampling::rng_from_seed(seed);
    let mut report = ClosureReport {
        seed,
        samples,
        sim1_failures: Vec::new(),
        sim2_failures: 0,
        sim3_failures: 0,
        reconstruction_failures: 0,
    };

    let check_member = |meter: &Meter, report: &mut ClosureReport| -> Result<bool> {
        match simulable(meter, generators, space)? {
            SimulationOutcome::Simulable(witness) => {
                if &witness.reconstruct(generators, space)? != meter {
                    report.reconstruction_failures += 1;
                }
                Ok(true)
            }
            SimulationOutcome::NotSimulable(_) => Ok(false),
        }
    };

    for (i, g) in generators.iter().enumerate() {
        if !check_member(g, &mut report)? {
            report.sim1_failures.push(i);
        }
    }

    for round in 0..samples {
        // A random member of the closure of a generator subset.
        let subset: Vec<Meter> = if round % 2 == 0 {
            generators.to_vec()
        } else {
            let keep: Vec<Meter> = generators
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .cloned()
                .collect();
            if keep.is_empty() {
                vec![generators[rng.gen_range(0..generators.len())].clone()]
            } else {
                keep
            }
        };
        let sampled = random_simulated(&mut rng, &subset, space)?;
        if round % 2 == 0 {
            // Idempotence: simulate once more from {sampled} ∪ generators.
            let mut extended = generators.to_vec();
            extended.push(sampled);
            let second = random_simulated(&mut rng, &extended, space)?;
            if !check_member(&second, &mut report)? {
                report.sim2_failures += 1;
            }
        } else {
            // Monotonicity: closure of a subset sits inside the closure.
            if !check_member(&sampled, &mut report)? {
                report.sim3_failures += 1;
            }
        }
    }
    Ok(report)
}

/// One random element of `sim⟨meters⟩`: random weights and random
/// post-processings into a random common outcome count.
fn random_simulated<R: Rng>(
    rng: &mut R,
    meters: &[Meter],
    space: &StateSpace,
) -> Result<Meter> {
    let n_target = rng.gen_range(2..=4);
    let weights = sampling::random_distribution(rng, meters.len());
    let processed: Vec<Meter> = meters
        .iter()
        .map(|b| {
            let nu = PostProcessing::new(sampling::random_stochastic_rows(
                rng,
                b.num_outcomes(),
                n_target,
            ))?;
            post_process(&nu, b, space)
        })
        .collect::<Result<_>>()?;
    mix(&processed, &weights, space)
}

/// Rescales a non-trivial dichotomic meter to one with `λmax = 1` on both
/// effects, returning the post-processing that recovers the original.
///
/// With `λ_x = λmax(A_x)` and `α = λ_1 + λ_2 − 1 > 0`:
/// `A'_1 = (1/α)·A_1 + ((λ_2 − 1)/α)·u`, symmetrically for `A'_2`, and
/// `A = ν ∘ A'` for `ν = [[λ_1, 1−λ_1], [1−λ_2, λ_2]]`.
pub fn normalize_dichotomic(
    meter: &Meter,
    space: &StateSpace,
) -> Result<(Meter, PostProcessing)> {
    if meter.num_outcomes() != 2 {
        return Err(Error::Domain("normalization needs a dichotomic meter".into()));
    }
    if meter.is_trivial() {
        return Err(Error::Domain(
            "a trivial meter can be post-processed from any meter; nothing to normalize".into(),
        ));
    }
    let lambda: Vec<Rational> = (0..2)
        .map(|x| {
            meter
                .effect(x)
                .lambda_max(space)
                .as_rational()
                .cloned()
                .ok_or_else(|| {
                    Error::NotRepresentable(
                        "dichotomic normalization needs rational λmax values".into(),
                    )
                })
        })
        .collect::<Result<_>>()?;
    let alpha = &lambda[0] + &lambda[1] - Rational::one();
    debug_assert!(alpha.is_positive());
    let d = meter.dim();
    let unit = Effect::unit(d);
    let inv_alpha = Rational::one() / &alpha;
    let sharp = |x: usize, other_lambda: &Rational| {
        meter
            .effect(x)
            .scale(&inv_alpha)
            .add(&unit.scale(&((other_lambda - Rational::one()) / &alpha)))
    };
    let normalized = Meter::new(vec![sharp(0, &lambda[1]), sharp(1, &lambda[0])], space)?;
    debug_assert_eq!(
        normalized.effect(0).lambda_max(space).as_rational(),
        Some(&Rational::one())
    );
    debug_assert_eq!(
        normalized.effect(0).lambda_min(space).as_rational(),
        Some(&Rational::zero())
    );
    let recovery = PostProcessing::new(vec![
        vec![lambda[0].clone(), Rational::one() - &lambda[0]],
        vec![Rational::one() - &lambda[1], lambda[1].clone()],
    ])?;
    debug_assert_eq!(&post_process(&recovery, &normalized, space)?, meter);
    Ok((normalized, recovery))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};

    fn gbit() -> StateSpace {
        StateSpace::square_gbit()
    }

    fn x_meter(space: &StateSpace) -> Meter {
        Meter::dichotomic(Effect::new(rat(1, 2), vec![rat(1, 2), int(0)]), space).unwrap()
    }

    fn y_meter(space: &StateSpace) -> Meter {
        Meter::dichotomic(Effect::new(rat(1, 2), vec![int(0), rat(1, 2)]), space).unwrap()
    }

    #[test]
    fn identity_post_processing_is_neutral() {
        let s = gbit();
        let a = x_meter(&s);
        let same = post_process(&PostProcessing::identity(2), &a, &s).unwrap();
        assert_eq!(same, a);
    }

    #[test]
    fn merging_all_outcomes_gives_the_unit() {
        let s = gbit();
        let a = x_meter(&s);
        let merged = post_process(&PostProcessing::merge_all(2), &a, &s).unwrap();
        assert_eq!(merged.num_outcomes(), 1);
        assert!(merged.effect(0).is_unit());
    }

    #[test]
    fn swap_post_processing_relabels() {
        let s = gbit();
        let a = x_meter(&s);
        let swap =
            PostProcessing::new(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        let swapped = post_process(&swap, &a, &s).unwrap();
        assert_eq!(swapped.effect(0), a.effect(1));
        assert_eq!(swapped.effect(1), a.effect(0));
    }

    #[test]
    fn self_mix_is_identity_and_trivial_mix_is_trivial() {
        let s = gbit();
        let a = x_meter(&s);
        let mixed = mix(&[a.clone(), a.clone()], &[rat(1, 2), rat(1, 2)], &s).unwrap();
        assert_eq!(mixed, a);

        let t1 = Meter::trivial(vec![rat(1, 4), rat(3, 4)], 2).unwrap();
        let t2 = Meter::trivial(vec![rat(1, 2), rat(1, 2)], 2).unwrap();
        let t = mix(&[t1, t2], &[rat(1, 3), rat(2, 3)], &s).unwrap();
        assert!(t.is_trivial());
    }

    #[test]
    fn mix_of_edge_meters_by_hand() {
        // (X₁ + Y₁)/2 = (1/2, (1/4, 1/4)): the value at vertex (1,1) is 1
        // and at (−1,−1) is 0, so λmax = 1 and λmin = 0 by direct
        // enumeration of the four vertices.
        let s = gbit();
        let mixed = mix(
            &[x_meter(&s), y_meter(&s)],
            &[rat(1, 2), rat(1, 2)],
            &s,
        )
        .unwrap();
        assert_eq!(
            mixed.effect(0),
            &Effect::new(rat(1, 2), vec![rat(1, 4), rat(1, 4)])
        );
        let values: Vec<Rational> = s
            .as_polytope()
            .unwrap()
            .vertices()
            .iter()
            .map(|v| mixed.effect(0).evaluate_at(v))
            .collect();
        assert_eq!(values.iter().max(), Some(&int(1)));
        assert_eq!(values.iter().min(), Some(&int(0)));
    }

    #[test]
    fn mixing_pads_with_zero_outcomes() {
        let s = gbit();
        let two = x_meter(&s);
        let three = mix(
            &[
                Meter::trivial(vec![rat(1, 3), rat(1, 3), rat(1, 3)], 2).unwrap(),
                two,
            ],
            &[rat(1, 2), rat(1, 2)],
            &s,
        )
        .unwrap();
        assert_eq!(three.num_outcomes(), 3);
    }

    #[test]
    fn meter_simulates_itself() {
        let s = gbit();
        let a = x_meter(&s);
        let outcome = simulable(&a, &[a.clone()], &s).unwrap();
        let witness = outcome.witness().expect("SIM1 membership");
        assert_eq!(witness.weights, vec![int(1)]);
        assert_eq!(witness.reconstruct(&[a.clone()], &s).unwrap(), a);
    }

    #[test]
    fn trivial_meter_from_any_simulator() {
        let s = gbit();
        let t = Meter::trivial(vec![rat(1, 3), rat(2, 3)], 2).unwrap();
        let outcome = simulable(&t, &[x_meter(&s)], &s).unwrap();
        assert!(outcome.is_simulable());
    }

    #[test]
    fn orthogonal_edge_meter_is_not_simulable() {
        // The x₂-edge effect lies outside span{u, x₁-effect}, so the LP must
        // be infeasible and the certificate must verify.
        let s = gbit();
        let outcome = simulable(&y_meter(&s), &[x_meter(&s)], &s).unwrap();
        match outcome {
            SimulationOutcome::NotSimulable(_) => {}
            SimulationOutcome::Simulable(_) => panic!("edge meters are inequivalent"),
        }
    }

    #[test]
    fn simulable_from_mixture_and_post_processing_round_trip() {
        let s = gbit();
        let generators = [x_meter(&s), y_meter(&s)];
        let mut rng = sampling::rng_from_seed(21);
        for _ in 0..10 {
            let target = random_simulated(&mut rng, &generators, &s).unwrap();
            let outcome = simulable(&target, &generators, &s).unwrap();
            let witness = outcome.witness().expect("simulated meters are simulable");
            assert_eq!(witness.reconstruct(&generators, &s).unwrap(), target);
        }
    }

    #[test]
    fn closure_axioms_hold_on_random_generators() {
        let s = gbit();
        let mut rng = sampling::rng_from_seed(5);
        let generators: Vec<Meter> = (0..3)
            .map(|_| sampling::random_meter(&mut rng, &s, 3).unwrap())
            .collect();
        let report = check_closure_axioms(&generators, 20, 42, &s).unwrap();
        assert_eq!(report.total_violations(), 0);
    }

    #[test]
    fn normalize_dichotomic_matches_the_formula() {
        // A₁ = (1/2, (1/4, 0)): λmax(A₁) = λmax(A₂) = 3/4, α = 1/2, and
        // A′₁ = 2·A₁ − u/2 = (1/2, (1/2, 0)).
        let s = gbit();
        let a = Meter::dichotomic(Effect::new(rat(1, 2), vec![rat(1, 4), int(0)]), &s).unwrap();
        let (sharp, recovery) = normalize_dichotomic(&a, &s).unwrap();
        assert_eq!(
            sharp.effect(0),
            &Effect::new(rat(1, 2), vec![rat(1, 2), int(0)])
        );
        assert_eq!(post_process(&recovery, &sharp, &s).unwrap(), a);
    }

    #[test]
    fn normalize_dichotomic_rejects_trivial_and_fixes_sharp() {
        let s = gbit();
        let t = Meter::trivial(vec![rat(1, 2), rat(1, 2)], 2).unwrap();
        assert!(matches!(
            normalize_dichotomic(&t, &s),
            Err(Error::Domain(_))
        ));

        let sharp = x_meter(&s);
        let (same, recovery) = normalize_dichotomic(&sharp, &s).unwrap();
        assert_eq!(same, sharp);
        assert_eq!(recovery, PostProcessing::identity(2));
    }
}
