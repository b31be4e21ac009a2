//! Classification of meter restrictions into the three operational classes.

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::gpt::{Effect, Meter, StateSpace};
use crate::numerics::matrix::Matrix;
use crate::numerics::rational::Rational;
use crate::sampling;
use crate::simulation::simulable;

use super::{
    build_r3_witness, effect_restriction_validate, effect_space_vertices,
    effects_of_restriction, EffectRestriction, MeterRestriction, DEFAULT_DIM_CAP,
};

/// Verdict of the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestrictionLabel {
    /// Induced by an effect restriction.
    R1,
    /// All effects reachable, yet some meter is missing.
    R2,
    /// Effects restricted, but not induced by any effect restriction.
    R3,
    /// The restriction is all of `M`.
    NoRestriction,
    /// The available criteria could not separate the remaining cases.
    Unknown,
}

/// Machine-checkable material backing a label.
#[derive(Debug, Clone)]
pub enum ClassificationWitness {
    /// An extreme effect of `E(S)` outside the induced effect set: rules
    /// out R2.
    EffectOutsideInduced(Effect),
    /// A meter whose range lies inside the induced effect set but which is
    /// not a member: rules out R1.
    MeterOutsideRestriction(Meter),
    /// A meter outside the restriction (used when all effects are
    /// reachable): rules out no-restriction.
    MeterOutsideFullEffects(Meter),
    /// The single generator has linearly independent effects of this count.
    LinearlyIndependentEffects { rank: usize },
}

/// Classifier output. The seed and budget are recorded so runs are
/// reproducible.
#[derive(Debug, Clone)]
pub struct ClassificationResult {
    pub label: RestrictionLabel,
    pub witnesses: Vec<ClassificationWitness>,
    pub trail: Vec<String>,
    pub seed: u64,
    pub budget: usize,
}

/// Options for [`classify`].
#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub seed: u64,
    /// Number of sampled meters per search phase.
    pub budget: usize,
    pub dim_cap: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            seed: 0,
            budget: 40,
            dim_cap: DEFAULT_DIM_CAP,
        }
    }
}

/// Sorts a meter restriction into R1/R2/R3 where the available criteria
/// permit, recording witnesses; `Unknown` is emitted rather than an
/// uncertified label.
pub fn classify(
    restriction: &MeterRestriction,
    space: &StateSpace,
    options: &ClassifyOptions,
) -> Result<ClassificationResult> {
    let mut result = ClassificationResult {
        label: RestrictionLabel::Unknown,
        witnesses: Vec::new(),
        trail: Vec::new(),
        seed: options.seed,
        budget: options.budget,
    };

    match restriction {
        MeterRestriction::NoiseFamily { t } => classify_noise(t, space, options, &mut result)?,
        MeterRestriction::InducedByEffects { effects } => {
            classify_induced(effects, space, options, &mut result)?
        }
        MeterRestriction::GeneratedBySimulation { generators } => {
            classify_simulation(generators, space, options, &mut result)?
        }
    }
    Ok(result)
}

fn classify_noise(
    t: &Rational,
    space: &StateSpace,
    options: &ClassifyOptions,
    result: &mut ClassificationResult,
) -> Result<()> {
    if t.is_one() {
        result.label = RestrictionLabel::NoRestriction;
        result
            .trail
            .push("t = 1: every meter carries zero mandatory noise".into());
        return Ok(());
    }
    if t.is_zero() {
        result.label = RestrictionLabel::R1;
        result.trail.push(
            "t = 0: only trivial meters remain, which are exactly the meters with range \
             inside span{u} ∩ E"
                .into(),
        );
        return Ok(());
    }
    // 0 < t < 1: an extreme effect leaves the induced set, ruling out R2,
    // and the constructive witness meter rules out R1.
    let e_rt = effects_of_restriction(
        &MeterRestriction::NoiseFamily { t: t.clone() },
        space,
        options.dim_cap,
    )?;
    let extremes = effect_space_vertices(space, options.dim_cap)?;
    let escaped = extremes
        .iter()
        .find(|g| !e_rt.contains(g))
        .cloned()
        .ok_or_else(|| Error::Domain("noise family with t < 1 must shrink the effects".into()))?;
    result
        .witnesses
        .push(ClassificationWitness::EffectOutsideInduced(escaped));
    result
        .trail
        .push(format!("t = {t}: the induced effect set is a proper subset"));

    let qualifying = extremes.iter().find(|g| {
        !g.is_zero()
            && g.lambda_max(space).cmp_rational(&Rational::one()) == std::cmp::Ordering::Equal
            && crate::gpt::is_indecomposable(g, space).unwrap_or(false)
    });
    let e = qualifying.ok_or_else(|| {
        Error::Domain("no extreme indecomposable effect with λmax = 1 found".into())
    })?;
    let witness = build_r3_witness(t, e, space)?;
    for effect in witness.meter.effects() {
        if !e_rt.contains(effect) {
            return Err(Error::Domain(
                "witness effect escaped the induced effect set".into(),
            ));
        }
    }
    result.trail.push(format!(
        "constructed witness meter with noise content (1−t)·r = {} below 1−t",
        (Rational::one() - t) * &witness.r
    ));
    result
        .witnesses
        .push(ClassificationWitness::MeterOutsideRestriction(witness.meter));
    result.label = RestrictionLabel::R3;
    Ok(())
}

fn classify_induced(
    effects: &EffectRestriction,
    space: &StateSpace,
    options: &ClassifyOptions,
    result: &mut ClassificationResult,
) -> Result<()> {
    let validation = effect_restriction_validate(effects, space);
    if !validation.is_valid() {
        result.label = RestrictionLabel::Unknown;
        result.trail.push(
            "effect restriction fails the consistency conditions; classification \
             applies only to valid restrictions"
                .into(),
        );
        return Ok(());
    }
    let extremes = effect_space_vertices(space, options.dim_cap)?;
    match extremes.iter().find(|g| !effects.contains(g)) {
        None => {
            result.label = RestrictionLabel::NoRestriction;
            result
                .trail
                .push("the hull contains every extreme effect, so all meters are allowed".into());
        }
        Some(escaped) => {
            result
                .witnesses
                .push(ClassificationWitness::EffectOutsideInduced(escaped.clone()));
            result.label = RestrictionLabel::R1;
            result.trail.push(
                "a convex effect restriction induces a simulation-closed meter restriction"
                    .into(),
            );
        }
    }
    Ok(())
}

fn classify_simulation(
    generators: &[Meter],
    space: &StateSpace,
    options: &ClassifyOptions,
    result: &mut ClassificationResult,
) -> Result<()> {
    if generators.is_empty() {
        return Err(Error::Domain("no generator meters".into()));
    }
    let restriction = MeterRestriction::GeneratedBySimulation {
        generators: generators.to_vec(),
    };
    let e_r = effects_of_restriction(&restriction, space, options.dim_cap)?;
    let extremes = effect_space_vertices(space, options.dim_cap)?;
    let escaped = extremes.iter().find(|g| !e_r.contains(g));
    let mut rng = sampling::rng_from_seed(options.seed);

    match escaped {
        None => {
            // All effects reachable: R2 as soon as some meter is missing.
            result
                .trail
                .push("every extreme effect is reachable from the generators".into());
            for round in 0..options.budget {
                let outcomes = 2 + (round % 3);
                let candidate = sampling::random_meter(&mut rng, space, outcomes)?;
                if !simulable(&candidate, generators, space)?.is_simulable() {
                    result.trail.push(format!(
                        "sample {round} is not simulable from the generators"
                    ));
                    result
                        .witnesses
                        .push(ClassificationWitness::MeterOutsideFullEffects(candidate));
                    result.label = RestrictionLabel::R2;
                    return Ok(());
                }
            }
            result.label = RestrictionLabel::Unknown;
            result.trail.push(format!(
                "no non-member found within budget {}; the restriction is R2 or no \
                 restriction at all",
                options.budget
            ));
        }
        Some(escaped) => {
            result
                .witnesses
                .push(ClassificationWitness::EffectOutsideInduced(escaped.clone()));
            result
                .trail
                .push("some extreme effect is unreachable, ruling out R2".into());
            // Single generator with linearly independent effects: the
            // closure is exactly the meters with range inside the induced
            // effects, a restriction of type R1.
            if generators.len() == 1 {
                let meter = &generators[0];
                let rows: Vec<Vec<Rational>> =
                    meter.effects().iter().map(Effect::coords).collect();
                let rank = Matrix::from_rows(rows)?.rank();
                if rank == meter.num_outcomes() {
                    result
                        .witnesses
                        .push(ClassificationWitness::LinearlyIndependentEffects { rank });
                    result.trail.push(
                        "single generator with linearly independent effects: its closure \
                         is induced by its reachable effects"
                            .into(),
                    );
                    result.label = RestrictionLabel::R1;
                    return Ok(());
                }
            }
            // Search for a meter in M_{E_R} \ R: dichotomies over hull
            // points are always in M_{E_R} because the reachable set of a
            // simulation closure is complement closed.
            for _ in 0..options.budget {
                let f = random_hull_effect(&mut rng, &e_r);
                if f.is_zero() || f.is_unit() {
                    continue;
                }
                let candidate = Meter::dichotomic(f, space)?;
                if !simulable(&candidate, generators, space)?.is_simulable() {
                    result
                        .witnesses
                        .push(ClassificationWitness::MeterOutsideRestriction(candidate));
                    result.trail.push(
                        "found a dichotomic meter over the reachable effects that the \
                         generators cannot simulate"
                            .into(),
                    );
                    result.label = RestrictionLabel::R3;
                    return Ok(());
                }
            }
            result.label = RestrictionLabel::Unknown;
            result.trail.push(format!(
                "no meter in M_E \\ R found within budget {}; R1 cannot be certified for \
                 dependent generators",
                options.budget
            ));
        }
    }
    Ok(())
}

/// A random convex combination of hull generators.
fn random_hull_effect<R: Rng>(rng: &mut R, hull: &EffectRestriction) -> Effect {
    let weights = sampling::random_distribution(rng, hull.generators().len());
    let d = hull.dim();
    hull.generators()
        .iter()
        .zip(&weights)
        .fold(Effect::zero(d), |acc, (g, w)| acc.add(&g.scale(w)))
}

/// Tomographic completeness: the effects available in the restriction span
/// the full dual space, so they separate any two distinct states.
pub fn tomographic_completeness(
    restriction: &MeterRestriction,
    space: &StateSpace,
    dim_cap: usize,
) -> Result<bool> {
    let effects: Vec<Effect> = match restriction {
        MeterRestriction::GeneratedBySimulation { generators } => generators
            .iter()
            .flat_map(|m| m.effects().iter().cloned())
            .collect(),
        MeterRestriction::InducedByEffects { effects } => effects.generators().to_vec(),
        MeterRestriction::NoiseFamily { t } => {
            effects_of_restriction(&MeterRestriction::NoiseFamily { t: t.clone() }, space, dim_cap)?
                .generators()
                .to_vec()
        }
    };
    if effects.is_empty() {
        return Ok(false);
    }
    let rows: Vec<Vec<Rational>> = effects.iter().map(Effect::coords).collect();
    Ok(Matrix::from_rows(rows)?.rank() == space.dim() + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};

    fn gbit() -> StateSpace {
        StateSpace::square_gbit()
    }

    fn edge_meters(space: &StateSpace) -> Vec<Meter> {
        [
            Effect::new(rat(1, 2), vec![rat(1, 2), int(0)]),
            Effect::new(rat(1, 2), vec![rat(-1, 2), int(0)]),
            Effect::new(rat(1, 2), vec![int(0), rat(1, 2)]),
            Effect::new(rat(1, 2), vec![int(0), rat(-1, 2)]),
        ]
        .into_iter()
        .map(|e| Meter::dichotomic(e, space).unwrap())
        .collect()
    }

    /// A 3-outcome gbit meter with linearly independent effects.
    fn independent_meter(space: &StateSpace) -> Meter {
        let e1 = Effect::new(rat(1, 4), vec![rat(1, 4), int(0)]);
        let e2 = Effect::new(rat(1, 4), vec![int(0), rat(1, 4)]);
        let e3 = Effect::unit(2).sub(&e1).sub(&e2);
        Meter::new(vec![e1, e2, e3], space).unwrap()
    }

    #[test]
    fn single_independent_generator_is_r1() {
        let s = gbit();
        let r = MeterRestriction::GeneratedBySimulation {
            generators: vec![independent_meter(&s)],
        };
        let result = classify(&r, &s, &ClassifyOptions::default()).unwrap();
        assert_eq!(result.label, RestrictionLabel::R1);
        assert!(result
            .witnesses
            .iter()
            .any(|w| matches!(w, ClassificationWitness::LinearlyIndependentEffects { rank: 3 })));
    }

    #[test]
    fn noise_family_is_r3_between_the_ends() {
        let s = gbit();
        let result = classify(
            &MeterRestriction::NoiseFamily { t: rat(1, 2) },
            &s,
            &ClassifyOptions::default(),
        )
        .unwrap();
        assert_eq!(result.label, RestrictionLabel::R3);
        assert!(result
            .witnesses
            .iter()
            .any(|w| matches!(w, ClassificationWitness::EffectOutsideInduced(_))));
        assert!(result
            .witnesses
            .iter()
            .any(|w| matches!(w, ClassificationWitness::MeterOutsideRestriction(_))));
    }

    #[test]
    fn noise_family_ends_are_certified() {
        let s = gbit();
        let at_one = classify(
            &MeterRestriction::NoiseFamily { t: int(1) },
            &s,
            &ClassifyOptions::default(),
        )
        .unwrap();
        assert_eq!(at_one.label, RestrictionLabel::NoRestriction);
        let at_zero = classify(
            &MeterRestriction::NoiseFamily { t: int(0) },
            &s,
            &ClassifyOptions::default(),
        )
        .unwrap();
        assert_eq!(at_zero.label, RestrictionLabel::R1);
    }

    #[test]
    fn induced_restrictions_classify_directly() {
        let s = gbit();
        let e = Effect::new(rat(1, 2), vec![rat(1, 2), int(0)]);
        let proper = MeterRestriction::InducedByEffects {
            effects: EffectRestriction::new(vec![
                Effect::zero(2),
                Effect::unit(2),
                e.clone(),
                e.complement(),
            ])
            .unwrap(),
        };
        let result = classify(&proper, &s, &ClassifyOptions::default()).unwrap();
        assert_eq!(result.label, RestrictionLabel::R1);

        let full = MeterRestriction::InducedByEffects {
            effects: EffectRestriction::new(
                super::super::effect_space_vertices(&s, DEFAULT_DIM_CAP).unwrap(),
            )
            .unwrap(),
        };
        let result = classify(&full, &s, &ClassifyOptions::default()).unwrap();
        assert_eq!(result.label, RestrictionLabel::NoRestriction);
    }

    #[test]
    fn dichotomic_closure_classification_is_stable() {
        // The four sharp edge meters reach every effect; whether a
        // non-simulable meter exists is probed by sampling, so the result
        // is either R2 with a witness or an explicit unknown.
        let s = gbit();
        let r = MeterRestriction::GeneratedBySimulation {
            generators: edge_meters(&s),
        };
        let options = ClassifyOptions {
            seed: 7,
            budget: 12,
            dim_cap: DEFAULT_DIM_CAP,
        };
        let first = classify(&r, &s, &options).unwrap();
        let second = classify(&r, &s, &options).unwrap();
        assert_eq!(first.label, second.label);
        match first.label {
            RestrictionLabel::R2 => assert!(first
                .witnesses
                .iter()
                .any(|w| matches!(w, ClassificationWitness::MeterOutsideFullEffects(_)))),
            RestrictionLabel::Unknown => assert!(!first.trail.is_empty()),
            other => panic!("unexpected label {other:?}"),
        }
    }

    #[test]
    fn tomographic_completeness_examples() {
        let s = gbit();
        // An informationally complete meter spans the dual space.
        let complete = MeterRestriction::GeneratedBySimulation {
            generators: vec![independent_meter(&s)],
        };
        assert!(tomographic_completeness(&complete, &s, DEFAULT_DIM_CAP).unwrap());

        // One dichotomic meter spans only two dimensions.
        let partial = MeterRestriction::GeneratedBySimulation {
            generators: vec![edge_meters(&s)[0].clone()],
        };
        assert!(!tomographic_completeness(&partial, &s, DEFAULT_DIM_CAP).unwrap());

        // Trivial meters span only the unit direction.
        let trivial = MeterRestriction::GeneratedBySimulation {
            generators: vec![Meter::trivial(vec![rat(1, 2), rat(1, 2)], 2).unwrap()],
        };
        assert!(!tomographic_completeness(&trivial, &s, DEFAULT_DIM_CAP).unwrap());

        // The noise family keeps full rank for t > 0 and collapses at 0.
        assert!(tomographic_completeness(
            &MeterRestriction::NoiseFamily { t: rat(1, 2) },
            &s,
            DEFAULT_DIM_CAP
        )
        .unwrap());
        assert!(!tomographic_completeness(
            &MeterRestriction::NoiseFamily { t: int(0) },
            &s,
            DEFAULT_DIM_CAP
        )
        .unwrap());
    }
}
