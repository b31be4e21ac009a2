//! Seeded random generation of rationals, distributions and meters.
//!
//! Everything here is deterministic in the seed, so sampled checks and
//! classification runs are reproducible. Meter generation targets the
//! polytope backend, where validity can be repaired exactly.

use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gpt::{Effect, Meter, PolytopeSpace, StateSpace};
use crate::numerics::rational::{rat, Rational};

/// The RNG used for all seeded sampling in this crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform-ish rational in `[0, 1]` with denominator at most `max_den`.
pub fn random_unit_rational<R: Rng>(rng: &mut R, max_den: i64) -> Rational {
    let den = rng.gen_range(1..=max_den);
    let num = rng.gen_range(0..=den);
    rat(num, den)
}

/// Rational in `[−1, 1]`.
pub fn random_signed_rational<R: Rng>(rng: &mut R, max_den: i64) -> Rational {
    let den = rng.gen_range(1..=max_den);
    let num = rng.gen_range(-den..=den);
    rat(num, den)
}

/// A probability distribution over `n` outcomes with small denominators.
pub fn random_distribution<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    loop {
        let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=6)).collect();
        let total: i64 = weights.iter().sum();
        if total > 0 {
            return weights.into_iter().map(|w| rat(w, total)).collect();
        }
    }
}

/// A row-stochastic matrix with `rows` source and `cols` target outcomes.
pub fn random_stochastic_rows<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Vec<Vec<Rational>> {
    (0..rows).map(|_| random_distribution(rng, cols)).collect()
}

/// A valid random effect on a polytope space.
///
/// A raw affine functional is sampled, rescaled so its exact value range is
/// `[0, 1]`, then shrunk into a random subinterval. No rejection is needed.
pub fn random_effect<R: Rng>(rng: &mut R, space: &PolytopeSpace) -> Effect {
    let d = space.dim();
    let raw = Effect::new(
        random_unit_rational(rng, 6),
        (0..d).map(|_| random_signed_rational(rng, 6)).collect(),
    );
    let wrapped = StateSpace::Polytope(space.clone());
    let lo = raw
        .lambda_min(&wrapped)
        .as_rational()
        .expect("polytope extrema are rational")
        .clone();
    let hi = raw
        .lambda_max(&wrapped)
        .as_rational()
        .expect("polytope extrema are rational")
        .clone();
    if lo == hi {
        return Effect::unit(d).scale(&random_unit_rational(rng, 6));
    }
    let span = &hi - &lo;
    let normalized = raw
        .sub(&Effect::unit(d).scale(&lo))
        .scale(&(Rational::one() / span));
    let alpha = random_unit_rational(rng, 4);
    let beta = random_unit_rational(rng, 4) * (Rational::one() - &alpha);
    Effect::unit(d).scale(&alpha).add(&normalized.scale(&beta))
}

/// A valid random dichotomic meter on a polytope space.
pub fn random_dichotomic_meter<R: Rng>(rng: &mut R, space: &StateSpace) -> Result<Meter> {
    let poly = space.require_polytope()?;
    Meter::dichotomic(random_effect(rng, poly), space)
}

/// A valid random meter with `outcomes` outcomes on a polytope space.
///
/// The first `outcomes − 1` effects are sampled and scaled until the sum
/// stays below the unit effect; the last outcome absorbs the remainder.
pub fn random_meter<R: Rng>(rng: &mut R, space: &StateSpace, outcomes: usize) -> Result<Meter> {
    if outcomes == 0 {
        return Err(Error::InvalidMeter("no outcomes".into()));
    }
    let poly = space.require_polytope()?;
    let d = poly.dim();
    if outcomes == 1 {
        return Meter::new(vec![Effect::unit(d)], space);
    }
    let mut effects: Vec<Effect> = (0..outcomes - 1)
        .map(|_| random_effect(rng, poly))
        .collect();
    let mut sum = effects
        .iter()
        .fold(Effect::zero(d), |acc, e| acc.add(e));
    let max = sum.lambda_max(space);
    if max.cmp_rational(&Rational::one()) == std::cmp::Ordering::Greater {
        let max = max.as_rational().expect("polytope extrema are rational");
        let shrink = random_unit_rational(rng, 4) / max;
        for e in &mut effects {
            *e = e.scale(&shrink);
        }
        sum = sum.scale(&shrink);
    }
    effects.push(Effect::unit(d).sub(&sum));
    Meter::new(effects, space)
}

/// A random point of the polytope: a random convex combination of vertices.
pub fn random_state<R: Rng>(rng: &mut R, space: &PolytopeSpace) -> Vec<Rational> {
    let weights = random_distribution(rng, space.vertices().len());
    let d = space.dim();
    let mut point = vec![Rational::from_integer(0.into()); d];
    for (w, v) in weights.iter().zip(space.vertices()) {
        for (pc, vc) in point.iter_mut().zip(v) {
            *pc += w * vc;
        }
    }
    point
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn distributions_sum_to_one() {
        let mut rng = rng_from_seed(3);
        for n in 1..6 {
            let p = random_distribution(&mut rng, n);
            assert_eq!(p.iter().sum::<Rational>(), Rational::one());
            assert!(p.iter().all(|x| !x.is_negative()));
        }
    }

    #[test]
    fn sampled_effects_and_meters_are_valid() {
        let space = StateSpace::square_gbit();
        let poly = space.require_polytope().unwrap();
        let mut rng = rng_from_seed(11);
        for _ in 0..50 {
            let e = random_effect(&mut rng, poly);
            assert!(e.is_valid(&space));
        }
        for outcomes in 1..5 {
            let m = random_meter(&mut rng, &space, outcomes).unwrap();
            assert_eq!(m.num_outcomes(), outcomes);
        }
    }

    #[test]
    fn sampling_is_deterministic_in_the_seed() {
        let space = StateSpace::square_gbit();
        let a = random_meter(&mut rng_from_seed(5), &space, 3).unwrap();
        let b = random_meter(&mut rng_from_seed(5), &space, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_states_lie_in_the_space() {
        let space = StateSpace::square_gbit();
        let poly = space.require_polytope().unwrap();
        let mut rng = rng_from_seed(9);
        for _ in 0..20 {
            assert!(poly.contains(&random_state(&mut rng, poly)));
        }
    }
}
