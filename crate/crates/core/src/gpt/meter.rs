//! Meters: outcome-indexed effect families summing to the unit effect.

use std::collections::BTreeSet;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::numerics::rational::Rational;

use super::effect::Effect;
use super::space::StateSpace;

/// Largest outcome count for which subset-sum ranges are enumerated.
pub const DEFAULT_RANGE_CAP: usize = 20;

/// A meter: a finite family of valid effects with `Σ_x A_x = u`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Meter {
    effects: Vec<Effect>,
}

impl Meter {
    /// Builds a meter, checking normalization exactly and validity of every
    /// effect on `space`.
    pub fn new(effects: Vec<Effect>, space: &StateSpace) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::InvalidMeter("no outcomes".into()));
        }
        let dim = space.dim();
        for (x, e) in effects.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::InvalidMeter(format!(
                    "effect {x} has dimension {}, space has {dim}",
                    e.dim()
                )));
            }
            e.validate(space)
                .map_err(|err| Error::InvalidMeter(format!("outcome {x}: {err}")))?;
        }
        let total = effects
            .iter()
            .fold(Effect::zero(dim), |acc, e| acc.add(e));
        if !total.is_unit() {
            return Err(Error::InvalidMeter(
                "effects do not sum to the unit effect".into(),
            ));
        }
        Ok(Meter { effects })
    }

    /// The dichotomic meter `(e, u − e)`.
    pub fn dichotomic(e: Effect, space: &StateSpace) -> Result<Self> {
        let complement = e.complement();
        Meter::new(vec![e, complement], space)
    }

    /// The trivial meter `T_x = p_x·u`.
    pub fn trivial(probabilities: Vec<Rational>, dim: usize) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidMeter("no outcomes".into()));
        }
        if probabilities.iter().any(Signed::is_negative)
            || probabilities.iter().sum::<Rational>() != Rational::one()
        {
            return Err(Error::NotADistribution(
                "trivial meter weights must be a probability distribution".into(),
            ));
        }
        let effects = probabilities
            .into_iter()
            .map(|p| Effect::unit(dim).scale(&p))
            .collect();
        Ok(Meter { effects })
    }

    pub fn num_outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn effect(&self, x: usize) -> &Effect {
        &self.effects[x]
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    /// Outcome distribution at a state point.
    pub fn outcome_probabilities(&self, x: &[Rational]) -> Vec<Rational> {
        self.effects.iter().map(|e| e.evaluate_at(x)).collect()
    }

    /// True iff every effect is a multiple of `u`, i.e. the statistics are
    /// state independent.
    pub fn is_trivial(&self) -> bool {
        self.effects.iter().all(Effect::is_trivial)
    }

    /// The range `ran(A) = { Σ_{y∈Ω̃} A_y : Ω̃ ⊆ Ω }`: all subset sums,
    /// deduplicated. Always contains `o` and `u`.
    pub fn range(&self, cap: usize) -> Result<Vec<Effect>> {
        let n = self.effects.len();
        if n > cap {
            return Err(Error::ResourceLimit(format!(
                "range of a {n}-outcome meter exceeds the cap of {cap} outcomes"
            )));
        }
        let mut seen = BTreeSet::new();
        for mask in 0u64..(1u64 << n) {
            let mut sum = Effect::zero(self.dim());
            for (x, e) in self.effects.iter().enumerate() {
                if mask & (1 << x) != 0 {
                    sum = sum.add(e);
                }
            }
            seen.insert(sum);
        }
        Ok(seen.into_iter().collect())
    }

    /// Drops outcomes whose effect is exactly zero.
    pub fn without_zero_outcomes(&self) -> Meter {
        let kept: Vec<Effect> = self
            .effects
            .iter()
            .filter(|e| !e.is_zero())
            .cloned()
            .collect();
        if kept.is_empty() {
            // Σ = u forces at least one nonzero effect unless d < 0; keep
            // the original shape for safety.
            return self.clone();
        }
        Meter { effects: kept }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};

    fn gbit() -> StateSpace {
        StateSpace::square_gbit()
    }

    fn edge_effect() -> Effect {
        Effect::new(rat(1, 2), vec![rat(1, 2), int(0)])
    }

    #[test]
    fn normalization_is_enforced() {
        let s = gbit();
        let half = Effect::unit(2).scale(&rat(9, 10));
        let err = Meter::new(vec![half.clone(), half.complement().scale(&rat(1, 2))], &s);
        assert!(matches!(err, Err(Error::InvalidMeter(_))));
    }

    #[test]
    fn invalid_effect_is_rejected_with_outcome_index() {
        let s = gbit();
        let bad = Effect::new(rat(-1, 10), vec![int(0), int(0)]);
        let err = Meter::new(vec![bad.clone(), bad.complement()], &s).unwrap_err();
        assert!(err.to_string().contains("outcome 0"));
    }

    #[test]
    fn dichotomic_range() {
        let s = gbit();
        let a = Meter::dichotomic(edge_effect(), &s).unwrap();
        let range = a.range(DEFAULT_RANGE_CAP).unwrap();
        assert_eq!(range.len(), 4);
        assert!(range.contains(&Effect::zero(2)));
        assert!(range.contains(&Effect::unit(2)));
        assert!(range.contains(&edge_effect()));
        assert!(range.contains(&edge_effect().complement()));
    }

    #[test]
    fn trivial_meter_range_deduplicates() {
        let t = Meter::trivial(vec![rat(1, 2), rat(1, 2)], 2).unwrap();
        let range = t.range(DEFAULT_RANGE_CAP).unwrap();
        // {o, u/2, u}: the two singleton sums coincide.
        assert_eq!(range.len(), 3);
        assert!(t.is_trivial());
    }

    #[test]
    fn three_outcome_range_has_all_subset_sums() {
        let s = gbit();
        let e1 = Effect::new(rat(1, 4), vec![rat(1, 4), int(0)]);
        let e2 = Effect::new(rat(1, 4), vec![int(0), rat(1, 4)]);
        let e3 = Effect::unit(2).sub(&e1).sub(&e2);
        let a = Meter::new(vec![e1, e2, e3], &s).unwrap();
        assert_eq!(a.range(DEFAULT_RANGE_CAP).unwrap().len(), 8);
    }

    #[test]
    fn range_cap_is_a_resource_error() {
        let mut effects = vec![Effect::unit(2)];
        effects.extend(std::iter::repeat(Effect::zero(2)).take(20));
        let a = Meter::new(effects, &gbit()).unwrap();
        assert!(matches!(
            a.range(DEFAULT_RANGE_CAP),
            Err(Error::ResourceLimit(_))
        ));
        assert_eq!(a.without_zero_outcomes().num_outcomes(), 1);
    }

    #[test]
    fn nontrivial_meter_detected() {
        let s = gbit();
        let a = Meter::dichotomic(edge_effect(), &s).unwrap();
        assert!(!a.is_trivial());
    }
}
