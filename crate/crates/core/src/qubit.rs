//! Bloch-ball analytics: unambiguous discrimination of two pure qubit
//! states, depolarizing effect maps and the sharp-meter commutation test.
//!
//! Pure states are rational unit Bloch vectors; the squared overlap of two
//! states is `(1 + n·m)/2`. The unambiguous-discrimination meter has
//! effects `A₁ = q₁(u − P₂)`, `A₂ = q₂(u − P₁)` and an inconclusive
//! remainder, with equal prior probabilities on the two states.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gpt::{Effect, Meter, PolytopeSpace, StateSpace};
use crate::numerics::radical::ExtremeValue;
use crate::numerics::rational::{dot, norm_sq, rat, Rational};
use crate::simulation::{NTomicCertificate, NTomicEvidence, NTomicVerdict};

/// A pure qubit state as a rational unit Bloch vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureQubitState {
    bloch: Vec<Rational>,
}

impl PureQubitState {
    pub fn new(bloch: Vec<Rational>) -> Result<Self> {
        if bloch.len() != 3 {
            return Err(Error::DimensionMismatch(
                "Bloch vector needs three components".into(),
            ));
        }
        if norm_sq(&bloch) != Rational::one() {
            return Err(Error::NotRepresentable(
                "Bloch vector must have squared norm exactly one".into(),
            ));
        }
        Ok(PureQubitState { bloch })
    }

    pub fn bloch(&self) -> &[Rational] {
        &self.bloch
    }

    /// Squared overlap `|⟨ψ₁|ψ₂⟩|² = (1 + n·m)/2`.
    pub fn overlap_sq(&self, other: &PureQubitState) -> Rational {
        (Rational::one() + dot(&self.bloch, &other.bloch)) / rat(2, 1)
    }

    /// The rank-one effect `(1/2, n/2)` projecting onto this state.
    pub fn projector(&self) -> Effect {
        Effect::new(
            rat(1, 2),
            self.bloch.iter().map(|x| x / rat(2, 1)).collect(),
        )
    }
}

/// The three-outcome unambiguous-discrimination meter for two pure states.
#[derive(Debug, Clone)]
pub struct UdMeter {
    q1: Rational,
    q2: Rational,
    state1: PureQubitState,
    state2: PureQubitState,
    meter: Meter,
}

impl UdMeter {
    /// Builds `A₁ = q₁(u − P₂)`, `A₂ = q₂(u − P₁)`, `A_? = u − A₁ − A₂`,
    /// checking that the inconclusive effect stays valid and that the
    /// cross errors vanish exactly.
    pub fn new(
        q1: Rational,
        q2: Rational,
        state1: PureQubitState,
        state2: PureQubitState,
    ) -> Result<Self> {
        if !q1.is_positive() || !q2.is_positive() {
            return Err(Error::Domain("q₁ and q₂ must be positive".into()));
        }
        let space = StateSpace::bloch_ball();
        let unit = Effect::unit(3);
        let a1 = unit.sub(&state2.projector()).scale(&q1);
        let a2 = unit.sub(&state1.projector()).scale(&q2);
        let rest = unit.sub(&a1).sub(&a2);
        rest.validate(&space).map_err(|_| {
            Error::InvalidEffect(format!(
                "the inconclusive effect is not valid for q₁ = {q1}, q₂ = {q2}"
            ))
        })?;
        debug_assert!(a1.evaluate_at(state2.bloch()).is_zero());
        debug_assert!(a2.evaluate_at(state1.bloch()).is_zero());
        let meter = Meter::new(vec![a1, a2, rest], &space)?;
        Ok(UdMeter {
            q1,
            q2,
            state1,
            state2,
            meter,
        })
    }

    pub fn meter(&self) -> &Meter {
        &self.meter
    }

    pub fn q1(&self) -> &Rational {
        &self.q1
    }

    pub fn q2(&self) -> &Rational {
        &self.q2
    }

    pub fn states(&self) -> (&PureQubitState, &PureQubitState) {
        (&self.state1, &self.state2)
    }

    /// Success probability at equal priors:
    /// `((q₁+q₂)/2)·(1 − |⟨ψ₁|ψ₂⟩|²)`.
    pub fn success_probability(&self) -> Rational {
        ud_success(&self.q1, &self.q2, &self.state1.overlap_sq(&self.state2))
    }
}

/// The success formula in terms of the squared overlap.
pub fn ud_success(q1: &Rational, q2: &Rational, overlap_sq: &Rational) -> Rational {
    (q1 + q2) / rat(2, 1) * (Rational::one() - overlap_sq)
}

/// Best success probability reachable with effectively dichotomic meters:
/// `(1 − |⟨ψ₁|ψ₂⟩|²)/2`.
pub fn ud_dichotomic_bound(overlap_sq: &Rational) -> Rational {
    (Rational::one() - overlap_sq) / rat(2, 1)
}

/// Optimal success probability without restrictions: `1 − |⟨ψ₁|ψ₂⟩|`.
pub fn ud_unrestricted_optimum(overlap_sq: &Rational) -> Result<ExtremeValue> {
    Ok(ExtremeValue::surd(
        Rational::one(),
        -Rational::one(),
        overlap_sq.clone(),
    )?)
}

/// Optional constraint for the success maximization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UdConstraint {
    /// Only validity of the meter.
    None,
    /// Additionally `q₁ + q₂ ≤ 1` (effectively dichotomic regime).
    DichotomicSum,
}

/// Result of maximizing the success probability over valid `(q₁, q₂)`.
#[derive(Debug, Clone)]
pub struct UdOptimum {
    pub q1: Rational,
    pub q2: Rational,
    pub success: Rational,
    /// Scaling the optimizer up by 1/1024 leaves the feasible region, so
    /// the reported point sits on the constraint boundary.
    pub boundary_certified: bool,
}

/// Whether `(q₁, q₂)` yields a valid meter for squared overlap `w`,
/// optionally inside the simplex `q₁ + q₂ ≤ 1`.
///
/// Validity reduces to `q_i ∈ (0, 1]` and the inconclusive effect bound
/// `(1 − (q₁+q₂)/2)² ≥ (q₁² + q₂² + 2q₁q₂(2w−1))/4` with a nonnegative
/// left base.
fn ud_feasible(q1: &Rational, q2: &Rational, overlap_sq: &Rational, constraint: UdConstraint) -> bool {
    let one = Rational::one();
    if !q1.is_positive() || !q2.is_positive() || q1 > &one || q2 > &one {
        return false;
    }
    if constraint == UdConstraint::DichotomicSum && &(q1 + q2) > &one {
        return false;
    }
    let c = &one - (q1 + q2) / rat(2, 1);
    if c.is_negative() {
        return false;
    }
    let gamma = rat(2, 1) * overlap_sq - &one;
    let vv = (q1 * q1 + q2 * q2 + rat(2, 1) * q1 * q2 * gamma) / rat(4, 1);
    &c * &c >= vv
}

/// Maximizes the success probability over the valid region by a rational
/// grid search refined by shrinking local grids, then certifies the
/// optimum against the constraint boundary.
pub fn ud_max_valid_q(overlap_sq: &Rational, constraint: UdConstraint) -> Result<UdOptimum> {
    if overlap_sq.is_negative() || overlap_sq > &Rational::one() {
        return Err(Error::Domain("squared overlap must lie in [0, 1]".into()));
    }
    let feasible = |q1: &Rational, q2: &Rational| ud_feasible(q1, q2, overlap_sq, constraint);
    let success = |q1: &Rational, q2: &Rational| ud_success(q1, q2, overlap_sq);

    // Candidates are ranked by success, with ties broken toward the
    // symmetric axis q₁ = q₂: at fixed q₁ + q₂ the validity margin of the
    // inconclusive effect is widest there, so symmetric incumbents never
    // wedge the refinement against the curved boundary.
    struct Incumbent {
        q1: Rational,
        q2: Rational,
        success: Rational,
        skew: Rational,
    }
    let skew_of = |q1: &Rational, q2: &Rational| {
        let diff = q1 - q2;
        if diff.is_negative() {
            -diff
        } else {
            diff
        }
    };
    let mut best: Option<Incumbent> = None;
    let consider = |q1: Rational, q2: Rational, best: &mut Option<Incumbent>| {
        if !feasible(&q1, &q2) {
            return;
        }
        let s = success(&q1, &q2);
        let skew = skew_of(&q1, &q2);
        let better = match best {
            None => true,
            Some(b) => s > b.success || (s == b.success && skew < b.skew),
        };
        if better {
            *best = Some(Incumbent {
                q1,
                q2,
                success: s,
                skew,
            });
        }
    };

    // Coarse grid over (0, 1]², plus the closed simplex edge q₁ + q₂ = 1
    // so the constrained optimum is hit exactly.
    let steps = 24i64;
    for i in 1..=steps {
        for j in 1..=steps {
            consider(rat(i, steps), rat(j, steps), &mut best);
        }
        let edge = rat(i, steps);
        consider(edge.clone(), Rational::one() - &edge, &mut best);
    }
    let mut incumbent = best.ok_or_else(|| {
        Error::Domain("no feasible point found on the search grid".into())
    })?;

    // Local refinement: shrink the search radius geometrically around the
    // incumbent until it is below 10⁻⁸.
    let mut radius = Rational::one() / rat(steps, 1);
    let tolerance = rat(1, 100_000_000);
    while radius > tolerance {
        radius = radius / rat(4, 1);
        let local = 4i64;
        let (q1, q2) = (incumbent.q1.clone(), incumbent.q2.clone());
        let mut candidate = Some(incumbent);
        for di in -local..=local {
            for dj in -local..=local {
                let c1 = &q1 + rat(di, 1) * &radius;
                let c2 = &q2 + rat(dj, 1) * &radius;
                consider(c1, c2, &mut candidate);
            }
        }
        // Snap onto the simplex edge when it is within reach.
        let slack = Rational::one() - (&q1 + &q2);
        if slack.is_positive() && slack <= rat(2, 1) * &radius {
            let c1 = &q1 + &slack / rat(2, 1);
            let c2 = &q2 + &slack / rat(2, 1);
            consider(c1, c2, &mut candidate);
        }
        incumbent = candidate.expect("incumbent stays feasible");
    }
    let (q1, q2, s) = (incumbent.q1, incumbent.q2, incumbent.success);

    let bump = Rational::one() + rat(1, 1024);
    let boundary_certified = !feasible(&(&q1 * &bump), &(&q2 * &bump));
    Ok(UdOptimum {
        q1,
        q2,
        success: s,
        boundary_certified,
    })
}

/// Applies the not-effectively-dichotomic criterion to the two conclusive
/// effects of an unambiguous-discrimination meter.
///
/// `A₁` and `A₂` are rank-one (hence indecomposable); for non-orthogonal,
/// distinct states they are non-proportional and no positive combination
/// completes the unit, so `q₁ + q₂ > 1` certifies the verdict. When the
/// hypotheses or the sum condition fail the criterion is silent.
pub fn ud_not_2tomic_certificate(ud: &UdMeter) -> Result<NTomicCertificate> {
    let space = StateSpace::bloch_ball();
    let a1 = ud.meter().effect(0);
    let a2 = ud.meter().effect(1);
    let hypotheses = crate::gpt::is_indecomposable(a1, &space)?
        && crate::gpt::is_indecomposable(a2, &space)?
        && !crate::simulation::proportional_effects(a1, a2)
        && !crate::simulation::pair_completes_unit(a1, a2)?;
    let sum = a1.lambda_max(&space).add(&a2.lambda_max(&space));
    if hypotheses && sum.cmp_rational(&Rational::one()) == Ordering::Greater {
        let certificate = NTomicCertificate {
            n: 2,
            verdict: NTomicVerdict::CertifiedNotNTomic,
            evidence: NTomicEvidence::IndecomposableFamily {
                outcomes: vec![0, 1],
                sum,
            },
        };
        debug_assert!(certificate.verify(ud.meter(), &space));
        return Ok(certificate);
    }
    Ok(NTomicCertificate {
        n: 2,
        verdict: NTomicVerdict::Undecided,
        evidence: NTomicEvidence::None,
    })
}

/// Dual of the depolarizing channel on effects: `(c, v) ↦ (c, t·v)`.
pub fn depolarize_effect(e: &Effect, t: &Rational) -> Effect {
    Effect::new(
        e.constant().clone(),
        e.linear().iter().map(|x| x * t).collect(),
    )
}

/// Dual of the shifted depolarizing channel with shift state `ξ`:
/// `(c, v) ↦ (t·c + (1−t)·e(ξ), t·v)`.
pub fn shifted_depolarize_effect(e: &Effect, t: &Rational, xi: &[Rational]) -> Effect {
    let value_at_shift = e.evaluate_at(xi);
    Effect::new(
        t * e.constant() + (Rational::one() - t) * value_at_shift,
        e.linear().iter().map(|x| x * t).collect(),
    )
}

/// Commutation of two sharp qubit effects: the Bloch linear parts must be
/// parallel or one of them zero.
pub fn commutes_sharp(e: &Effect, f: &Effect) -> bool {
    crate::numerics::matrix::Matrix::from_rows(vec![e.linear().to_vec(), f.linear().to_vec()])
        .map(|m| m.rank() <= 1)
        .unwrap_or(false)
}

/// A 20-vertex polytope with rational vertices on the unit sphere,
/// inscribed in the Bloch ball. Vertices come from the rational
/// parametrization `(2p, 2q, p² + q² − 1)/(p² + q² + 1)` plus the north
/// pole.
pub fn inscribed_bloch_polytope() -> PolytopeSpace {
    let params: [(i64, i64, i64); 19] = [
        // (p_num, q_num, shared denominator)
        (0, 0, 1),
        (1, 0, 1),
        (-1, 0, 1),
        (0, 1, 1),
        (0, -1, 1),
        (1, 1, 1),
        (-1, 1, 1),
        (1, -1, 1),
        (-1, -1, 1),
        (1, 0, 2),
        (-1, 0, 2),
        (0, 1, 2),
        (0, -1, 2),
        (2, 0, 1),
        (-2, 0, 1),
        (0, 2, 1),
        (0, -2, 1),
        (1, 1, 2),
        (2, 2, 1),
    ];
    let mut vertices: Vec<Vec<Rational>> = params
        .iter()
        .map(|&(pn, qn, den)| {
            let p = rat(pn, den);
            let q = rat(qn, den);
            let norm = &p * &p + &q * &q + Rational::one();
            vec![
                rat(2, 1) * &p / &norm,
                rat(2, 1) * &q / &norm,
                (&p * &p + &q * &q - Rational::one()) / &norm,
            ]
        })
        .collect();
    vertices.push(vec![Rational::zero(), Rational::zero(), Rational::one()]);
    PolytopeSpace::new(vertices).expect("inscribed sphere points form a valid polytope")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::int;

    fn z_state() -> PureQubitState {
        PureQubitState::new(vec![int(0), int(0), int(1)]).unwrap()
    }

    fn x_state() -> PureQubitState {
        PureQubitState::new(vec![int(1), int(0), int(0)]).unwrap()
    }

    #[test]
    fn state_constructor_enforces_unit_norm() {
        assert!(PureQubitState::new(vec![rat(3, 5), rat(4, 5), int(0)]).is_ok());
        assert!(PureQubitState::new(vec![rat(1, 2), int(0), int(0)]).is_err());
    }

    #[test]
    fn overlap_of_orthogonal_bloch_axes_is_half() {
        assert_eq!(z_state().overlap_sq(&x_state()), rat(1, 2));
        assert_eq!(z_state().overlap_sq(&z_state()), int(1));
        let minus_z = PureQubitState::new(vec![int(0), int(0), int(-1)]).unwrap();
        assert_eq!(z_state().overlap_sq(&minus_z), int(0));
    }

    #[test]
    fn ud_meter_zero_cross_errors_and_success() {
        let ud = UdMeter::new(rat(1, 2), rat(1, 2), z_state(), x_state()).unwrap();
        let a1 = ud.meter().effect(0);
        let a2 = ud.meter().effect(1);
        assert_eq!(a1.evaluate_at(x_state().bloch()), int(0));
        assert_eq!(a2.evaluate_at(z_state().bloch()), int(0));
        // ((1/2 + 1/2)/2)·(1 − 1/2) = 1/4, saturating the bound.
        assert_eq!(ud.success_probability(), rat(1, 4));
        assert_eq!(ud.success_probability(), ud_dichotomic_bound(&rat(1, 2)));
    }

    #[test]
    fn ud_meter_rejects_invalid_q() {
        // q₁ = q₂ = 1 with non-orthogonal states pushes A_? below zero.
        assert!(UdMeter::new(int(1), int(1), z_state(), x_state()).is_err());
        // Orthogonal states allow perfect discrimination.
        let minus_z = PureQubitState::new(vec![int(0), int(0), int(-1)]).unwrap();
        let perfect = UdMeter::new(int(1), int(1), z_state(), minus_z).unwrap();
        assert_eq!(perfect.success_probability(), int(1));
    }

    #[test]
    fn bounds_and_optimum_formulas() {
        // Overlap² = 1/2: bound 1/4, optimum 1 − 1/√2 ≈ 0.292893.
        assert_eq!(ud_dichotomic_bound(&rat(1, 2)), rat(1, 4));
        let opt = ud_unrestricted_optimum(&rat(1, 2)).unwrap();
        assert_eq!(opt.to_decimal_string(6), "0.292893");
        // Orthogonal: bound 1/2, optimum 1.
        assert_eq!(ud_dichotomic_bound(&int(0)), rat(1, 2));
        assert_eq!(
            ud_unrestricted_optimum(&int(0)).unwrap(),
            ExtremeValue::exact(int(1))
        );
        // Identical states: both vanish.
        assert_eq!(ud_dichotomic_bound(&int(1)), int(0));
        assert_eq!(
            ud_unrestricted_optimum(&int(1)).unwrap(),
            ExtremeValue::exact(int(0))
        );
        // Strict separation away from the ends.
        let w = rat(1, 2);
        assert_eq!(
            ud_unrestricted_optimum(&w)
                .unwrap()
                .cmp_rational(&ud_dichotomic_bound(&w)),
            Ordering::Greater
        );
    }

    #[test]
    fn constrained_maximization_saturates_the_bound() {
        let best = ud_max_valid_q(&rat(1, 2), UdConstraint::DichotomicSum).unwrap();
        assert_eq!(best.success, rat(1, 4));
        assert_eq!(&best.q1 + &best.q2, int(1));
        assert!(best.boundary_certified);
    }

    #[test]
    fn unconstrained_maximization_approaches_the_known_optimum() {
        let best = ud_max_valid_q(&rat(1, 2), UdConstraint::None).unwrap();
        let target = ud_unrestricted_optimum(&rat(1, 2)).unwrap();
        // Within 10⁻⁶ of 1 − 1/√2 from below.
        let gap = target.sub(&ExtremeValue::exact(best.success.clone()));
        assert_eq!(gap.cmp_rational(&int(0)), Ordering::Greater);
        assert_eq!(gap.cmp_rational(&rat(1, 1_000_000)), Ordering::Less);
        assert!(best.boundary_certified);
    }

    #[test]
    fn orthogonal_states_reach_certain_discrimination() {
        let minus_z = PureQubitState::new(vec![int(0), int(0), int(-1)]).unwrap();
        let w = z_state().overlap_sq(&minus_z);
        let unconstrained = ud_max_valid_q(&w, UdConstraint::None).unwrap();
        assert_eq!(unconstrained.success, int(1));
        let constrained = ud_max_valid_q(&w, UdConstraint::DichotomicSum).unwrap();
        assert_eq!(constrained.success, rat(1, 2));
    }

    #[test]
    fn not_2tomic_criterion_on_ud_meters() {
        // Validity of the inconclusive effect needs q·(1 + |⟨ψ₁|ψ₂⟩|) ≤ 1
        // at q₁ = q₂ = q. With n₂ = (3/5, 0, −4/5) the overlap² is 1/10, so
        // q = 3/5 is admissible and the sum 6/5 exceeds one.
        let tilted = PureQubitState::new(vec![rat(3, 5), int(0), rat(-4, 5)]).unwrap();
        let strong = UdMeter::new(rat(3, 5), rat(3, 5), z_state(), tilted.clone()).unwrap();
        let cert = ud_not_2tomic_certificate(&strong).unwrap();
        assert_eq!(cert.verdict, NTomicVerdict::CertifiedNotNTomic);
        assert!(cert.verify(strong.meter(), &StateSpace::bloch_ball()));

        // At overlap² = 1/2 the largest admissible symmetric q is
        // 2 − √2 ≈ 0.5858; q = 29/50 certifies, q = 3/5 is rejected.
        let boundary = UdMeter::new(rat(29, 50), rat(29, 50), z_state(), x_state()).unwrap();
        let cert = ud_not_2tomic_certificate(&boundary).unwrap();
        assert_eq!(cert.verdict, NTomicVerdict::CertifiedNotNTomic);
        assert!(UdMeter::new(rat(3, 5), rat(3, 5), z_state(), x_state()).is_err());

        // q₁ = q₂ = 2/5: the sum is 4/5 ≤ 1, so the criterion is silent.
        let weak = UdMeter::new(rat(2, 5), rat(2, 5), z_state(), x_state()).unwrap();
        let cert = ud_not_2tomic_certificate(&weak).unwrap();
        assert_eq!(cert.verdict, NTomicVerdict::Undecided);

        // Orthogonal states: A₁ + A₂ completes the unit, hypotheses fail.
        let minus_z = PureQubitState::new(vec![int(0), int(0), int(-1)]).unwrap();
        let orth = UdMeter::new(rat(3, 5), rat(3, 5), z_state(), minus_z).unwrap();
        let cert = ud_not_2tomic_certificate(&orth).unwrap();
        assert_eq!(cert.verdict, NTomicVerdict::Undecided);
    }

    #[test]
    fn depolarizing_maps() {
        let e = Effect::new(rat(1, 2), vec![int(0), int(0), rat(1, 2)]);
        assert_eq!(depolarize_effect(&e, &int(1)), e);
        let fully = depolarize_effect(&e, &int(0));
        assert!(fully.is_trivial());
        assert_eq!(
            depolarize_effect(&e, &rat(1, 2)),
            Effect::new(rat(1, 2), vec![int(0), int(0), rat(1, 4)])
        );

        // Shift toward the +z state: constant picks up (1−t)·e(ξ).
        let shifted = shifted_depolarize_effect(&e, &rat(1, 2), &[int(0), int(0), int(1)]);
        assert_eq!(
            shifted,
            Effect::new(rat(3, 4), vec![int(0), int(0), rat(1, 4)])
        );
    }

    #[test]
    fn shifted_depolarized_effects_stay_in_the_noise_effects() {
        // Ψ*_{t,ξ}(e) = t·e + (1−t)·e(ξ)·u is literally of the form
        // t·e + (1−t)·r·u with r = e(ξ) ∈ [0, 1].
        let space = StateSpace::bloch_ball();
        let t = rat(1, 2);
        let e = Effect::new(rat(1, 2), vec![rat(1, 4), int(0), rat(1, 4)]);
        for xi in [
            vec![int(0), int(0), int(1)],
            vec![rat(3, 5), rat(4, 5), int(0)],
            vec![int(0), int(0), int(0)],
        ] {
            let image = shifted_depolarize_effect(&e, &t, &xi);
            assert!(image.is_valid(&space));
            let r = e.evaluate_at(&xi);
            let expected = e
                .scale(&t)
                .add(&Effect::unit(3).scale(&((Rational::one() - &t) * r)));
            assert_eq!(image, expected);
        }
    }

    #[test]
    fn depolarization_is_injective_for_positive_t() {
        let e = Effect::new(rat(1, 2), vec![rat(1, 4), rat(1, 8), int(0)]);
        let f = Effect::new(rat(1, 2), vec![int(0), rat(1, 8), rat(1, 4)]);
        let t = rat(1, 3);
        assert_ne!(depolarize_effect(&e, &t), depolarize_effect(&f, &t));
        // Invert by scaling the linear part back.
        let image = depolarize_effect(&e, &t);
        let back = Effect::new(
            image.constant().clone(),
            image.linear().iter().map(|x| x / &t).collect(),
        );
        assert_eq!(back, e);
    }

    #[test]
    fn commutation_of_sharp_effects() {
        let trivial = Effect::unit(3).scale(&rat(1, 2));
        let z = Effect::new(rat(1, 2), vec![int(0), int(0), rat(1, 2)]);
        let z_weak = Effect::new(rat(1, 2), vec![int(0), int(0), rat(1, 4)]);
        let x = Effect::new(rat(1, 2), vec![rat(1, 2), int(0), int(0)]);
        assert!(commutes_sharp(&trivial, &z));
        assert!(commutes_sharp(&z, &z_weak));
        assert!(!commutes_sharp(&z, &x));
    }

    #[test]
    fn inscribed_polytope_has_twenty_sphere_vertices() {
        let poly = inscribed_bloch_polytope();
        assert_eq!(poly.vertices().len(), 20);
        for v in poly.vertices() {
            assert_eq!(norm_sq(v), int(1));
        }
        assert!(poly.vertices().contains(&vec![int(0), int(0), int(1)]));
        assert!(poly.vertices().contains(&vec![int(1), int(0), int(0)]));
    }

    #[test]
    fn ball_feasible_points_remain_feasible_on_the_inscribed_polytope() {
        // Validity over fewer states is weaker, so any (q₁, q₂) feasible on
        // the ball yields a valid meter on the inscribed polytope, and the
        // polytope optimum can only be larger.
        let poly = StateSpace::Polytope(inscribed_bloch_polytope());
        let ball_best = ud_max_valid_q(&rat(1, 2), UdConstraint::None).unwrap();
        let unit = Effect::unit(3);
        let p2 = x_state().projector();
        let p1 = z_state().projector();
        let a1 = unit.sub(&p2).scale(&ball_best.q1);
        let a2 = unit.sub(&p1).scale(&ball_best.q2);
        let rest = unit.sub(&a1).sub(&a2);
        assert!(Meter::new(vec![a1, a2, rest], &poly).is_ok());
    }
}
