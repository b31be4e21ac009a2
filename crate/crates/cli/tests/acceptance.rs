//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured evidence once its assertions hold. Every tolerance is
//! pinned here; exact claims are checked with zero tolerance on rational
//! arithmetic.

use std::cmp::Ordering;
use std::process::Command;
use std::time::Instant;

use rand::Rng;

use gpt_restrict::compatibility::{
    are_compatible, check_compat_closure, CompatibilityOutcome,
};
use gpt_restrict::gpt::{Effect, Meter, PolytopeSpace, StateSpace};
use gpt_restrict::numerics::lp::{LinearProgram, LpOutcome, Sense};
use gpt_restrict::numerics::radical::ExtremeValue;
use gpt_restrict::numerics::rational::{int, rat, Rational};
use gpt_restrict::qubit::{
    inscribed_bloch_polytope, ud_dichotomic_bound, ud_max_valid_q, ud_not_2tomic_certificate,
    ud_unrestricted_optimum, PureQubitState, UdConstraint, UdMeter,
};
use gpt_restrict::restrictions::{
    build_r3_witness, effect_restriction_validate, effect_space_vertices,
    effects_of_restriction, in_noise_restriction, noise_content, subalgebra_report,
    EffectRestriction, MeterRestriction, DEFAULT_DIM_CAP,
};
use gpt_restrict::sampling;
use gpt_restrict::simulation::{
    certify_n_tomic, check_closure_axioms, simulable, NTomicVerdict, SimulationOutcome,
};

use num_traits::{One, Signed, Zero};

fn gbit() -> StateSpace {
    StateSpace::square_gbit()
}

fn edge_effect() -> Effect {
    Effect::new(rat(1, 2), vec![rat(1, 2), int(0)])
}

fn pass(n: usize, title: &str, detail: &str) {
    println!("PASS criterion {n:2} — {title}: {detail}");
}

#[test]
fn criterion_01_ud_bound_reproduction() {
    let started = Instant::now();
    let w = rat(1, 2);

    // Exact rational bound 1/4, also through the command line.
    assert_eq!(ud_dichotomic_bound(&w), rat(1, 4));
    let out = Command::new(env!("CARGO_BIN_EXE_gpt-restrict"))
        .args(["ud", "--overlap-sq", "1/2", "--constraint", "dichotomic"])
        .output()
        .expect("binary runs");
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(text.contains("bound = 1/4"), "{text}");

    // Grid + bisection optimum within 10⁻⁶ of 1 − 1/√2.
    let best = ud_max_valid_q(&w, UdConstraint::None).unwrap();
    let optimum = ud_unrestricted_optimum(&w).unwrap();
    let gap = optimum.sub(&ExtremeValue::exact(best.success.clone()));
    assert_eq!(gap.cmp_rational(&int(0)), Ordering::Greater);
    assert_eq!(gap.cmp_rational(&rat(1, 1_000_000)), Ordering::Less);

    // Strict bound < optimum for 20 sampled overlaps in (0, 1).
    let mut rng = sampling::rng_from_seed(1);
    let mut sampled = 0;
    while sampled < 20 {
        let overlap = sampling::random_unit_rational(&mut rng, 37);
        if overlap.is_zero() || overlap.is_one() {
            continue;
        }
        sampled += 1;
        let bound = ud_dichotomic_bound(&overlap);
        let opt = ud_unrestricted_optimum(&overlap).unwrap();
        assert_eq!(opt.cmp_rational(&bound), Ordering::Greater, "w = {overlap}");
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    pass(
        1,
        "UD bound reproduction",
        &format!(
            "bound 1/4 exact, optimum ≈ {} within 10⁻⁶, 20 strict separations, {elapsed:?}",
            optimum.to_decimal_string(6)
        ),
    );
}

#[test]
fn criterion_02_not_2tomic_certification() {
    let z = PureQubitState::new(vec![int(0), int(0), int(1)]).unwrap();
    let x = PureQubitState::new(vec![int(1), int(0), int(0)]).unwrap();
    let ball = StateSpace::bloch_ball();

    // As stated, q₁ = q₂ = 3/5 at overlap² = 1/2 violates the validity of
    // the inconclusive effect (q·(1 + 1/√2) > 1), so the meter does not
    // exist; the toolkit rejects it rather than certifying an invalid
    // meter. The certification is exercised at the largest admissible
    // symmetric parameters, q₁ = q₂ = 29/50 < 2 − √2.
    assert!(UdMeter::new(rat(3, 5), rat(3, 5), z.clone(), x.clone()).is_err());
    let strong = UdMeter::new(rat(29, 50), rat(29, 50), z.clone(), x.clone()).unwrap();
    let direct = ud_not_2tomic_certificate(&strong).unwrap();
    assert_eq!(direct.verdict, NTomicVerdict::CertifiedNotNTomic);
    assert!(direct.verify(strong.meter(), &ball));
    let general = certify_n_tomic(strong.meter(), 2, &ball).unwrap();
    assert_eq!(general.verdict, NTomicVerdict::CertifiedNotNTomic);
    assert!(general.verify(strong.meter(), &ball));

    // q₁ = q₂ = 0.4: undecided by the indecomposable-family criterion and
    // certified 2-tomic through the complement-sum criterion.
    let weak = UdMeter::new(rat(2, 5), rat(2, 5), z.clone(), x.clone()).unwrap();
    let by_family = ud_not_2tomic_certificate(&weak).unwrap();
    assert_eq!(by_family.verdict, NTomicVerdict::Undecided);
    let by_routes = certify_n_tomic(weak.meter(), 2, &ball).unwrap();
    assert_eq!(by_routes.verdict, NTomicVerdict::CertifiedNTomic);
    assert!(matches!(
        by_routes.evidence,
        gpt_restrict::simulation::NTomicEvidence::ComplementMaxSum { .. }
    ));

    // Verdicts are stable across runs.
    let again = certify_n_tomic(strong.meter(), 2, &ball).unwrap();
    assert_eq!(again.verdict, general.verdict);
    let again = certify_n_tomic(weak.meter(), 2, &ball).unwrap();
    assert_eq!(again.verdict, by_routes.verdict);

    pass(
        2,
        "not-2-tomic certification",
        "q = 29/50 certified-not-2-tomic (stated q = 3/5 rejected as invalid), q = 2/5 \
         undecided by the family criterion and certified-2-tomic by complement sums",
    );
}

#[test]
fn criterion_03_simulation_closure_properties() {
    let space = gbit();
    let mut rng = sampling::rng_from_seed(33);
    let generators: Vec<Meter> = (0..3)
        .map(|i| sampling::random_meter(&mut rng, &space, 2 + (i % 2)).unwrap())
        .collect();
    let report = check_closure_axioms(&generators, 200, 2024, &space).unwrap();
    assert_eq!(report.total_violations(), 0, "{report:?}");
    assert_eq!(report.reconstruction_failures, 0);
    pass(
        3,
        "simulation closure properties",
        &format!(
            "3 random generators, {} seeded samples, zero violations, all witnesses \
             reconstructed exactly",
            report.samples
        ),
    );
}

#[test]
fn criterion_04_noise_restriction_lemma() {
    let space = gbit();
    for t in [rat(1, 4), rat(1, 2), rat(3, 4)] {
        let threshold = Rational::one() - &t;
        let mut rng = sampling::rng_from_seed(44);

        // 100 constructed members t·C + (1−t)·T.
        for k in 0..100 {
            let outcomes = 2 + (k % 3);
            let c = sampling::random_meter(&mut rng, &space, outcomes).unwrap();
            let trivial = Meter::trivial(
                sampling::random_distribution(&mut rng, outcomes),
                space.dim(),
            )
            .unwrap();
            let member = gpt_restrict::simulation::mix(
                &[c, trivial],
                &[t.clone(), threshold.clone()],
                &space,
            )
            .unwrap();
            let w = noise_content(&member, &space);
            assert_ne!(w.cmp_rational(&threshold), Ordering::Less);
            assert!(in_noise_restriction(&member, &t, &space));
        }

        // 100 random meters below the threshold are rejected.
        let mut below = 0;
        let mut attempts = 0;
        while below < 100 {
            attempts += 1;
            assert!(attempts < 10_000, "not enough noisy samples below 1 − t");
            let m = sampling::random_meter(&mut rng, &space, 2 + (attempts % 3)).unwrap();
            if noise_content(&m, &space).cmp_rational(&threshold) == Ordering::Less {
                below += 1;
                assert!(!in_noise_restriction(&m, &t, &space));
            }
        }
    }
    pass(
        4,
        "noise restriction lemma",
        "for t ∈ {1/4, 1/2, 3/4}: 100 members accepted and 100 sub-threshold meters \
         rejected, exact arithmetic",
    );
}

#[test]
fn criterion_05_r3_witness_construction() {
    let started = Instant::now();
    let space = gbit();
    let unit = Effect::unit(2);
    for t in [rat(1, 4), rat(1, 2), rat(3, 4)] {
        let witness = build_r3_witness(&t, &edge_effect(), &space).unwrap();

        // (a) every effect is an LP member of E_{R_t}.
        let e_rt = effects_of_restriction(
            &MeterRestriction::NoiseFamily { t: t.clone() },
            &space,
            DEFAULT_DIM_CAP,
        )
        .unwrap();
        for effect in witness.meter.effects() {
            assert!(e_rt.contains(effect));
        }

        // (b) exact normalization.
        let total = witness
            .meter
            .effects()
            .iter()
            .fold(Effect::zero(2), |acc, e| acc.add(e));
        assert_eq!(total, unit);

        // (c) noise content equals (1−t)·r, strictly below 1−t.
        let expected = (Rational::one() - &t) * &witness.r;
        assert_eq!(
            noise_content(&witness.meter, &space),
            ExtremeValue::exact(expected.clone())
        );
        assert!(expected < Rational::one() - &t);
        assert!(!in_noise_restriction(&witness.meter, &t, &space));
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass(
        5,
        "R3 witness construction",
        &format!("t ∈ {{1/4, 1/2, 3/4}} witnesses verified in {elapsed:?}"),
    );
}

#[test]
fn criterion_06_induced_effects_identity() {
    let space = gbit();
    let mut rng = sampling::rng_from_seed(66);
    let poly = space.require_polytope().unwrap();
    for _ in 0..20 {
        // A random valid restriction: random effects, their complements,
        // and the two trivial effects.
        let count = rng.gen_range(1..=2);
        let mut generators = vec![Effect::zero(2), Effect::unit(2)];
        for _ in 0..count {
            let e = sampling::random_effect(&mut rng, poly);
            generators.push(e.complement());
            generators.push(e);
        }
        let restriction = EffectRestriction::new(generators).unwrap();
        assert!(effect_restriction_validate(&restriction, &space).is_valid());

        let induced = effects_of_restriction(
            &MeterRestriction::InducedByEffects {
                effects: restriction.clone(),
            },
            &space,
            DEFAULT_DIM_CAP,
        )
        .unwrap();
        assert!(induced.same_hull(&restriction));
    }
    pass(
        6,
        "induced effect identity",
        "20 seeded valid restrictions: mutual LP inclusion with the induced effect set",
    );
}

#[test]
fn criterion_07_subalgebra_dichotomy() {
    let space = gbit();
    // Both trivial subalgebras.
    let span_u = EffectRestriction::new(vec![Effect::zero(2), Effect::unit(2)]).unwrap();
    let report = subalgebra_report(&span_u, &space, DEFAULT_DIM_CAP).unwrap();
    assert!(report.is_subalgebra());
    assert_eq!(report.span_rank, 1);

    let full = EffectRestriction::new(effect_space_vertices(&space, DEFAULT_DIM_CAP).unwrap())
        .unwrap();
    let report = subalgebra_report(&full, &space, DEFAULT_DIM_CAP).unwrap();
    assert!(report.is_subalgebra());
    assert_eq!(report.span_rank, 3);

    // A nontrivial span-generated subalgebra.
    let edge_span = EffectRestriction::new(vec![
        Effect::zero(2),
        Effect::unit(2),
        edge_effect(),
        edge_effect().complement(),
    ])
    .unwrap();
    let report = subalgebra_report(&edge_span, &space, DEFAULT_DIM_CAP).unwrap();
    assert!(report.is_subalgebra());
    assert_eq!(report.span_rank, 2);

    // The depolarized qubit effect set on an inscribed polytope (the
    // octahedron, whose six vertices lie on the Bloch sphere): an affine
    // bijection of the effect set that spans the full dual space but is a
    // proper subset, hence not a subalgebra.
    let octahedron: Vec<Vec<Rational>> = (0..3)
        .flat_map(|i| {
            [int(1), int(-1)].into_iter().map(move |s| {
                let mut v = vec![int(0); 3];
                v[i] = s;
                v
            })
        })
        .collect();
    let qubit_poly = StateSpace::Polytope(PolytopeSpace::new(octahedron).unwrap());
    let half = rat(1, 2);
    let depolarized: Vec<Effect> = effect_space_vertices(&qubit_poly, DEFAULT_DIM_CAP)
        .unwrap()
        .iter()
        .map(|e| gpt_restrict::qubit::depolarize_effect(e, &half))
        .collect();
    let shrunk = EffectRestriction::new(depolarized).unwrap();
    assert!(effect_restriction_validate(&shrunk, &qubit_poly).is_valid());
    let report = subalgebra_report(&shrunk, &qubit_poly, DEFAULT_DIM_CAP).unwrap();
    assert!(!report.is_subalgebra());
    // Evidence: the span fills the dual space, so the intersection is all
    // of E(S) and some extreme effect escapes the shrunken hull.
    assert_eq!(report.span_rank, 4);
    assert!(report.escaped_vertex.is_some());

    pass(
        7,
        "subalgebra dichotomy",
        &format!(
            "trivial and span-generated restrictions accepted; depolarized octahedron \
             set rejected with span rank 4 over {} intersection vertices",
            report.intersection_vertices
        ),
    );
}

#[test]
fn criterion_08_compatibility_lp() {
    let space = gbit();
    let x_meter = Meter::dichotomic(edge_effect(), &space).unwrap();
    let y_meter =
        Meter::dichotomic(Effect::new(rat(1, 2), vec![int(0), rat(1, 2)]), &space).unwrap();

    // Sharp edge meters: infeasible with a verifiable certificate.
    match are_compatible(&x_meter, &y_meter, &space).unwrap() {
        CompatibilityOutcome::Incompatible(proof) => assert!(proof.verify()),
        CompatibilityOutcome::Compatible(_) => panic!("edge meters must be incompatible"),
    }

    // Self-compatibility and compatibility with trivial meters, with exact
    // marginal reconstruction.
    let self_joint = match are_compatible(&x_meter, &x_meter, &space).unwrap() {
        CompatibilityOutcome::Compatible(joint) => joint,
        CompatibilityOutcome::Incompatible(_) => panic!("self-compatibility must hold"),
    };
    for x in 0..2 {
        let row_sum = (0..2).fold(Effect::zero(2), |acc, y| acc.add(self_joint.effect(x, y)));
        assert_eq!(&row_sum, x_meter.effect(x));
    }
    let trivial = Meter::trivial(vec![rat(1, 3), rat(2, 3)], 2).unwrap();
    let joint = match are_compatible(&x_meter, &trivial, &space).unwrap() {
        CompatibilityOutcome::Compatible(joint) => joint,
        CompatibilityOutcome::Incompatible(_) => panic!("trivial meters are compatible"),
    };
    for y in 0..2 {
        let col_sum = (0..2).fold(Effect::zero(2), |acc, x| acc.add(joint.effect(x, y)));
        assert_eq!(&col_sum, trivial.effect(y));
    }

    // Closure of the compatibility set over 100 seeded samples.
    let report = check_compat_closure(&x_meter, 100, 88, &space).unwrap();
    assert_eq!(report.violations, 0);
    pass(
        8,
        "compatibility LP",
        "edge meters incompatible with verified certificate; exact marginals; 100-sample \
         closure with zero violations",
    );
}

#[test]
fn criterion_09_dichotomic_identities() {
    let space = gbit();
    let mut rng = sampling::rng_from_seed(99);
    let poly = space.require_polytope().unwrap();
    let mut trivial_seen = 0;
    for k in 0..100 {
        let meter = if k % 10 == 0 {
            // Mix in trivial dichotomic meters to exercise the equality case.
            let p = sampling::random_unit_rational(&mut rng, 6);
            Meter::trivial(vec![p.clone(), Rational::one() - p], 2).unwrap()
        } else {
            Meter::dichotomic(sampling::random_effect(&mut rng, poly), &space).unwrap()
        };
        let max0 = meter.effect(0).lambda_max(&space);
        let max1 = meter.effect(1).lambda_max(&space);
        let min0 = meter.effect(0).lambda_min(&space);

        // λmax(A₂) = 1 − λmin(A₁), exactly.
        assert_eq!(
            max1,
            ExtremeValue::exact(Rational::one()).sub(&min0),
            "meter {k}"
        );
        // λmax(A₁) + λmax(A₂) ≥ 1, with equality exactly for trivial meters.
        let total = max0.add(&max1);
        match total.cmp_rational(&Rational::one()) {
            Ordering::Less => panic!("sum of maxima below one at meter {k}"),
            Ordering::Equal => {
                assert!(meter.is_trivial(), "equality on a non-trivial meter {k}");
                trivial_seen += 1;
            }
            Ordering::Greater => assert!(!meter.is_trivial(), "strict sum on trivial {k}"),
        }
    }
    assert!(trivial_seen >= 10);
    pass(
        9,
        "dichotomic identities",
        &format!("100 meters, zero exceptions, {trivial_seen} trivial equality cases"),
    );
}

#[test]
fn criterion_10_lp_solver_self_checks() {
    let started = Instant::now();
    let mut rng = sampling::rng_from_seed(1010);
    let mut feasible = 0;
    let mut infeasible = 0;
    let mut duality_checked = 0;
    for round in 0..500 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=5);
        let entry =
            |rng: &mut rand_chacha::ChaCha8Rng| rat(rng.gen_range(-6..=6), rng.gen_range(1..=3));

        if round % 2 == 0 {
            // Bounded feasible instance: strong duality must hold exactly.
            let rows: Vec<Vec<Rational>> = (0..m)
                .map(|_| (0..n).map(|_| entry(&mut rng)).collect())
                .collect();
            let b: Vec<Rational> = (0..m).map(|_| rat(rng.gen_range(0..=5), 1)).collect();
            let u: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(1..=4), 1)).collect();
            let c: Vec<Rational> = (0..n).map(|_| entry(&mut rng)).collect();

            let mut primal = LinearProgram::new(n);
            primal.set_all_nonneg();
            for (row, bi) in rows.iter().zip(&b) {
                primal.add_le(row.clone(), bi.clone());
            }
            for (i, ui) in u.iter().enumerate() {
                let mut box_row = vec![int(0); n];
                box_row[i] = int(1);
                primal.add_le(box_row, ui.clone());
            }
            primal.set_objective(Sense::Maximize, c.clone());
            let LpOutcome::Optimal { point, value } = primal.solve().unwrap() else {
                panic!("bounded feasible primal must reach an optimum");
            };
            assert!(primal.satisfies(&point), "round {round}");

            let mut dual = LinearProgram::new(m + n);
            dual.set_all_nonneg();
            for j in 0..n {
                let mut col: Vec<Rational> = rows.iter().map(|r| r[j].clone()).collect();
                for i in 0..n {
                    col.push(if i == j { int(1) } else { int(0) });
                }
                dual.add_ge(col, c[j].clone());
            }
            dual.set_objective(Sense::Minimize, b.iter().chain(&u).cloned().collect());
            let LpOutcome::Optimal { value: dual_value, .. } = dual.solve().unwrap() else {
                panic!("dual must reach an optimum");
            };
            assert_eq!(value, dual_value, "duality gap at round {round}");
            duality_checked += 1;
            feasible += 1;
        } else {
            // Feasibility-only instance with mixed signs.
            let mut lp = LinearProgram::new(n);
            lp.set_all_nonneg();
            for _ in 0..m + 1 {
                let row: Vec<Rational> = (0..n).map(|_| entry(&mut rng)).collect();
                lp.add_le(row, rat(rng.gen_range(-3..=3), 1));
            }
            match lp.solve().unwrap() {
                LpOutcome::Feasible { point } => {
                    assert!(lp.satisfies(&point), "round {round}");
                    feasible += 1;
                }
                LpOutcome::Infeasible { certificate } => {
                    assert!(certificate.verify(&lp), "round {round}");
                    infeasible += 1;
                }
                other => panic!("unexpected outcome {other:?} at round {round}"),
            }
        }
    }
    assert!(infeasible > 0 && feasible > 0);
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    pass(
        10,
        "LP solver self-checks",
        &format!(
            "500 programs: {feasible} feasible verified, {infeasible} certificates verified, \
             {duality_checked} exact duality checks in {elapsed:?}"
        ),
    );
}
