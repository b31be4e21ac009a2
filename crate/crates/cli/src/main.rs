//! Command line front end: load JSON models, run the decision procedures,
//! print human-readable or machine-readable reports.
//!
//! Exit codes: 0 success/feasible/member, 1 infeasible/non-member (still a
//! successful computation), 2 usage error, 3 validation or model error,
//! 4 unsupported (dimension cap or backend mismatch).

mod reports;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gpt_restrict::error::Error;
use gpt_restrict::gpt::{Effect, Meter, StateSpace};
use gpt_restrict::model::{self, Model, ModelFile, ValueJson};
use gpt_restrict::numerics::rational::{format_rational, parse_rational, Rational};
use gpt_restrict::qubit::{
    ud_dichotomic_bound, ud_max_valid_q, ud_unrestricted_optimum, PureQubitState, UdConstraint,
};
use gpt_restrict::restrictions::{
    classify, effect_restriction_validate, in_noise_restriction, noise_content, ClassifyOptions,
    DEFAULT_DIM_CAP,
};
use gpt_restrict::simulation::{certify_n_tomic, simulable, SimulationOutcome};
use gpt_restrict::{compatibility, numerics::radical::ExtremeValue};

use reports::*;

#[derive(Parser)]
#[command(
    name = "gpt-restrict",
    version,
    about = "Meters, simulability and operational restrictions in general probabilistic theories"
)]
struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every object of a model file and report per-object verdicts.
    Validate { model: PathBuf },
    /// Decide whether a target meter is simulable from named simulators.
    Simulate {
        #[arg(long)]
        model: PathBuf,
        /// Name of the target meter.
        #[arg(long)]
        target: String,
        /// Names of the simulator meters.
        #[arg(long, num_args = 1.., required = true)]
        simulators: Vec<String>,
    },
    /// Classify a named restriction into R1/R2/R3 with witnesses.
    Classify {
        #[arg(long)]
        model: PathBuf,
        /// Name of the restriction to classify.
        #[arg(long)]
        restriction: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sampling budget per search phase.
        #[arg(long, default_value_t = 40)]
        budget: usize,
    },
    /// Certify effective n-tomicity of a named meter.
    Ntomic {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        meter: String,
        #[arg(long)]
        n: usize,
    },
    /// Noise content of a meter and membership in the noise restriction.
    Noise {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        meter: String,
        /// Noise parameter t as a rational, e.g. 1/2.
        #[arg(long)]
        t: String,
    },
    /// Joint-meter existence for two named meters.
    Compat {
        #[arg(long)]
        model: PathBuf,
        /// First meter name.
        #[arg(long)]
        a: String,
        /// Second meter name.
        #[arg(long)]
        b: String,
    },
    /// Unambiguous discrimination of two pure qubit states.
    Ud {
        /// Squared overlap |⟨ψ₁|ψ₂⟩|² as a rational, e.g. 1/2.
        #[arg(long, conflicts_with = "bloch")]
        overlap_sq: Option<String>,
        /// Two Bloch vectors as comma-separated rationals, e.g. 0,0,1 1,0,0.
        #[arg(long, num_args = 2)]
        bloch: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = ConstraintArg::None)]
        constraint: ConstraintArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstraintArg {
    /// Only meter validity.
    None,
    /// Effectively dichotomic regime: q1 + q2 ≤ 1.
    Dichotomic,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Unsupported(_) | Error::ResourceLimit(_) => ExitCode::from(4),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn dim_cap() -> usize {
    std::env::var("GPT_RESTRICT_DIM_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_DIM_CAP)
}

fn load_model(path: &PathBuf) -> Result<Model, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    model::parse_model(&text)
}

fn get_meter<'m>(model: &'m Model, name: &str) -> Result<&'m Meter, Error> {
    model
        .meters
        .get(name)
        .ok_or_else(|| Error::Domain(format!("no meter named {name:?} in the model")))
}

fn emit<T: serde::Serialize>(json: bool, report: &T, text: impl FnOnce()) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("reports serialize")
        );
    } else {
        text();
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Validate { model } => cmd_validate(model, cli.json),
        Command::Simulate {
            model,
            target,
            simulators,
        } => cmd_simulate(model, target, simulators, cli.json),
        Command::Classify {
            model,
            restriction,
            seed,
            budget,
        } => cmd_classify(model, restriction, *seed, *budget, cli.json),
        Command::Ntomic { model, meter, n } => cmd_ntomic(model, meter, *n, cli.json),
        Command::Noise { model, meter, t } => cmd_noise(model, meter, t, cli.json),
        Command::Compat { model, a, b } => cmd_compat(model, a, b, cli.json),
        Command::Ud {
            overlap_sq,
            bloch,
            constraint,
        } => cmd_ud(overlap_sq.as_deref(), bloch.as_deref(), *constraint, cli.json),
    }
}

/// Per-object validation with a lenient load, so one broken meter does not
/// hide the verdicts of the others.
fn cmd_validate(path: &PathBuf, json: bool) -> Result<ExitCode, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let file: ModelFile = serde_json::from_str(&text).map_err(|e| Error::Model {
        pointer: format!("line {}, column {}", e.line(), e.column()),
        reason: e.to_string(),
    })?;

    let mut objects = Vec::new();
    let mut push = |object: String, result: Result<String, Error>| match result {
        Ok(detail) => objects.push(ObjectVerdict {
            object,
            valid: true,
            detail,
        }),
        Err(e) => objects.push(ObjectVerdict {
            object,
            valid: false,
            detail: e.to_string(),
        }),
    };

    let space = match model::model_from_file(&ModelFile {
        state_space: file.state_space.clone(),
        meters: BTreeMap::new(),
        restrictions: BTreeMap::new(),
        states: BTreeMap::new(),
    }) {
        Ok(m) => {
            push(
                "state_space".into(),
                Ok(format!("dimension {}", m.space.dim())),
            );
            Some(m.space)
        }
        Err(e) => {
            push("state_space".into(), Err(e));
            None
        }
    };

    let mut valid_meters: BTreeMap<String, Meter> = BTreeMap::new();
    if let Some(space) = &space {
        for (name, rows) in &file.meters {
            let result = parse_meter(rows, space, &format!("/meters/{name}"));
            match result {
                Ok(meter) => {
                    push(
                        format!("meter {name}"),
                        Ok(format!("{} outcomes, normalized", meter.num_outcomes())),
                    );
                    valid_meters.insert(name.clone(), meter);
                }
                Err(e) => push(format!("meter {name}"), Err(e)),
            }
        }
        for (name, repr) in &file.restrictions {
            let result = validate_restriction(repr, space, &valid_meters, name);
            push(format!("restriction {name}"), result);
        }
        for (name, coords) in &file.states {
            let result = (|| -> Result<String, Error> {
                let point: Vec<Rational> = coords
                    .iter()
                    .enumerate()
                    .map(|(i, r)| r.to_rational(&format!("/states/{name}/{i}")))
                    .collect::<Result<_, _>>()?;
                if !space.contains(&point) {
                    return Err(Error::Domain("state lies outside the state space".into()));
                }
                Ok("inside the state space".into())
            })();
            push(format!("state {name}"), result);
        }
    }

    let valid = objects.iter().all(|o| o.valid);
    let report = ValidateReport { valid, objects };
    emit(json, &report, || {
        for o in &report.objects {
            let mark = if o.valid { "ok" } else { "FAIL" };
            println!("{mark:4} {}: {}", o.object, o.detail);
        }
        println!("{}", if report.valid { "all valid" } else { "invalid model" });
    });
    Ok(if valid { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn parse_meter(
    rows: &[Vec<model::RationalRepr>],
    space: &StateSpace,
    pointer: &str,
) -> Result<Meter, Error> {
    let mut effects = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let coords: Vec<Rational> = row
            .iter()
            .enumerate()
            .map(|(j, r)| r.to_rational(&format!("{pointer}/{i}/{j}")))
            .collect::<Result<_, _>>()?;
        effects.push(Effect::from_coords(&coords)?);
    }
    Meter::new(effects, space)
}

fn validate_restriction(
    repr: &model::RestrictionRepr,
    space: &StateSpace,
    meters: &BTreeMap<String, Meter>,
    name: &str,
) -> Result<String, Error> {
    match repr {
        model::RestrictionRepr::Sim { generators } => {
            for g in generators {
                if !meters.contains_key(g) {
                    return Err(Error::Domain(format!("unknown or invalid meter {g:?}")));
                }
            }
            Ok(format!("simulation closure of {} meters", generators.len()))
        }
        model::RestrictionRepr::Effects { generators } => {
            let mut effects = Vec::with_capacity(generators.len());
            for (i, row) in generators.iter().enumerate() {
                let coords: Vec<Rational> = row
                    .iter()
                    .enumerate()
                    .map(|(j, r)| {
                        r.to_rational(&format!("/restrictions/{name}/generators/{i}/{j}"))
                    })
                    .collect::<Result<_, _>>()?;
                effects.push(Effect::from_coords(&coords)?);
            }
            let restriction = gpt_restrict::restrictions::EffectRestriction::new(effects)?;
            let report = effect_restriction_validate(&restriction, space);
            if report.is_valid() {
                Ok("satisfies the consistency conditions".into())
            } else {
                let mut reasons = Vec::new();
                if !report.unit_in_hull {
                    reasons.push("u outside the hull".to_string());
                }
                if !report.zero_in_hull {
                    reasons.push("o outside the hull".to_string());
                }
                for i in &report.complement_violations {
                    reasons.push(format!("complement of generator {i} outside the hull"));
                }
                for i in &report.invalid_generators {
                    reasons.push(format!("generator {i} is not a valid effect"));
                }
                Err(Error::InvalidEffect(reasons.join("; ")))
            }
        }
        model::RestrictionRepr::Noise { t } => {
            let t = t.to_rational(&format!("/restrictions/{name}/t"))?;
            if t < Rational::from_integer(0.into()) || t > Rational::from_integer(1.into()) {
                return Err(Error::Domain("noise parameter t must be in [0, 1]".into()));
            }
            Ok(format!("noise family at t = {}", format_rational(&t)))
        }
    }
}

fn cmd_simulate(
    path: &PathBuf,
    target: &str,
    simulators: &[String],
    json: bool,
) -> Result<ExitCode, Error> {
    let model = load_model(path)?;
    let target_meter = get_meter(&model, target)?;
    let simulator_meters: Vec<Meter> = simulators
        .iter()
        .map(|name| get_meter(&model, name).cloned())
        .collect::<Result<_, _>>()?;
    match simulable(target_meter, &simulator_meters, &model.space)? {
        SimulationOutcome::Simulable(witness) => {
            let exact =
                &witness.reconstruct(&simulator_meters, &model.space)? == target_meter;
            let report = SimulateReport::witness(
                target.to_string(),
                simulators.to_vec(),
                &witness,
                exact,
            );
            emit(json, &report, || {
                println!("feasible: {target} is simulable from {simulators:?}");
                println!("weights: {:?}", report.weights.as_ref().unwrap());
                println!("reconstruction exact: {exact}");
            });
            Ok(ExitCode::SUCCESS)
        }
        SimulationOutcome::NotSimulable(proof) => {
            let verified = proof.verify();
            let report = SimulateReport::infeasible(
                target.to_string(),
                simulators.to_vec(),
                CertificateJson::new(&proof.certificate, verified),
            );
            emit(json, &report, || {
                println!("infeasible: {target} is not simulable from {simulators:?}");
                println!("Farkas certificate verified");
            });
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_classify(
    path: &PathBuf,
    restriction: &str,
    seed: u64,
    budget: usize,
    json: bool,
) -> Result<ExitCode, Error> {
    let model = load_model(path)?;
    let r = model
        .restrictions
        .get(restriction)
        .ok_or_else(|| Error::Domain(format!("no restriction named {restriction:?}")))?;
    let options = ClassifyOptions {
        seed,
        budget,
        dim_cap: dim_cap(),
    };
    let result = classify(r, &model.space, &options)?;
    let report = ClassifyReport::new(restriction.to_string(), &result);
    emit(json, &report, || {
        println!("label: {}", report.label);
        println!("seed: {seed}, budget: {budget}");
        for line in &report.trail {
            println!("  {line}");
        }
        println!("witnesses: {}", report.witnesses.len());
    });
    Ok(ExitCode::SUCCESS)
}

fn cmd_ntomic(path: &PathBuf, meter: &str, n: usize, json: bool) -> Result<ExitCode, Error> {
    let model = load_model(path)?;
    let m = get_meter(&model, meter)?;
    let certificate = certify_n_tomic(m, n, &model.space)?;
    let verified = certificate.verify(m, &model.space);
    let report = NtomicReport::new(meter.to_string(), &certificate, verified);
    emit(json, &report, || {
        println!("meter {meter}, n = {n}: {}", report.verdict);
        println!("evidence verified: {verified}");
    });
    Ok(
        if matches!(
            certificate.verdict,
            gpt_restrict::simulation::NTomicVerdict::CertifiedNotNTomic
        ) {
            ExitCode::from(1)
        } else {
            ExitCode::SUCCESS
        },
    )
}

fn cmd_noise(path: &PathBuf, meter: &str, t: &str, json: bool) -> Result<ExitCode, Error> {
    let model = load_model(path)?;
    let m = get_meter(&model, meter)?;
    let t = parse_rational(t)?;
    let content = noise_content(m, &model.space);
    let member = in_noise_restriction(m, &t, &model.space);
    let threshold = Rational::from_integer(1.into()) - &t;
    let report = NoiseReport {
        meter: meter.to_string(),
        t: format_rational(&t),
        noise_content: ValueJson::from_value(&content, APPROX_DIGITS),
        threshold: format_rational(&threshold),
        member,
    };
    emit(json, &report, || {
        println!(
            "noise content w = {} ≈ {}",
            content,
            content.to_decimal_string(APPROX_DIGITS)
        );
        println!(
            "membership in the noise family at t = {}: {} (threshold 1 − t = {})",
            report.t, member, report.threshold
        );
    });
    Ok(if member { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_compat(path: &PathBuf, a: &str, b: &str, json: bool) -> Result<ExitCode, Error> {
    let model = load_model(path)?;
    let meter_a = get_meter(&model, a)?;
    let meter_b = get_meter(&model, b)?;
    match compatibility::are_compatible(meter_a, meter_b, &model.space)? {
        compatibility::CompatibilityOutcome::Compatible(joint) => {
            let rows: Vec<Vec<Vec<String>>> = (0..joint.rows())
                .map(|x| {
                    (0..joint.cols())
                        .map(|y| effect_row(joint.effect(x, y)))
                        .collect()
                })
                .collect();
            let report = CompatReport {
                first: a.to_string(),
                second: b.to_string(),
                compatible: true,
                joint: Some(rows),
                marginals_exact: Some(true),
                certificate: None,
            };
            emit(json, &report, || {
                println!("compatible: a joint meter exists with exact marginals");
            });
            Ok(ExitCode::SUCCESS)
        }
        compatibility::CompatibilityOutcome::Incompatible(proof) => {
            let verified = proof.verify();
            let report = CompatReport {
                first: a.to_string(),
                second: b.to_string(),
                compatible: false,
                joint: None,
                marginals_exact: None,
                certificate: Some(CertificateJson::new(&proof.certificate, verified)),
            };
            emit(json, &report, || {
                println!("incompatible: no joint meter exists (Farkas certificate verified)");
            });
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_ud(
    overlap_sq: Option<&str>,
    bloch: Option<&[String]>,
    constraint: ConstraintArg,
    json: bool,
) -> Result<ExitCode, Error> {
    let w = match (overlap_sq, bloch) {
        (Some(w), None) => parse_rational(w)?,
        (None, Some(vectors)) => {
            let parse_vec = |s: &str| -> Result<PureQubitState, Error> {
                let coords: Vec<Rational> = s
                    .split(',')
                    .map(parse_rational)
                    .collect::<Result<_, _>>()?;
                PureQubitState::new(coords)
            };
            let n1 = parse_vec(&vectors[0])?;
            let n2 = parse_vec(&vectors[1])?;
            n1.overlap_sq(&n2)
        }
        _ => {
            return Err(Error::Domain(
                "provide exactly one of --overlap-sq or --bloch".into(),
            ))
        }
    };
    let ud_constraint = match constraint {
        ConstraintArg::None => UdConstraint::None,
        ConstraintArg::Dichotomic => UdConstraint::DichotomicSum,
    };
    let bound = ud_dichotomic_bound(&w);
    let optimum = ud_unrestricted_optimum(&w)?;
    let best = ud_max_valid_q(&w, ud_constraint)?;
    let report = UdReport {
        overlap_sq: format_rational(&w),
        constraint: match constraint {
            ConstraintArg::None => "none".into(),
            ConstraintArg::Dichotomic => "dichotomic".into(),
        },
        dichotomic_bound: ValueJson::from_value(&ExtremeValue::exact(bound.clone()), APPROX_DIGITS),
        unrestricted_optimum: ValueJson::from_value(&optimum, APPROX_DIGITS),
        optimizer: UdOptimizerJson {
            q1: format_rational(&best.q1),
            q2: format_rational(&best.q2),
            success: ValueJson::from_value(
                &ExtremeValue::exact(best.success.clone()),
                APPROX_DIGITS,
            ),
            boundary_certified: best.boundary_certified,
        },
    };
    emit(json, &report, || {
        println!("overlap² = {}", report.overlap_sq);
        println!(
            "effectively dichotomic bound = {} ≈ {}",
            format_rational(&bound),
            report.dichotomic_bound.approx
        );
        println!(
            "unrestricted optimum = {} ≈ {}",
            optimum, report.unrestricted_optimum.approx
        );
        println!(
            "best ({}) q1 = {}, q2 = {}, success ≈ {}",
            report.constraint, report.optimizer.q1, report.optimizer.q2, report.optimizer.success.approx
        );
    });
    Ok(ExitCode::SUCCESS)
}
