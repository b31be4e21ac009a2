//! Machine-readable report types. Each report serializes to JSON with
//! stable field order and parses back into the same structure.

use serde::{Deserialize, Serialize};

use gpt_restrict::gpt::{Effect, Meter};
use gpt_restrict::model::ValueJson;
use gpt_restrict::numerics::lp::FarkasCertificate;
use gpt_restrict::numerics::rational::format_rational;
use gpt_restrict::restrictions::{ClassificationResult, ClassificationWitness, RestrictionLabel};
use gpt_restrict::simulation::{
    NTomicCertificate, NTomicEvidence, NTomicVerdict, PostProcessing, SimulationWitness,
};

pub const APPROX_DIGITS: u32 = 6;

pub fn effect_row(e: &Effect) -> Vec<String> {
    e.coords().iter().map(format_rational).collect()
}

pub fn meter_rows(m: &Meter) -> Vec<Vec<String>> {
    m.effects().iter().map(effect_row).collect()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub eq_multipliers: Vec<String>,
    pub le_multipliers: Vec<String>,
    pub verified: bool,
}

impl CertificateJson {
    pub fn new(certificate: &FarkasCertificate, verified: bool) -> Self {
        CertificateJson {
            eq_multipliers: certificate.eq_multipliers.iter().map(format_rational).collect(),
            le_multipliers: certificate.le_multipliers.iter().map(format_rational).collect(),
            verified,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ValidateReport {
    pub valid: bool,
    pub objects: Vec<ObjectVerdict>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ObjectVerdict {
    pub object: String,
    pub valid: bool,
    pub detail: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SimulateReport {
    pub target: String,
    pub simulators: Vec<String>,
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub post_processings: Option<Vec<Vec<Vec<String>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reconstruction_exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
}

impl SimulateReport {
    pub fn witness(target: String, simulators: Vec<String>, w: &SimulationWitness, exact: bool) -> Self {
        SimulateReport {
            target,
            simulators,
            feasible: true,
            weights: Some(w.weights.iter().map(format_rational).collect()),
            post_processings: Some(
                w.post_processings
                    .iter()
                    .map(|nu: &PostProcessing| {
                        nu.rows()
                            .iter()
                            .map(|row| row.iter().map(format_rational).collect())
                            .collect()
                    })
                    .collect(),
            ),
            reconstruction_exact: Some(exact),
            certificate: None,
        }
    }

    pub fn infeasible(
        target: String,
        simulators: Vec<String>,
        certificate: CertificateJson,
    ) -> Self {
        SimulateReport {
            target,
            simulators,
            feasible: false,
            weights: None,
            post_processings: None,
            reconstruction_exact: None,
            certificate: Some(certificate),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub restriction: String,
    pub label: String,
    pub seed: u64,
    pub budget: usize,
    pub trail: Vec<String>,
    pub witnesses: Vec<WitnessJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessJson {
    EffectOutsideInduced { effect: Vec<String> },
    MeterOutsideRestriction { meter: Vec<Vec<String>> },
    MeterOutsideFullEffects { meter: Vec<Vec<String>> },
    LinearlyIndependentEffects { rank: usize },
}

pub fn label_string(label: RestrictionLabel) -> String {
    match label {
        RestrictionLabel::R1 => "R1",
        RestrictionLabel::R2 => "R2",
        RestrictionLabel::R3 => "R3",
        RestrictionLabel::NoRestriction => "no-restriction",
        RestrictionLabel::Unknown => "unknown",
    }
    .to_string()
}

impl ClassifyReport {
    pub fn new(restriction: String, result: &ClassificationResult) -> Self {
        let witnesses = result
            .witnesses
            .iter()
            .map(|w| match w {
                ClassificationWitness::EffectOutsideInduced(e) => {
                    WitnessJson::EffectOutsideInduced { effect: effect_row(e) }
                }
                ClassificationWitness::MeterOutsideRestriction(m) => {
                    WitnessJson::MeterOutsideRestriction { meter: meter_rows(m) }
                }
                ClassificationWitness::MeterOutsideFullEffects(m) => {
                    WitnessJson::MeterOutsideFullEffects { meter: meter_rows(m) }
                }
                ClassificationWitness::LinearlyIndependentEffects { rank } => {
                    WitnessJson::LinearlyIndependentEffects { rank: *rank }
                }
            })
            .collect();
        ClassifyReport {
            restriction,
            label: label_string(result.label),
            seed: result.seed,
            budget: result.budget,
            trail: result.trail.clone(),
            witnesses,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct NtomicReport {
    pub meter: String,
    pub n: usize,
    pub verdict: String,
    pub evidence: EvidenceJson,
    pub evidence_verified: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvidenceJson {
    OutcomeCount { effective_outcomes: usize },
    ComplementMaxSum { outcome: usize, sum: ValueJson },
    MaxSumExceedsN { sum: ValueJson },
    IndecomposableFamily { outcomes: Vec<usize>, sum: ValueJson },
    None,
}

pub fn verdict_string(verdict: &NTomicVerdict) -> String {
    match verdict {
        NTomicVerdict::CertifiedNTomic => "certified-n-tomic",
        NTomicVerdict::CertifiedNotNTomic => "certified-not-n-tomic",
        NTomicVerdict::Undecided => "undecided",
    }
    .to_string()
}

impl NtomicReport {
    pub fn new(meter: String, certificate: &NTomicCertificate, verified: bool) -> Self {
        let evidence = match &certificate.evidence {
            NTomicEvidence::OutcomeCount { effective_outcomes } => EvidenceJson::OutcomeCount {
                effective_outcomes: *effective_outcomes,
            },
            NTomicEvidence::ComplementMaxSum { outcome, sum } => EvidenceJson::ComplementMaxSum {
                outcome: *outcome,
                sum: ValueJson::from_value(sum, APPROX_DIGITS),
            },
            NTomicEvidence::MaxSumExceedsN { sum } => EvidenceJson::MaxSumExceedsN {
                sum: ValueJson::from_value(sum, APPROX_DIGITS),
            },
            NTomicEvidence::IndecomposableFamily { outcomes, sum } => {
                EvidenceJson::IndecomposableFamily {
                    outcomes: outcomes.clone(),
                    sum: ValueJson::from_value(sum, APPROX_DIGITS),
                }
            }
            NTomicEvidence::None => EvidenceJson::None,
        };
        NtomicReport {
            meter,
            n: certificate.n,
            verdict: verdict_string(&certificate.verdict),
            evidence,
            evidence_verified: verified,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct NoiseReport {
    pub meter: String,
    pub t: String,
    pub noise_content: ValueJson,
    pub threshold: String,
    pub member: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CompatReport {
    pub first: String,
    pub second: String,
    pub compatible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joint: Option<Vec<Vec<Vec<String>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marginals_exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct UdReport {
    pub overlap_sq: String,
    pub constraint: String,
    pub dichotomic_bound: ValueJson,
    pub unrestricted_optimum: ValueJson,
    pub optimizer: UdOptimizerJson,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct UdOptimizerJson {
    pub q1: String,
    pub q2: String,
    pub success: ValueJson,
    pub boundary_certified: bool,
}
