//! The JSON model schema shared with the command line tool.
//!
//! A model file carries one state space, named meters, and named
//! restriction descriptors:
//!
//! ```json
//! {
//!   "state_space": {"type": "polytope", "vertices": [[1, 1], [1, -1], [-1, 1], [-1, -1]]},
//!   "meters": {"X": [["1/2", "1/2", 0], ["1/2", "-1/2", 0]]},
//!   "restrictions": {"noisy": {"kind": "noise", "t": "1/2"}},
//!   "states": {"plus": [1, 0]}
//! }
//! ```
//!
//! Meters are lists of effect coordinate rows `[c, v…]`. Rationals are
//! written as `"p/q"` strings or plain integers. Parse failures carry a
//! JSON-pointer-style location.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpt::{BallSpace, Effect, Meter, PolytopeSpace, StateSpace};
use crate::numerics::radical::ExtremeValue;
use crate::numerics::rational::{format_rational, parse_rational, Rational};
use crate::restrictions::{EffectRestriction, MeterRestriction};

/// A rational in its JSON form: an integer or a `"p/q"` string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalRepr {
    Int(i64),
    Str(String),
}

impl RationalRepr {
    pub fn to_rational(&self, pointer: &str) -> Result<Rational> {
        match self {
            RationalRepr::Int(n) => Ok(crate::numerics::rational::int(*n)),
            RationalRepr::Str(s) => parse_rational(s).map_err(|e| Error::Model {
                pointer: pointer.to_string(),
                reason: e.to_string(),
            }),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        RationalRepr::Str(format_rational(r))
    }
}

/// Raw file contents before validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub state_space: StateSpaceRepr,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meters: BTreeMap<String, Vec<Vec<RationalRepr>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub restrictions: BTreeMap<String, RestrictionRepr>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub states: BTreeMap<String, Vec<RationalRepr>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum StateSpaceRepr {
    Polytope { vertices: Vec<Vec<RationalRepr>> },
    Ball { dim: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RestrictionRepr {
    /// Simulation closure of named meters.
    Sim { generators: Vec<String> },
    /// Hull of inline effect coordinate rows.
    Effects { generators: Vec<Vec<RationalRepr>> },
    /// Noise family at level `t`.
    Noise { t: RationalRepr },
}

/// A parsed and validated model.
#[derive(Debug, Clone)]
pub struct Model {
    pub space: StateSpace,
    pub meters: BTreeMap<String, Meter>,
    pub restrictions: BTreeMap<String, MeterRestriction>,
    pub states: BTreeMap<String, Vec<Rational>>,
}

/// Parses and validates a JSON model.
pub fn parse_model(json: &str) -> Result<Model> {
    let file: ModelFile = serde_json::from_str(json).map_err(|e| Error::Model {
        pointer: format!("line {}, column {}", e.line(), e.column()),
        reason: e.to_string(),
    })?;
    model_from_file(&file)
}

/// Validates raw file contents into domain objects.
pub fn model_from_file(file: &ModelFile) -> Result<Model> {
    let space = match &file.state_space {
        StateSpaceRepr::Polytope { vertices } => {
            let parsed = parse_matrix(vertices, "/state_space/vertices")?;
            StateSpace::Polytope(PolytopeSpace::new(parsed).map_err(|e| Error::Model {
                pointer: "/state_space".into(),
                reason: e.to_string(),
            })?)
        }
        StateSpaceRepr::Ball { dim } => {
            StateSpace::Ball(BallSpace::new(*dim).map_err(|e| Error::Model {
                pointer: "/state_space/dim".into(),
                reason: e.to_string(),
            })?)
        }
    };

    let mut meters = BTreeMap::new();
    for (name, rows) in &file.meters {
        let pointer = format!("/meters/{name}");
        let effects = parse_effects(rows, &pointer)?;
        let meter = Meter::new(effects, &space).map_err(|e| Error::Model {
            pointer: pointer.clone(),
            reason: e.to_string(),
        })?;
        meters.insert(name.clone(), meter);
    }

    let mut restrictions = BTreeMap::new();
    for (name, repr) in &file.restrictions {
        let pointer = format!("/restrictions/{name}");
        let restriction = match repr {
            RestrictionRepr::Sim { generators } => {
                let mut resolved = Vec::with_capacity(generators.len());
                for meter_name in generators {
                    let meter = meters.get(meter_name).ok_or_else(|| Error::Model {
                        pointer: format!("{pointer}/generators"),
                        reason: format!("unknown meter {meter_name:?}"),
                    })?;
                    resolved.push(meter.clone());
                }
                MeterRestriction::GeneratedBySimulation { generators: resolved }
            }
            RestrictionRepr::Effects { generators } => {
                let effects = parse_effects(generators, &format!("{pointer}/generators"))?;
                for (i, e) in effects.iter().enumerate() {
                    e.validate(&space).map_err(|err| Error::Model {
                        pointer: format!("{pointer}/generators/{i}"),
                        reason: err.to_string(),
                    })?;
                }
                MeterRestriction::InducedByEffects {
                    effects: EffectRestriction::new(effects).map_err(|e| Error::Model {
                        pointer: pointer.clone(),
                        reason: e.to_string(),
                    })?,
                }
            }
            RestrictionRepr::Noise { t } => {
                let t = t.to_rational(&format!("{pointer}/t"))?;
                MeterRestriction::NoiseFamily { t }
            }
        };
        restrictions.insert(name.clone(), restriction);
    }

    let mut states = BTreeMap::new();
    for (name, coords) in &file.states {
        let pointer = format!("/states/{name}");
        let point = parse_vector(coords, &pointer)?;
        if !space.contains(&point) {
            return Err(Error::Model {
                pointer,
                reason: "state lies outside the state space".into(),
            });
        }
        states.insert(name.clone(), point);
    }

    Ok(Model {
        space,
        meters,
        restrictions,
        states,
    })
}

/// Renders a model back into its raw file form.
pub fn model_to_file(model: &Model) -> ModelFile {
    let state_space = match &model.space {
        StateSpace::Polytope(p) => StateSpaceRepr::Polytope {
            vertices: p
                .vertices()
                .iter()
                .map(|v| v.iter().map(RationalRepr::from_rational).collect())
                .collect(),
        },
        StateSpace::Ball(b) => StateSpaceRepr::Ball { dim: b.dim() },
    };
    let meters = model
        .meters
        .iter()
        .map(|(name, meter)| {
            let rows = meter
                .effects()
                .iter()
                .map(|e| e.coords().iter().map(RationalRepr::from_rational).collect())
                .collect();
            (name.clone(), rows)
        })
        .collect();
    let restrictions = model
        .restrictions
        .iter()
        .map(|(name, r)| {
            let repr = match r {
                MeterRestriction::GeneratedBySimulation { generators } => {
                    // Generator meters are stored inline in the model under
                    // their own names; emit references when identifiable.
                    let names = generators
                        .iter()
                        .map(|g| {
                            model
                                .meters
                                .iter()
                                .find(|(_, m)| *m == g)
                                .map(|(n, _)| n.clone())
                                .unwrap_or_default()
                        })
                        .collect();
                    RestrictionRepr::Sim { generators: names }
                }
                MeterRestriction::InducedByEffects { effects } => RestrictionRepr::Effects {
                    generators: effects
                        .generators()
                        .iter()
                        .map(|e| e.coords().iter().map(RationalRepr::from_rational).collect())
                        .collect(),
                },
                MeterRestriction::NoiseFamily { t } => RestrictionRepr::Noise {
                    t: RationalRepr::from_rational(t),
                },
            };
            (name.clone(), repr)
        })
        .collect();
    let states = model
        .states
        .iter()
        .map(|(name, point)| {
            (
                name.clone(),
                point.iter().map(RationalRepr::from_rational).collect(),
            )
        })
        .collect();
    ModelFile {
        state_space,
        meters,
        restrictions,
        states,
    }
}

fn parse_vector(row: &[RationalRepr], pointer: &str) -> Result<Vec<Rational>> {
    row.iter()
        .enumerate()
        .map(|(i, r)| r.to_rational(&format!("{pointer}/{i}")))
        .collect()
}

fn parse_matrix(rows: &[Vec<RationalRepr>], pointer: &str) -> Result<Vec<Vec<Rational>>> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| parse_vector(row, &format!("{pointer}/{i}")))
        .collect()
}

fn parse_effects(rows: &[Vec<RationalRepr>], pointer: &str) -> Result<Vec<Effect>> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let coords = parse_vector(row, &format!("{pointer}/{i}"))?;
            Effect::from_coords(&coords).map_err(|e| Error::Model {
                pointer: format!("{pointer}/{i}"),
                reason: e.to_string(),
            })
        })
        .collect()
}

/// JSON form of an exact scalar `c + Σ sign·√norm_sq`: rational values
/// carry only `c`, radical values add signed radical terms and a decimal
/// rendering.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ValueJson {
    pub c: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub radicals: Vec<RadicalJson>,
    pub approx: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RadicalJson {
    pub sign: String,
    pub norm_sq: String,
}

impl ValueJson {
    pub fn from_value(value: &ExtremeValue, digits: u32) -> Self {
        let radicals = value
            .terms()
            .iter()
            .map(|t| {
                // Fold the coefficient into the radicand: c·√m = ±√(c²m).
                let folded = &t.coeff * &t.coeff * &t.radicand;
                RadicalJson {
                    sign: if t.coeff < Rational::from_integer(0.into()) {
                        "-".into()
                    } else {
                        "+".into()
                    },
                    norm_sq: format_rational(&folded),
                }
            })
            .collect();
        ValueJson {
            c: format_rational(value.base()),
            radicals,
            approx: value.to_decimal_string(digits),
        }
    }

    pub fn to_value(&self) -> Result<ExtremeValue> {
        let mut value = ExtremeValue::exact(parse_rational(&self.c)?);
        for radical in &self.radicals {
            let sign = match radical.sign.as_str() {
                "+" => Rational::from_integer(1.into()),
                "-" => Rational::from_integer((-1).into()),
                other => {
                    return Err(Error::Parse(format!("invalid radical sign {other:?}")))
                }
            };
            let norm_sq = parse_rational(&radical.norm_sq)?;
            value = value.add(&ExtremeValue::surd(
                Rational::from_integer(0.into()),
                sign,
                norm_sq,
            )?);
        }
        Ok(value)
    }
}
