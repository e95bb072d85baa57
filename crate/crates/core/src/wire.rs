//! JSON dialect for parameters, lifts, invariants and reports.
//!
//! Half-integers travel as twice their value; characters as
//! `[weight, continuous_num, continuous_den]`; blocks as `[twice_lambda, r, s]`.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::atobe::AtobeInvariants;
use crate::error::{Result, ThetaError};
use crate::lift::TemperedLift;
use crate::packets::{Block, LdsParam, PacketDatum, RepParam, TemperedParam};
use crate::scalar::{Convention, HalfInt, Sign, Signature, UnitaryCharacter};

pub const SPEC_VERSION: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Lds,
    Tempered,
    Packet,
    Aq,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ConventionDoc {
    pub m0: i64,
    pub n0: i64,
}

impl From<Convention> for ConventionDoc {
    fn from(c: Convention) -> Self {
        Self { m0: c.m0, n0: c.n0 }
    }
}

impl From<ConventionDoc> for Convention {
    fn from(c: ConventionDoc) -> Self {
        Convention::new(c.m0, c.n0)
    }
}

/// The envelope every parameter file uses.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ParamDocument {
    #[serde(default = "default_version")]
    pub spec_version: u32,
    pub kind: Kind,
    #[serde(default)]
    pub convention: ConventionDoc,
    pub payload: Value,
}

fn default_version() -> u32 {
    SPEC_VERSION
}

pub type BlockWire = (i64, usize, usize);
pub type CharacterWire = (i64, i64, i64);

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct BlocksPayload {
    pub blocks: Vec<BlockWire>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct TemperedPayload {
    #[serde(default)]
    pub xis: Vec<CharacterWire>,
    pub blocks: Vec<BlockWire>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct PacketPayload {
    pub kappas: Vec<(i64, usize)>,
    #[serde(default)]
    pub pairs: Vec<CharacterWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<(i64, i64)>>,
}

/// A decoded parameter document.
#[derive(Clone, PartialEq, Debug)]
pub enum Param {
    Lds(LdsParam),
    Tempered(TemperedParam),
    /// The flag records whether the document specified `eta`.
    Packet(PacketDatum, bool),
    Aq(RepParam),
}

pub fn block_to_wire(b: &Block) -> BlockWire {
    (b.lambda.twice(), b.r, b.s)
}

pub fn blocks_to_wire(rep: &RepParam) -> Vec<BlockWire> {
    rep.blocks().iter().map(block_to_wire).collect()
}

fn blocks_from_wire(blocks: &[BlockWire]) -> Vec<Block> {
    blocks
        .iter()
        .map(|&(t, r, s)| Block::new(HalfInt::from_twice(t), r, s))
        .collect()
}

pub fn character_to_wire(ch: &UnitaryCharacter) -> CharacterWire {
    (ch.weight, *ch.continuous.numer(), *ch.continuous.denom())
}

pub fn character_from_wire(&(w, num, den): &CharacterWire) -> Result<UnitaryCharacter> {
    if den == 0 {
        return Err(ThetaError::invalid("character has zero denominator"));
    }
    Ok(UnitaryCharacter::new(w, Rational64::new(num, den)))
}

fn from_value<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone())
        .map_err(|e| ThetaError::invalid(format!("malformed payload: {e}")))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("wire types serialize")
}

impl ParamDocument {
    pub fn new(kind: Kind, convention: Convention, payload: Value) -> Self {
        Self {
            spec_version: SPEC_VERSION,
            kind,
            convention: convention.into(),
            payload,
        }
    }

    pub fn lds(lds: &LdsParam, conv: Convention) -> Self {
        Self::new(
            Kind::Lds,
            conv,
            to_value(&BlocksPayload {
                blocks: blocks_to_wire(&lds.to_rep()),
            }),
        )
    }

    pub fn aq(rep: &RepParam, conv: Convention) -> Self {
        Self::new(
            Kind::Aq,
            conv,
            to_value(&BlocksPayload {
                blocks: blocks_to_wire(rep),
            }),
        )
    }

    pub fn tempered(pi: &TemperedParam, conv: Convention) -> Self {
        Self::new(
            Kind::Tempered,
            conv,
            to_value(&TemperedPayload {
                xis: pi.xis().iter().map(character_to_wire).collect(),
                blocks: blocks_to_wire(&pi.lds().to_rep()),
            }),
        )
    }

    pub fn packet(phi: &PacketDatum, conv: Convention) -> Self {
        Self::new(
            Kind::Packet,
            conv,
            to_value(&PacketPayload {
                kappas: phi.kappas.iter().map(|&(k, m)| (k.twice(), m)).collect(),
                pairs: phi.pairs.iter().map(character_to_wire).collect(),
                eta: Some(
                    phi.kappas
                        .iter()
                        .zip(&phi.eta)
                        .map(|(&(k, _), &e)| (k.twice(), e.value()))
                        .collect(),
                ),
            }),
        )
    }

    pub fn convention(&self) -> Convention {
        self.convention.into()
    }

    /// Decodes and validates the payload.
    pub fn decode(&self) -> Result<Param> {
        if self.spec_version != SPEC_VERSION {
            return Err(ThetaError::invalid(format!(
                "unsupported spec_version {} (expected {SPEC_VERSION})",
                self.spec_version
            )));
        }
        match self.kind {
            Kind::Lds => {
                let p: BlocksPayload = from_value(&self.payload)?;
                let rep = RepParam::new(blocks_from_wire(&p.blocks))?;
                Ok(Param::Lds(LdsParam::from_rep(&rep)?))
            }
            Kind::Aq => {
                let p: BlocksPayload = from_value(&self.payload)?;
                Ok(Param::Aq(RepParam::new(blocks_from_wire(&p.blocks))?))
            }
            Kind::Tempered => {
                let p: TemperedPayload = from_value(&self.payload)?;
                let rep = RepParam::new(blocks_from_wire(&p.blocks))?;
                let lds = LdsParam::from_rep(&rep)?;
                let xis = p
                    .xis
                    .iter()
                    .map(character_from_wire)
                    .collect::<Result<Vec<_>>>()?;
                Ok(Param::Tempered(TemperedParam::new(xis, lds)?))
            }
            Kind::Packet => {
                let p: PacketPayload = from_value(&self.payload)?;
                let kappas: Vec<(HalfInt, usize)> = p
                    .kappas
                    .iter()
                    .map(|&(t, m)| (HalfInt::from_twice(t), m))
                    .collect();
                let pairs = p
                    .pairs
                    .iter()
                    .map(character_from_wire)
                    .collect::<Result<Vec<_>>>()?;
                let (eta, given) = match &p.eta {
                    None => (vec![Sign::Plus; kappas.len()], false),
                    Some(list) => {
                        let mut eta = Vec::with_capacity(kappas.len());
                        for &(k, _) in &kappas {
                            let found =
                                list.iter().find(|&&(t, _)| t == k.twice()).ok_or_else(|| {
                                    ThetaError::invalid(format!("eta has no value at kappa {k}"))
                                })?;
                            eta.push(Sign::from_value(found.1)?);
                        }
                        if list.len() != kappas.len() {
                            return Err(ThetaError::invalid(
                                "eta lists a value outside the kappas",
                            ));
                        }
                        (eta, true)
                    }
                };
                Ok(Param::Packet(PacketDatum::new(kappas, pairs, eta)?, given))
            }
        }
    }
}

pub fn signature_json(s: Signature) -> Value {
    json!([s.p, s.q])
}

pub fn rep_json(rep: &RepParam) -> Value {
    json!({ "signature": signature_json(rep.signature()), "blocks": blocks_to_wire(rep) })
}

pub fn tempered_lift_json(lift: &TemperedLift) -> Value {
    json!({
        "signature": signature_json(lift.signature()),
        "xis": lift.xis.iter().map(character_to_wire).collect::<Vec<_>>(),
        "blocks": blocks_to_wire(&lift.inner),
    })
}

fn signed_set_json(set: &crate::atobe::SignedSet) -> Value {
    Value::Array(
        set.iter()
            .map(|(v, s)| json!([v.twice(), s.value()]))
            .collect(),
    )
}

pub fn invariants_json(inv: &AtobeInvariants) -> Value {
    json!({
        "spec_version": SPEC_VERSION,
        "k": inv.k,
        "r_pi": inv.r_pi,
        "s_pi": inv.s_pi,
        "X": signed_set_json(&inv.x),
        "Xinf": signed_set_json(&inv.xinf),
        "mus_contain_zero": inv.mus_contain_zero,
        "has_zero_pair": inv.has_zero_pair,
    })
}
