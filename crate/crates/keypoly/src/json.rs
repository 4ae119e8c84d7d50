//! JSON wire formats: chains, families and Mac Lane-Vaquie chains.
//!
//! Chains re-validate on parse: untrusted steps run the key test again,
//! trusted steps only the gamma condition. All rationals travel as strings;
//! no floating-point token ever appears.
//!
//! Chain: {"p": 2, "gamma0": "1/2", "steps": [{"phi": "x^2 + 2",
//! "gamma": "3/2", "trusted": false}]}. A limit-augmented chain carries
//! "limit_base" instead of "gamma0". Family: {"kind": "monomial_centers",
//! "p": 2, "centers": "sum_2^k", "deltas": "k_plus_1", "cap": 64} or
//! {"kind": "explicit", "chains": [...]}.

use crate::balls::{MlvChain, MlvStep, MlvTerminal, StepKind};
use crate::error::{Error, Result};
use crate::limits::{CenterLaw, DeltaLaw, FamilyGen, IncreasingFamily, MonotoneMode};
use crate::poly::RatPoly;
use crate::valuation::{ChainBase, MacLaneChain};
use crate::value::LambdaValue;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepWire {
    pub phi: RatPoly,
    pub gamma: LambdaValue,
    #[serde(default)]
    pub trusted: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitBaseWire {
    pub family: FamilyWire,
    pub phi: RatPoly,
    pub gamma: LambdaValue,
    pub anchor: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainWire {
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma0: Option<LambdaValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_base: Option<Box<LimitBaseWire>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<StepWire>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotoneWire {
    ByConstruction,
    CheckedPrefix(usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FamilyWire {
    #[serde(rename = "monomial_centers")]
    MonomialCenters {
        p: u64,
        centers: String,
        deltas: String,
        cap: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        monotone: Option<MonotoneWire>,
    },
    #[serde(rename = "explicit")]
    Explicit { chains: Vec<ChainWire> },
}

pub fn chain_to_wire(mu: &MacLaneChain) -> ChainWire {
    let (gamma0, limit_base) = match mu.base() {
        ChainBase::Gauss { gamma0 } => (Some(gamma0.clone()), None),
        ChainBase::Limit(lb) => (
            None,
            Some(Box::new(LimitBaseWire {
                family: family_to_wire(&lb.family),
                phi: lb.phi.clone(),
                gamma: lb.gamma.clone(),
                anchor: lb.anchor,
            })),
        ),
    };
    ChainWire {
        p: mu.p(),
        gamma0,
        limit_base,
        steps: mu
            .steps()
            .iter()
            .map(|s| StepWire {
                phi: s.phi.clone(),
                gamma: s.gamma.clone(),
                trusted: s.trusted,
            })
            .collect(),
    }
}

pub fn chain_from_wire(w: &ChainWire) -> Result<MacLaneChain> {
    let mut mu = match (&w.gamma0, &w.limit_base) {
        (Some(g), None) => MacLaneChain::gauss(w.p, g.clone())?,
        (None, Some(lb)) => {
            let fam = family_from_wire(&lb.family)?;
            if fam.p() != w.p {
                return Err(Error::MismatchedPrimes(w.p, fam.p()));
            }
            fam.limit_augment(&lb.phi, lb.gamma.clone(), lb.anchor)?
        }
        _ => {
            return Err(Error::Parse(
                "a chain needs exactly one of \"gamma0\" or \"limit_base\"".into(),
            ))
        }
    };
    for s in &w.steps {
        mu = if s.trusted {
            mu.augment_trusted(&s.phi, s.gamma.clone())?
        } else {
            mu.augment(&s.phi, s.gamma.clone())?
        };
    }
    Ok(mu)
}

pub fn family_to_wire(fam: &IncreasingFamily) -> FamilyWire {
    match fam.generator() {
        FamilyGen::MonomialCenters { p, centers, deltas } => FamilyWire::MonomialCenters {
            p: *p,
            centers: centers.name().into(),
            deltas: deltas.name().into(),
            cap: fam.scan_cap(),
            monotone: match fam.monotone() {
                MonotoneMode::ByConstruction => None,
                MonotoneMode::CheckedPrefix(n) => Some(MonotoneWire::CheckedPrefix(n)),
            },
        },
        FamilyGen::Explicit(chains) => FamilyWire::Explicit {
            chains: chains.iter().map(chain_to_wire).collect(),
        },
    }
}

pub fn family_from_wire(w: &FamilyWire) -> Result<IncreasingFamily> {
    match w {
        FamilyWire::MonomialCenters {
            p,
            centers,
            deltas,
            cap,
            monotone,
        } => {
            let fam = IncreasingFamily::monomial(
                *p,
                CenterLaw::from_name(centers)?,
                DeltaLaw::from_name(deltas)?,
                *cap,
            )?;
            match monotone {
                Some(MonotoneWire::CheckedPrefix(n)) => fam.with_checked_prefix(*n),
                _ => Ok(fam),
            }
        }
        FamilyWire::Explicit { chains } => {
            let chains: Vec<MacLaneChain> =
                chains.iter().map(chain_from_wire).collect::<Result<_>>()?;
            IncreasingFamily::explicit(chains)
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MlvStepWire {
    pub kind: String,
    pub phi: RatPoly,
    pub gamma: LambdaValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyWire>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MlvTerminalWire {
    AtLastStep,
    StableLimit(FamilyWire),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MlvChainWire {
    pub p: u64,
    pub steps: Vec<MlvStepWire>,
    pub terminal: MlvTerminalWire,
}

pub fn mlv_to_wire(chain: &MlvChain) -> MlvChainWire {
    MlvChainWire {
        p: chain.p,
        steps: chain
            .steps
            .iter()
            .map(|s| MlvStepWire {
                kind: s.kind.name().into(),
                phi: s.phi.clone(),
                gamma: s.gamma.clone(),
                family: s.family.as_ref().map(family_to_wire),
            })
            .collect(),
        terminal: match &chain.terminal {
            MlvTerminal::AtLastStep => MlvTerminalWire::AtLastStep,
            MlvTerminal::StableLimit(f) => MlvTerminalWire::StableLimit(family_to_wire(f)),
        },
    }
}

pub fn mlv_from_wire(w: &MlvChainWire) -> Result<MlvChain> {
    let steps = w
        .steps
        .iter()
        .map(|s| {
            let kind = match s.kind.as_str() {
                "ordinary" => StepKind::Ordinary,
                "limit" => StepKind::Limit,
                other => return Err(Error::Parse(format!("unknown step kind {other:?}"))),
            };
            Ok(MlvStep {
                kind,
                phi: s.phi.clone(),
                gamma: s.gamma.clone(),
                family: s.family.as_ref().map(family_from_wire).transpose()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let terminal = match &w.terminal {
        MlvTerminalWire::AtLastStep => MlvTerminal::AtLastStep,
        MlvTerminalWire::StableLimit(f) => MlvTerminal::StableLimit(family_from_wire(f)?),
    };
    Ok(MlvChain {
        p: w.p,
        steps,
        terminal,
    })
}

impl Serialize for MacLaneChain {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        chain_to_wire(self).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MacLaneChain {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let wire = ChainWire::deserialize(de)?;
        chain_from_wire(&wire).map_err(D::Error::custom)
    }
}

impl Serialize for IncreasingFamily {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        family_to_wire(self).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for IncreasingFamily {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let wire = FamilyWire::deserialize(de)?;
        family_from_wire(&wire).map_err(D::Error::custom)
    }
}

impl Serialize for MlvChain {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        mlv_to_wire(self).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MlvChain {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let wire = MlvChainWire::deserialize(de)?;
        mlv_from_wire(&wire).map_err(D::Error::custom)
    }
}
