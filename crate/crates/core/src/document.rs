//! # Contract document format
//!
//! One JSON object per analysis:
//!
//! ```json
//! {
//!   "contract": {
//!     "rights": ["RtR", "RtRS", "RtRV"],
//!     "obligations": ["OtR", "OtV", "OtRS", "OtRV"],
//!     "bindings": { "requester": "rentco", "maker": {"id": "buildco", "name": "BuildCo"}, "evaluator": "buildco" },
//!     "applicability": "applicable"
//!   },
//!   "propositions": {
//!     "kR": ["p1", "p1 & p2 -> p3"], "rR": ["p3"], "sP": ["p2"],
//!     "requested": ["p3", {"atom": "p3", "until": "2031-01-01"}]
//!   },
//!   "economics": { "requester": {"eb": 10, "ec": "9/2", "db": 1, "dc": 2}, "maker": {...}, "evaluator": {...} },
//!   "transfers": [ {"from": "requester", "to": "maker", "drops": [], "substitutions": [{"from": "p3", "to": "p3 & p4"}], "additions": []} ],
//!   "schedule": [ {"event": "E^R"}, {"event": "discharge(OtV)", "verdict": "pass"} ],
//!   "network": { "events": [...], "links": [...] }
//! }
//! ```
//!
//! Every section is optional and unknown keys are rejected. Rationals are
//! integers or `"n/d"` strings. `sP` is the Maker's specification. A
//! `network` section replaces the canonical network.

use std::collections::BTreeMap;

use indexmap::IndexMap;
use serde::{Deserialize, Deserializer};
use thiserror::Error;

use crate::alignment::{parse_rational, AlignError, Delta, EconProfile, Expectation, Rational};
use crate::gate::{Applicability, ContractDoc, GateError, LifecycleEvent, Party};
use crate::logic::{Atom, Formula, FormulaSet, RpVerdict};
use crate::network::{canonical_network, EventId, Network, ScheduleStep, Verdict};
use crate::roles::{ObligationKind, RightKind, RoleId};
use crate::transfer::{
    apply_transfer, validate_as_evaluator, ArtifactSets, TransferError, TransferMap,
};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("{0}")]
    Syntax(#[from] serde_json::Error),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error(transparent)]
    Transfer(#[from] TransferError),
    #[error("transfer #{index}: {message}")]
    BadTransfer { index: usize, message: String },
    #[error("a contract document must be a JSON object")]
    NotAnObject,
    #[error("the document has no `{0}` section")]
    MissingSection(&'static str),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractDocument {
    #[serde(default)]
    pub contract: ContractSection,
    #[serde(default)]
    pub propositions: PropositionSection,
    #[serde(default)]
    pub economics: Option<BTreeMap<RoleId, RoleEconomics>>,
    #[serde(default)]
    pub transfers: Vec<TransferSpec>,
    #[serde(default)]
    pub schedule: Option<Vec<ScheduleStep>>,
    #[serde(default)]
    pub network: Option<Network>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractSection {
    #[serde(default)]
    pub rights: Vec<RightKind>,
    #[serde(default)]
    pub obligations: Vec<ObligationKind>,
    #[serde(default)]
    pub bindings: Bindings,
    #[serde(default)]
    pub applicability: Applicability,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bindings {
    pub requester: Option<PartySpec>,
    pub maker: Option<PartySpec>,
    pub evaluator: Option<PartySpec>,
}

/// A party id, or an id with a display name.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PartySpec {
    Id(String),
    Named { id: String, name: String },
}

impl PartySpec {
    fn to_party(&self) -> Party {
        match self {
            PartySpec::Id(id) => Party::new(id, id),
            PartySpec::Named { id, name } => Party::new(id, name),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropositionSection {
    #[serde(default, rename = "kR")]
    pub k_r: FormulaSet,
    #[serde(default, rename = "rR")]
    pub r_r: FormulaSet,
    #[serde(default, rename = "sP")]
    pub s_p: Option<FormulaSet>,
    #[serde(default)]
    pub requested: Vec<RequestSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RequestSpec {
    Atom(Atom),
    Timed {
        atom: Atom,
        #[serde(default)]
        until: Option<String>,
    },
}

impl RequestSpec {
    pub fn atom(&self) -> &Atom {
        match self {
            RequestSpec::Atom(a) | RequestSpec::Timed { atom: a, .. } => a,
        }
    }
}

/// Exact rational read from an integer or an `"n/d"` string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalValue(pub Rational);

impl<'de> Deserialize<'de> for RationalValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
            Other(serde_json::Value),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Int(i) => i.to_string(),
            Raw::Text(s) => s,
            Raw::Other(v) => {
                return Err(serde::de::Error::custom(format!(
                    "`{v}` is not a rational; write an integer or \"n/d\""
                )))
            }
        };
        parse_rational(&text)
            .map(RationalValue)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoleEconomics {
    pub eb: RationalValue,
    pub ec: RationalValue,
    #[serde(default)]
    pub db: Option<RationalValue>,
    #[serde(default)]
    pub dc: Option<RationalValue>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Substitution {
    pub from: Formula,
    pub to: Formula,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferSpec {
    pub from: RoleId,
    pub to: RoleId,
    #[serde(default)]
    pub drops: FormulaSet,
    #[serde(default)]
    pub substitutions: Vec<Substitution>,
    #[serde(default)]
    pub additions: FormulaSet,
}

impl TransferSpec {
    pub fn to_map(&self) -> Result<TransferMap, TransferError> {
        let subs: IndexMap<Formula, Formula> = self
            .substitutions
            .iter()
            .map(|s| (s.from.clone(), s.to.clone()))
            .collect();
        TransferMap::new(self.drops.clone(), subs, self.additions.clone())
    }
}

/// Which role's sets feed each part of the requirements check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RpSelection {
    pub k: RoleId,
    pub s: RoleId,
    pub r: RoleId,
}

impl Default for RpSelection {
    /// Validation runs on the Evaluator's interpretation.
    fn default() -> Self {
        RpSelection {
            k: RoleId::Evaluator,
            s: RoleId::Evaluator,
            r: RoleId::Evaluator,
        }
    }
}

impl ContractDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        // serde would also accept a struct written as an array
        if !text.trim_start().starts_with('{') && !text.trim().is_empty() {
            return Err(DocumentError::NotAnObject);
        }
        Ok(serde_json::from_str(text)?)
    }

    /// Builds the contract, registering each requested atom through the
    /// lifecycle so the registry invariant is checked, then terminating if
    /// the document says so.
    pub fn contract_doc(&self) -> Result<ContractDoc, DocumentError> {
        let c = &self.contract;
        let mut doc =
            ContractDoc::new(self.propositions.k_r.clone(), self.propositions.r_r.clone());
        doc.declared_rights.extend(c.rights.iter().copied());
        doc.declared_obligations
            .extend(c.obligations.iter().copied());
        let b = &c.bindings;
        let specs = [
            (RoleId::Requester, &b.requester),
            (RoleId::Maker, &b.maker),
            (RoleId::Evaluator, &b.evaluator),
        ];
        // a bare id takes the name given to it elsewhere in the bindings
        let names: BTreeMap<&str, &str> = specs
            .iter()
            .filter_map(|(_, s)| match s {
                Some(PartySpec::Named { id, name }) => Some((id.as_str(), name.as_str())),
                _ => None,
            })
            .collect();
        for (role, spec) in specs {
            let party = match spec {
                Some(PartySpec::Id(id)) => {
                    Party::new(id, names.get(id.as_str()).copied().unwrap_or(id))
                }
                Some(named) => named.to_party(),
                None => continue,
            };
            doc.bind(role, party)?;
        }
        for req in &self.propositions.requested {
            let until = match req {
                RequestSpec::Timed { until, .. } => until.clone(),
                RequestSpec::Atom(_) => None,
            };
            doc = doc.apply_event(LifecycleEvent::Request {
                atom: req.atom().clone(),
                until,
            })?;
        }
        if c.applicability == Applicability::Terminated {
            doc = doc.apply_event(LifecycleEvent::Terminate)?;
        }
        Ok(doc)
    }

    pub fn network(&self) -> Network {
        self.network.clone().unwrap_or_else(canonical_network)
    }

    pub fn econ_profile(&self) -> Result<EconProfile, DocumentError> {
        let econ = self
            .economics
            .as_ref()
            .ok_or(DocumentError::MissingSection("economics"))?;
        let entries = econ
            .iter()
            .map(|(&r, e)| {
                (
                    r,
                    Expectation {
                        benefit: e.eb.0.clone(),
                        cost: e.ec.0.clone(),
                    },
                )
            })
            .collect();
        Ok(EconProfile::new(entries)?)
    }

    /// Marginal changes for the roles that declare both `db` and `dc`.
    pub fn deltas(&self) -> Result<BTreeMap<RoleId, Delta>, DocumentError> {
        let mut out = BTreeMap::new();
        for (&role, e) in self.economics.iter().flatten() {
            match (&e.db, &e.dc) {
                (Some(db), Some(dc)) => {
                    out.insert(role, Delta::new(db.0.clone(), dc.0.clone()));
                }
                (None, None) => {}
                _ => {
                    return Err(DocumentError::Align(AlignError::BadRational(format!(
                        "{role}: db and dc must be given together"
                    ))))
                }
            }
        }
        Ok(out)
    }

    fn transfer_to(&self, to: RoleId) -> Result<Option<(RoleId, TransferMap)>, DocumentError> {
        let mut found = None;
        for (index, t) in self.transfers.iter().enumerate() {
            if t.to != to {
                continue;
            }
            if found.is_some() {
                return Err(DocumentError::BadTransfer {
                    index,
                    message: format!("second transfer into {to}"),
                });
            }
            found = Some((t.from, t.to_map()?));
        }
        Ok(found)
    }

    /// Each role's interpretation of the proposition sets.
    ///
    /// The Maker's `k`/`r` come from the transfer into the Maker (identity
    /// when absent) and its `s` is `sP`. The Evaluator's sets come from the
    /// transfer into the Evaluator, whose source must be stated; the
    /// specification always originates with the Maker.
    pub fn role_sets(&self) -> Result<BTreeMap<RoleId, ArtifactSets>, DocumentError> {
        for (index, t) in self.transfers.iter().enumerate() {
            let message = match (t.from, t.to) {
                (_, RoleId::Requester) => Some("transfers into the requester are not modelled"),
                (RoleId::Evaluator, _) => Some("the evaluator does not pass sets on"),
                (a, b) if a == b => Some("source and target are the same role"),
                _ => None,
            };
            if let Some(m) = message {
                return Err(DocumentError::BadTransfer {
                    index,
                    message: m.to_string(),
                });
            }
        }

        let requester =
            ArtifactSets::requester(self.propositions.k_r.clone(), self.propositions.r_r.clone());

        let mut maker = match self.transfer_to(RoleId::Maker)? {
            Some((_, t)) => apply_transfer(&requester, &t, RoleId::Maker),
            None => apply_transfer(&requester, &TransferMap::identity(), RoleId::Maker),
        };
        if let Some(s) = &self.propositions.s_p {
            maker.set_specification(s.clone());
        }

        let evaluator = match self.transfer_to(RoleId::Evaluator)? {
            Some((RoleId::Maker, t)) => apply_transfer(&maker, &t, RoleId::Evaluator),
            Some((_, t)) => {
                let mut ev = apply_transfer(&requester, &t, RoleId::Evaluator);
                if let Some(s) = apply_transfer(&maker, &t, RoleId::Evaluator).s() {
                    ev.set_specification(s.clone());
                }
                ev
            }
            None => apply_transfer(&maker, &TransferMap::identity(), RoleId::Evaluator),
        };

        Ok([
            (RoleId::Requester, requester),
            (RoleId::Maker, maker),
            (RoleId::Evaluator, evaluator),
        ]
        .into_iter()
        .collect())
    }

    /// The three sets of the requirements check, taken from the selected roles.
    pub fn rp_instance(&self, sel: RpSelection) -> Result<crate::logic::RpInstance, DocumentError> {
        let sets = self.role_sets()?;
        Ok(crate::logic::RpInstance {
            k: sets[&sel.k].k.clone(),
            s: sets[&sel.s].s().cloned().unwrap_or_default(),
            r: sets[&sel.r].r.clone(),
        })
    }

    /// The Evaluator's validation verdict, when it has a specification.
    pub fn validation(&self) -> Result<Option<RpVerdict>, DocumentError> {
        let sets = self.role_sets()?;
        let ev = &sets[&RoleId::Evaluator];
        if ev.s().is_none() {
            return Ok(None);
        }
        Ok(Some(validate_as_evaluator(ev)?))
    }

    /// The schedule, with a missing verdict on the validation discharge
    /// filled in from the Evaluator's own validation when available.
    pub fn schedule_steps(&self, net: &Network) -> Result<Vec<ScheduleStep>, DocumentError> {
        let mut steps = self.schedule.clone().unwrap_or_default();
        let verdict_event: Option<EventId> =
            net.verdict_event().map(|i| net.events()[i].id.clone());
        let needs_fill = steps
            .iter()
            .any(|s| Some(&s.event) == verdict_event.as_ref() && s.verdict.is_none());
        if needs_fill {
            if let Some(v) = self.validation()? {
                let verdict = if v.passes() {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                };
                for s in steps
                    .iter_mut()
                    .filter(|s| Some(&s.event) == verdict_event.as_ref() && s.verdict.is_none())
                {
                    s.verdict = Some(verdict);
                }
            }
        }
        Ok(steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::rat;
    use crate::network::ids;

    const WORKED: &str = r#"{
        "propositions": { "kR": ["p1", "p1 & p2 -> p3"], "rR": ["p3"], "sP": ["p2"] }
    }"#;

    #[test]
    fn minimal_document() {
        let doc = ContractDocument::from_json(WORKED).unwrap();
        let inst = doc.rp_instance(RpSelection::default()).unwrap();
        assert_eq!(inst.k.len(), 2);
        assert_eq!(inst.s, FormulaSet::parse_all(&["p2"]).unwrap());
        assert!(doc.validation().unwrap().unwrap().passes());
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = ContractDocument::from_json(r#"{"contrct": {}}"#).unwrap_err();
        assert!(err.to_string().contains("unknown field"));
        let err =
            ContractDocument::from_json(r#"{"propositions": {"kR": [], "extra": 1}}"#).unwrap_err();
        assert!(err.to_string().contains("unknown field"));
    }

    #[test]
    fn malformed_formula_reports_location() {
        let err = ContractDocument::from_json(r#"{"propositions": {"rR": ["p1 &"]}}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("formula `p1 &`"), "{msg}");
        assert!(msg.contains("line 1, column 5"), "{msg}");
    }

    #[test]
    fn rationals() {
        let doc = ContractDocument::from_json(
            r#"{"economics": {
                "requester": {"eb": 10, "ec": "9/2"},
                "maker": {"eb": "3", "ec": 0, "db": "1/2", "dc": -1},
                "evaluator": {"eb": 1, "ec": 0}
            }}"#,
        )
        .unwrap();
        let p = doc.econ_profile().unwrap();
        assert_eq!(p.get(RoleId::Requester).cost, rat(9, 2));
        let d = doc.deltas().unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&RoleId::Maker], Delta::new(rat(1, 2), rat(-1, 1)));

        assert!(ContractDocument::from_json(
            r#"{"economics": {"requester": {"eb": 1.5, "ec": 0}}}"#
        )
        .is_err());
        assert!(
            ContractDocument::from_json(r#"{"economics": {"investor": {"eb": 1, "ec": 0}}}"#)
                .is_err()
        );
    }

    #[test]
    fn contract_building() {
        let doc = ContractDocument::from_json(
            r#"{
            "contract": {
                "rights": ["RtR"], "obligations": ["OtR"],
                "bindings": {"requester": "rentco", "maker": {"id": "buildco", "name": "BuildCo"}},
                "applicability": "terminated"
            },
            "propositions": {"rR": ["p3 | q"], "requested": ["p3", {"atom": "q", "until": "2030-06-30"}]}
        }"#,
        )
        .unwrap();
        let c = doc.contract_doc().unwrap();
        assert_eq!(c.bindings().len(), 2);
        assert_eq!(c.bindings()[&RoleId::Maker].display_name, "BuildCo");
        assert_eq!(c.requested().len(), 2);
        assert_eq!(c.applicability(), Applicability::Terminated);
    }

    #[test]
    fn request_outside_requirements_is_an_error() {
        let doc =
            ContractDocument::from_json(r#"{"propositions": {"rR": ["p3"], "requested": ["p4"]}}"#)
                .unwrap();
        assert!(matches!(
            doc.contract_doc(),
            Err(DocumentError::Gate(GateError::NotInRequirements(_)))
        ));
    }

    #[test]
    fn transfer_chain() {
        let doc = ContractDocument::from_json(
            r#"{
            "propositions": { "kR": ["p1", "p1 & p2 -> p3"], "rR": ["p3"], "sP": ["p2"] },
            "transfers": [
                {"from": "requester", "to": "maker", "substitutions": [{"from": "p3", "to": "p3 & p4"}]},
                {"from": "maker", "to": "evaluator", "drops": ["p1"]}
            ]
        }"#,
        )
        .unwrap();
        let sets = doc.role_sets().unwrap();
        assert_eq!(
            sets[&RoleId::Maker].r,
            FormulaSet::parse_all(&["p3 & p4"]).unwrap()
        );
        assert_eq!(
            sets[&RoleId::Evaluator].k,
            FormulaSet::parse_all(&["p1 & p2 -> p3"]).unwrap()
        );
        assert_eq!(sets[&RoleId::Evaluator].s().unwrap().len(), 1);
        assert!(!doc.validation().unwrap().unwrap().passes());

        // the requester-side selection still passes
        let sel = RpSelection {
            k: RoleId::Requester,
            s: RoleId::Maker,
            r: RoleId::Requester,
        };
        assert!(crate::logic::check_default_rp(&doc.rp_instance(sel).unwrap()).passes());
    }

    #[test]
    fn evaluator_reading_from_requester() {
        let doc = ContractDocument::from_json(
            r#"{
            "propositions": { "kR": ["p1"], "rR": ["p3"], "sP": ["p2", "p1 & p2 -> p3"] },
            "transfers": [ {"from": "requester", "to": "evaluator", "additions": ["p9"]} ]
        }"#,
        )
        .unwrap();
        let ev = &doc.role_sets().unwrap()[&RoleId::Evaluator];
        assert_eq!(ev.k, FormulaSet::parse_all(&["p1", "p9"]).unwrap());
        assert_eq!(ev.s().unwrap().len(), 2);
    }

    #[test]
    fn bad_transfers() {
        for t in [
            r#"{"from": "maker", "to": "requester"}"#,
            r#"{"from": "evaluator", "to": "maker"}"#,
            r#"{"from": "maker", "to": "maker"}"#,
        ] {
            let doc = ContractDocument::from_json(&format!(r#"{{"transfers": [{t}]}}"#)).unwrap();
            assert!(
                matches!(
                    doc.role_sets(),
                    Err(DocumentError::BadTransfer { index: 0, .. })
                ),
                "{t}"
            );
        }
        let doc = ContractDocument::from_json(
            r#"{"transfers": [{"from": "requester", "to": "maker", "drops": ["a"], "additions": ["a"]}]}"#,
        )
        .unwrap();
        assert!(matches!(
            doc.role_sets(),
            Err(DocumentError::Transfer(TransferError::DropAndAdd(_)))
        ));
    }

    #[test]
    fn verdict_filled_from_validation() {
        let doc = ContractDocument::from_json(
            r#"{
            "propositions": { "kR": ["p1", "p1 & p2 -> p3"], "rR": ["p3"], "sP": ["p2"] },
            "schedule": [{"event": "discharge(OtV)"}, {"event": "E^R"}]
        }"#,
        )
        .unwrap();
        let steps = doc.schedule_steps(&doc.network()).unwrap();
        assert_eq!(steps[0].event.as_str(), ids::DISCHARGE_OTV);
        assert_eq!(steps[0].verdict, Some(Verdict::Pass));
        assert_eq!(steps[1].verdict, None);
    }
}
