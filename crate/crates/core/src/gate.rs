//! # Requirement-role gate
//!
//! A proposition holds the role of requirement exactly when
//!
//! 1. the contract defines all seven clauses (the right to request, the
//!    obligations to satisfy and validate, the two remuneration obligations
//!    and the two rights to request remuneration),
//! 2. every role has a party bound to it,
//! 3. the right to request has been fully exercised in the enactment and the
//!    proposition is registered as requested, and
//! 4. the contract is still applicable.
//!
//! The decision never looks at what the proposition says.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{Atom, FormulaSet};
use crate::network::{EnactmentState, Network};
use crate::roles::{Clause, ObligationKind, RightKind, RoleId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Party {
    pub id: String,
    pub display_name: String,
}

impl Party {
    pub fn new(id: &str, display_name: &str) -> Self {
        Party {
            id: id.to_string(),
            display_name: display_name.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Applicability {
    #[default]
    Applicable,
    Terminated,
}

/// A registered request. `until` is recorded but not enforced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Registration {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub until: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateError {
    #[error("cannot request `{0}`: the contract has been terminated")]
    RequestAfterTermination(Atom),
    #[error("termination is final; a contract cannot be reinstated")]
    ReinstateRejected,
    #[error("`{0}` does not occur in the Requester's requirement set")]
    NotInRequirements(Atom),
    #[error("request for `{atom}` rejected by the acceptability policy: {reason}")]
    Unacceptable { atom: Atom, reason: String },
    #[error("party id `{id}` is bound with two different names (`{first}`, `{second}`)")]
    ConflictingParty {
        id: String,
        first: String,
        second: String,
    },
}

/// Lifecycle events accepted by [`ContractDoc::apply_event`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LifecycleEvent {
    Terminate,
    Request { atom: Atom, until: Option<String> },
    Reinstate,
}

impl LifecycleEvent {
    pub fn request(atom: Atom) -> Self {
        LifecycleEvent::Request { atom, until: None }
    }
}

/// Contract-specific rule on which requests are acceptable.
pub trait AcceptabilityPolicy {
    fn check(&self, atom: &Atom, doc: &ContractDoc) -> Result<(), String>;
}

/// Accepts every request.
pub struct AcceptAll;

impl AcceptabilityPolicy for AcceptAll {
    fn check(&self, _: &Atom, _: &ContractDoc) -> Result<(), String> {
        Ok(())
    }
}

impl<F> AcceptabilityPolicy for F
where
    F: Fn(&Atom, &ContractDoc) -> Result<(), String>,
{
    fn check(&self, atom: &Atom, doc: &ContractDoc) -> Result<(), String> {
        self(atom, doc)
    }
}

/// A Requirements Contract and its enactment-independent state.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ContractDoc {
    pub declared_rights: BTreeSet<RightKind>,
    pub declared_obligations: BTreeSet<ObligationKind>,
    bindings: BTreeMap<RoleId, Party>,
    applicability: Applicability,
    requested: BTreeMap<Atom, Registration>,
    /// The Requester's communicated assumptions.
    pub k_r: FormulaSet,
    /// The Requester's communicated requirements.
    pub r_r: FormulaSet,
}

impl ContractDoc {
    pub fn new(k_r: FormulaSet, r_r: FormulaSet) -> Self {
        ContractDoc {
            k_r,
            r_r,
            ..Default::default()
        }
    }

    /// Declares all seven clauses.
    pub fn declare_all(mut self) -> Self {
        self.declared_rights.extend(RightKind::ALL);
        self.declared_obligations.extend(ObligationKind::ALL);
        self
    }

    pub fn bindings(&self) -> &BTreeMap<RoleId, Party> {
        &self.bindings
    }

    /// Binds `party` to `role`. One party may fill several roles, but a
    /// party id must always carry the same name.
    pub fn bind(&mut self, role: RoleId, party: Party) -> Result<(), GateError> {
        if let Some(other) = self
            .bindings
            .iter()
            .find(|(r, p)| **r != role && p.id == party.id && p.display_name != party.display_name)
        {
            return Err(GateError::ConflictingParty {
                id: party.id,
                first: other.1.display_name.clone(),
                second: party.display_name,
            });
        }
        self.bindings.insert(role, party);
        Ok(())
    }

    pub fn applicability(&self) -> Applicability {
        self.applicability
    }

    pub fn requested(&self) -> &BTreeMap<Atom, Registration> {
        &self.requested
    }

    pub fn is_requested(&self, p: &Atom) -> bool {
        self.requested.contains_key(p)
    }

    pub fn apply_event(&self, e: LifecycleEvent) -> Result<ContractDoc, GateError> {
        self.apply_event_with(e, &AcceptAll)
    }

    /// Returns the document after `e`. Requests must name an atom of the
    /// Requester's requirements and pass `policy`; termination is final.
    pub fn apply_event_with(
        &self,
        e: LifecycleEvent,
        policy: &dyn AcceptabilityPolicy,
    ) -> Result<ContractDoc, GateError> {
        let mut next = self.clone();
        match e {
            LifecycleEvent::Terminate => next.applicability = Applicability::Terminated,
            LifecycleEvent::Reinstate => return Err(GateError::ReinstateRejected),
            LifecycleEvent::Request { atom, until } => {
                if self.applicability == Applicability::Terminated {
                    return Err(GateError::RequestAfterTermination(atom));
                }
                if !self.r_r.atoms().contains(&atom) {
                    return Err(GateError::NotInRequirements(atom));
                }
                policy
                    .check(&atom, self)
                    .map_err(|reason| GateError::Unacceptable {
                        atom: atom.clone(),
                        reason,
                    })?;
                next.requested.insert(atom, Registration { until });
            }
        }
        Ok(next)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Condition {
    #[serde(rename = "C1_defines")]
    C1Defines,
    #[serde(rename = "C2_enacted")]
    C2Enacted,
    #[serde(rename = "C3_exercised")]
    C3Exercised,
    Applicability,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::C1Defines => "C1_defines",
            Condition::C2Enacted => "C2_enacted",
            Condition::C3Exercised => "C3_exercised",
            Condition::Applicability => "Applicability",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub passed: bool,
    pub detail: String,
}

/// The contract defines all seven clauses.
pub fn check_defines(c: &ContractDoc) -> ConditionReport {
    let missing: Vec<Clause> = RightKind::ALL
        .into_iter()
        .filter(|r| !c.declared_rights.contains(r))
        .map(Clause::Right)
        .chain(
            ObligationKind::ALL
                .into_iter()
                .filter(|o| !c.declared_obligations.contains(o))
                .map(Clause::Obligation),
        )
        .collect();
    let detail = if missing.is_empty() {
        "all seven clauses defined".to_string()
    } else {
        let names: Vec<String> = missing
            .iter()
            .map(|m| {
                let clause = match m {
                    Clause::Right(r) => r.clause(),
                    Clause::Obligation(o) => o.clause(),
                };
                format!("{m} ({clause})")
            })
            .collect();
        format!("missing {}", names.join(", "))
    };
    ConditionReport {
        condition: Condition::C1Defines,
        passed: missing.is_empty(),
        detail,
    }
}

/// Every role has a party; parties may fill several roles.
pub fn check_enacted(c: &ContractDoc) -> ConditionReport {
    let unbound: Vec<&str> = RoleId::ALL
        .into_iter()
        .filter(|r| !c.bindings.contains_key(r))
        .map(RoleId::as_str)
        .collect();
    ConditionReport {
        condition: Condition::C2Enacted,
        passed: unbound.is_empty(),
        detail: if unbound.is_empty() {
            "every role is filled".to_string()
        } else {
            format!("no party for {}", unbound.join(", "))
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoleStatus {
    pub proposition: Atom,
    pub granted: bool,
    pub failed_conditions: Vec<Condition>,
    pub explanation: Vec<ConditionReport>,
}

impl fmt::Display for RoleStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.granted {
            write!(f, "{} GRANTED", self.proposition)
        } else {
            let names: Vec<String> = self
                .failed_conditions
                .iter()
                .map(|c| c.to_string())
                .collect();
            write!(f, "{} DENIED({})", self.proposition, names.join(","))
        }
    }
}

/// Decides whether `p` currently holds the role of requirement.
pub fn requirement_status(
    p: &Atom,
    c: &ContractDoc,
    net: &Network,
    st: &EnactmentState,
) -> RoleStatus {
    let defines = check_defines(c);
    let enacted = check_enacted(c);

    let exercised = net.retry_event().is_some_and(|i| st.is_fired(i));
    let registered = c.is_requested(p);
    let mut gaps = Vec::new();
    if !exercised {
        gaps.push("the right to request has not been fully exercised");
    }
    if !registered {
        gaps.push("the proposition has not been requested");
    }
    let exercise = ConditionReport {
        condition: Condition::C3Exercised,
        passed: exercised && registered,
        detail: if gaps.is_empty() {
            format!("`{p}` requested under the exercised right to request")
        } else {
            gaps.join("; ")
        },
    };

    let applicable = c.applicability == Applicability::Applicable;
    let applicability = ConditionReport {
        condition: Condition::Applicability,
        passed: applicable,
        detail: if applicable {
            "contract applicable".to_string()
        } else {
            "contract terminated".to_string()
        },
    };

    let explanation = vec![defines, enacted, exercise, applicability];
    let failed_conditions: Vec<Condition> = explanation
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.condition)
        .collect();
    RoleStatus {
        proposition: p.clone(),
        granted: failed_conditions.is_empty(),
        failed_conditions,
        explanation,
    }
}
