//! Roles, rights and obligations of a Requirements Contract.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoleId {
    /// Expects value from having requirements satisfied.
    Requester,
    /// Makes the product meant to satisfy the requirements.
    Maker,
    /// Evaluates whether the product satisfies the requirements.
    Evaluator,
}

impl RoleId {
    pub const ALL: [RoleId; 3] = [RoleId::Requester, RoleId::Maker, RoleId::Evaluator];

    pub fn as_str(self) -> &'static str {
        match self {
            RoleId::Requester => "requester",
            RoleId::Maker => "maker",
            RoleId::Evaluator => "evaluator",
        }
    }
}

impl fmt::Display for RoleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RoleId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RoleId::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown role `{s}` (expected requester, maker or evaluator)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RightKind {
    /// Right to give propositions the role of requirements.
    RtR,
    /// Right to request remuneration for satisfying requirements.
    RtRS,
    /// Right to request remuneration for validating requirements.
    RtRV,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ObligationKind {
    /// Obligation to satisfy requirements.
    OtR,
    /// Obligation to validate whether a product satisfies requirements.
    OtV,
    /// Obligation to remunerate satisfaction.
    OtRS,
    /// Obligation to remunerate validation.
    OtRV,
}

impl RightKind {
    pub const ALL: [RightKind; 3] = [RightKind::RtR, RightKind::RtRS, RightKind::RtRV];

    /// Clause label in the contract definition (1a-1g).
    pub fn clause(self) -> &'static str {
        match self {
            RightKind::RtR => "1a",
            RightKind::RtRS => "1f",
            RightKind::RtRV => "1g",
        }
    }
}

impl ObligationKind {
    pub const ALL: [ObligationKind; 4] = [
        ObligationKind::OtR,
        ObligationKind::OtV,
        ObligationKind::OtRS,
        ObligationKind::OtRV,
    ];

    pub fn clause(self) -> &'static str {
        match self {
            ObligationKind::OtR => "1b",
            ObligationKind::OtV => "1c",
            ObligationKind::OtRS => "1d",
            ObligationKind::OtRV => "1e",
        }
    }
}

impl fmt::Display for RightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for ObligationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Either a right or an obligation; the object of an acceptance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Clause {
    Right(RightKind),
    Obligation(ObligationKind),
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::Right(r) => write!(f, "{r}"),
            Clause::Obligation(o) => write!(f, "{o}"),
        }
    }
}
