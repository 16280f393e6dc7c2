//! # Interest alignment
//!
//! Expected value `E = E(B) - E(C)` per role, entry viability, the budget
//! cap `E(B^P) + E(B^V) <= E(C^R)`, the marginal reading of a change
//! `(ΔE(B), ΔE(C))`, the eight interest cases, and the Requester/Maker/
//! Evaluator conflict-of-interest pattern.
//!
//! All arithmetic is on exact rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::roles::RoleId;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignError {
    #[error("`{0}` is not a rational; write an integer or \"n/d\"")]
    BadRational(String),
    #[error("economics for role {0} are missing")]
    MissingRole(RoleId),
    #[error("expected cost for role {0} is negative")]
    NegativeCost(RoleId),
    #[error("change in expected cost is zero{}", role_suffix(.0))]
    ZeroCostChange(Option<RoleId>),
    #[error("coupled rewrite is undefined: Δ(E(B^P) + E(B^V)) is zero")]
    ZeroCoupledDenominator,
}

fn role_suffix(r: &Option<RoleId>) -> String {
    r.map(|r| format!(" for role {r}")).unwrap_or_default()
}

/// Parses `"n"`, `"-n"` or `"n/d"`.
pub fn parse_rational(text: &str) -> Result<Rational, AlignError> {
    let bad = || AlignError::BadRational(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `"n"` for integers, `"n/d"` otherwise, always in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

fn ser_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&format_rational(r)),
        None => s.serialize_none(),
    }
}

fn ser_rational_map<S: Serializer>(
    m: &BTreeMap<RoleId, Rational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k, format_rational(v))))
}

/// Expected benefit and cost of one role.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expectation {
    #[serde(serialize_with = "ser_rational")]
    pub benefit: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub cost: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EconProfile(BTreeMap<RoleId, Expectation>);

impl EconProfile {
    /// Requires all three roles and non-negative costs.
    pub fn new(entries: BTreeMap<RoleId, Expectation>) -> Result<Self, AlignError> {
        for role in RoleId::ALL {
            let e = entries.get(&role).ok_or(AlignError::MissingRole(role))?;
            if e.cost.is_negative() {
                return Err(AlignError::NegativeCost(role));
            }
        }
        Ok(EconProfile(entries))
    }

    /// Profile from `(benefit, cost)` pairs in requester, maker, evaluator order.
    pub fn from_pairs(pairs: [(Rational, Rational); 3]) -> Result<Self, AlignError> {
        Self::new(
            RoleId::ALL
                .into_iter()
                .zip(pairs)
                .map(|(r, (benefit, cost))| (r, Expectation { benefit, cost }))
                .collect(),
        )
    }

    pub fn get(&self, role: RoleId) -> &Expectation {
        &self.0[&role]
    }
}

pub fn expected_value(p: &EconProfile, role: RoleId) -> Rational {
    let e = p.get(role);
    &e.benefit - &e.cost
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Viability {
    pub per_role: BTreeMap<RoleId, bool>,
    /// Every role viable.
    pub entry_feasible: bool,
}

/// A role is viable iff its expected benefit strictly exceeds its expected cost.
pub fn viability(p: &EconProfile) -> Viability {
    let per_role: BTreeMap<RoleId, bool> = RoleId::ALL
        .into_iter()
        .map(|r| (r, p.get(r).benefit > p.get(r).cost))
        .collect();
    let entry_feasible = per_role.values().all(|&v| v);
    Viability {
        per_role,
        entry_feasible,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BudgetVerdict {
    pub passes: bool,
    /// `E(C^R) - E(B^P) - E(B^V)`.
    #[serde(serialize_with = "ser_rational")]
    pub slack: Rational,
}

/// Maker and Evaluator benefits are capped by the Requester's cost.
pub fn budget_check(p: &EconProfile) -> BudgetVerdict {
    let slack = &p.get(RoleId::Requester).cost
        - &p.get(RoleId::Maker).benefit
        - &p.get(RoleId::Evaluator).benefit;
    BudgetVerdict {
        passes: !slack.is_negative(),
        slack,
    }
}

/// A marginal change in expected benefit and expected cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Delta {
    #[serde(serialize_with = "ser_rational")]
    pub db: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub dc: Rational,
}

impl Delta {
    pub fn new(db: Rational, dc: Rational) -> Self {
        Delta { db, dc }
    }

    pub fn ints(db: i64, dc: i64) -> Self {
        Delta::new(rat(db, 1), rat(dc, 1))
    }

    /// `ΔE(B) / ΔE(C)`, undefined when the cost does not change.
    pub fn ratio(&self) -> Option<Rational> {
        (!self.dc.is_zero()).then(|| &self.db / &self.dc)
    }

    /// Change in expected value, `ΔB - ΔC`.
    pub fn dv(&self) -> Rational {
        &self.db - &self.dc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MarginalSituation {
    /// Ratio above one: taking on more cost gains more benefit.
    GainDominant,
    /// Ratio in `[0, 1)`: benefit grows slower than cost.
    CostDominant,
    /// Ratio exactly one.
    Balanced,
    /// Ratio below zero.
    NegativeRatio,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarginalReading {
    pub situation: MarginalSituation,
    #[serde(serialize_with = "ser_rational")]
    pub ratio: Rational,
    /// Ratio exactly zero: the change in cost brings no change in benefit.
    pub zero_benefit: bool,
}

pub fn marginal_situation(d: &Delta) -> Result<MarginalReading, AlignError> {
    let ratio = d.ratio().ok_or(AlignError::ZeroCostChange(None))?;
    let one = Rational::one();
    let situation = if ratio.is_negative() {
        MarginalSituation::NegativeRatio
    } else {
        match ratio.cmp(&one) {
            Ordering::Greater => MarginalSituation::GainDominant,
            Ordering::Equal => MarginalSituation::Balanced,
            Ordering::Less => MarginalSituation::CostDominant,
        }
    };
    Ok(MarginalReading {
        situation,
        zero_benefit: ratio.is_zero(),
        ratio,
    })
}

/// Region of the `(ΔC, ΔB)` plane, labelled clockwise from A (first
/// quadrant, above the diagonal).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum InterestCase {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    /// No change at all.
    Stationary,
    /// On an axis or on one of the diagonals `ΔB = ±ΔC`.
    OnAxisOrDiagonal,
}

impl InterestCase {
    /// The cases in which a change raises expected value.
    pub const VALUE_INCREASING: [InterestCase; 4] = [
        InterestCase::A,
        InterestCase::F,
        InterestCase::G,
        InterestCase::H,
    ];
    pub const VALUE_DECREASING: [InterestCase; 4] = [
        InterestCase::B,
        InterestCase::C,
        InterestCase::D,
        InterestCase::E,
    ];

    pub fn is_boundary(self) -> bool {
        matches!(
            self,
            InterestCase::Stationary | InterestCase::OnAxisOrDiagonal
        )
    }
}

impl fmt::Display for InterestCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterestReading {
    pub case: InterestCase,
    #[serde(serialize_with = "ser_rational")]
    pub dv: Rational,
    /// Sign of `dv`: -1, 0 or 1.
    pub dv_sign: i8,
}

pub fn interest_case(d: &Delta) -> InterestReading {
    let (db, dc) = (&d.db, &d.dc);
    let case = if db.is_zero() && dc.is_zero() {
        InterestCase::Stationary
    } else if db.is_zero() || dc.is_zero() || db == dc || *db == -dc {
        InterestCase::OnAxisOrDiagonal
    } else {
        let (up, right) = (db.is_positive(), dc.is_positive());
        let steeper = db.abs() > dc.abs();
        match (right, up, steeper) {
            (true, true, true) => InterestCase::A,
            (true, true, false) => InterestCase::B,
            (true, false, false) => InterestCase::C,
            (true, false, true) => InterestCase::D,
            (false, false, true) => InterestCase::E,
            (false, false, false) => InterestCase::F,
            (false, true, false) => InterestCase::G,
            (false, true, true) => InterestCase::H,
        }
    };
    let dv = d.dv();
    let dv_sign = match dv.cmp(&Rational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    };
    InterestReading { case, dv, dv_sign }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConflictReport {
    /// `ΔE(B) / ΔE(C)` per role.
    #[serde(serialize_with = "ser_rational_map")]
    pub ratios: BTreeMap<RoleId, Rational>,
    /// `ΔE(B^R) / Δ(E(B^P) + E(B^V))`, present in coupled mode.
    #[serde(serialize_with = "ser_opt_rational")]
    pub coupled_requester_ratio: Option<Rational>,
    /// Pattern on the raw ratios.
    pub raw_conflict: bool,
    /// Pattern on the ratios in force (coupled Requester ratio when coupled).
    pub conflict: bool,
}

fn conflict_pattern(requester: &Rational, maker: &Rational, evaluator: &Rational) -> bool {
    let one = Rational::one();
    *requester < one && *maker > one && *evaluator > one
}

/// Flags the pattern where the Requester's ratio is below one while the
/// Maker's and Evaluator's are above one. With `coupled`, the Requester's
/// cost change is replaced by the change in Maker plus Evaluator benefits,
/// which the budget cap ties it to.
pub fn conflict_scan(
    deltas: &BTreeMap<RoleId, Delta>,
    coupled: bool,
) -> Result<ConflictReport, AlignError> {
    let mut ratios = BTreeMap::new();
    for role in RoleId::ALL {
        let d = deltas.get(&role).ok_or(AlignError::MissingRole(role))?;
        let r = d.ratio().ok_or(AlignError::ZeroCostChange(Some(role)))?;
        ratios.insert(role, r);
    }
    let raw_conflict = conflict_pattern(
        &ratios[&RoleId::Requester],
        &ratios[&RoleId::Maker],
        &ratios[&RoleId::Evaluator],
    );
    let coupled_requester_ratio = if coupled {
        let denom = &deltas[&RoleId::Maker].db + &deltas[&RoleId::Evaluator].db;
        if denom.is_zero() {
            return Err(AlignError::ZeroCoupledDenominator);
        }
        Some(&deltas[&RoleId::Requester].db / denom)
    } else {
        None
    };
    let conflict = match &coupled_requester_ratio {
        Some(r) => conflict_pattern(r, &ratios[&RoleId::Maker], &ratios[&RoleId::Evaluator]),
        None => raw_conflict,
    };
    Ok(ConflictReport {
        ratios,
        coupled_requester_ratio,
        raw_conflict,
        conflict,
    })
}

/// Actual value realised per role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizedValue(pub BTreeMap<RoleId, Rational>);

/// `V - E` per role for the roles present in `realized`; zero where actual
/// value met expectation.
pub fn realization_gap(p: &EconProfile, realized: &RealizedValue) -> BTreeMap<RoleId, Rational> {
    realized
        .0
        .iter()
        .map(|(&r, v)| (r, v - expected_value(p, r)))
        .collect()
}

/// Modelling assumptions behind the report, stated rather than enforced.
pub const ASSUMPTIONS: [&str; 4] = [
    "a party enters only if its expected benefits outweigh its expected costs",
    "each party decides so as to maximise the value it actually receives",
    "each party acts to keep actual value close to expected value",
    "when entering, a party maximises expected value to maximise actual value",
];
