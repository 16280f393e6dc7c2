//! The Default Requirements Problem check: given domain knowledge `K`, a
//! specification `S` and requirements `R`, decide whether `K, S ⊢ R` and
//! whether `K ∪ S` is consistent.

use serde::Serialize;

use super::formula::{FormulaSet, Valuation};
use super::solver::{entails, is_satisfiable};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RpInstance {
    pub k: FormulaSet,
    pub s: FormulaSet,
    pub r: FormulaSet,
}

/// Diagnostic attached to a verdict without changing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RpNote {
    /// `R` is empty, so entailment holds trivially.
    EmptyRequirements,
    /// `K ∪ S` is inconsistent, so the entailment holds for any `R`.
    VacuousEntailment,
    /// Entailment only covers relationships written into the formulas;
    /// what the atoms are about is not checked.
    FormalOnly,
}

impl RpNote {
    pub fn describe(self) -> &'static str {
        match self {
            RpNote::EmptyRequirements => "no requirements given; entailment holds trivially",
            RpNote::VacuousEntailment => {
                "domain knowledge and specification are inconsistent; the entailment is vacuous"
            }
            RpNote::FormalOnly => {
                "entailment rests only on the formalised relationships between atoms, not on what they denote"
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RpVerdict {
    pub entails: bool,
    pub consistent: bool,
    /// Index into `R` of the first requirement that does not follow.
    pub failing_requirement: Option<usize>,
    /// Satisfies `K ∪ S` and falsifies the failing requirement.
    pub countermodel: Option<Valuation>,
    /// Satisfies every member of `K ∪ S`.
    pub model: Option<Valuation>,
    pub notes: Vec<RpNote>,
}

impl RpVerdict {
    /// Both conditions hold.
    pub fn passes(&self) -> bool {
        self.entails && self.consistent
    }

    /// The countermodel when entailment fails, otherwise the model of `K ∪ S`.
    pub fn witness(&self) -> Option<&Valuation> {
        self.countermodel.as_ref().or(self.model.as_ref())
    }
}

/// Runs the entailment and the consistency check independently.
pub fn check_default_rp(inst: &RpInstance) -> RpVerdict {
    let premises = inst.k.union(&inst.s);
    let entailment = entails(&premises, &inst.r);
    let sat = is_satisfiable(&premises);

    let mut notes = vec![RpNote::FormalOnly];
    if inst.r.is_empty() {
        notes.push(RpNote::EmptyRequirements);
    }
    if entailment.holds && !sat.satisfiable && !inst.r.is_empty() {
        notes.push(RpNote::VacuousEntailment);
    }
    RpVerdict {
        entails: entailment.holds,
        consistent: sat.satisfiable,
        failing_requirement: entailment.failing,
        countermodel: entailment.countermodel,
        model: sat.model,
        notes,
    }
}
