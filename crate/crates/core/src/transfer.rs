//! Imperfect transfer of assumption, requirement and specification sets
//! between roles, and validation from the Evaluator's own interpretation.

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::logic::{check_default_rp, Formula, FormulaSet, RpInstance, RpVerdict};
use crate::roles::RoleId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error("the Requester holds no specification or product")]
    RequesterOutputs,
    #[error("`{0}` is both dropped and added")]
    DropAndAdd(Formula),
    #[error("`{0}` is both dropped and substituted")]
    DropAndSubstitute(Formula),
    #[error("validation must run on Evaluator-owned sets, not {0}")]
    NotEvaluator(RoleId),
    #[error("the Evaluator's interpretation has no specification set")]
    MissingSpecification,
}

/// One role's view of the contract's proposition sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArtifactSets {
    owner: RoleId,
    pub k: FormulaSet,
    pub r: FormulaSet,
    s: Option<FormulaSet>,
    product: Option<String>,
}

impl ArtifactSets {
    /// The Requester's assumptions and requirements.
    pub fn requester(k: FormulaSet, r: FormulaSet) -> Self {
        ArtifactSets {
            owner: RoleId::Requester,
            k,
            r,
            s: None,
            product: None,
        }
    }

    /// Sets of a role downstream of the Requester. Only the Maker and
    /// Evaluator may carry a specification and a product marker.
    pub fn new(
        owner: RoleId,
        k: FormulaSet,
        r: FormulaSet,
        s: Option<FormulaSet>,
        product: Option<String>,
    ) -> Result<Self, TransferError> {
        if owner == RoleId::Requester && (s.is_some() || product.is_some()) {
            return Err(TransferError::RequesterOutputs);
        }
        Ok(ArtifactSets {
            owner,
            k,
            r,
            s,
            product,
        })
    }

    pub fn owner(&self) -> RoleId {
        self.owner
    }

    pub fn s(&self) -> Option<&FormulaSet> {
        self.s.as_ref()
    }

    pub fn product(&self) -> Option<&str> {
        self.product.as_deref()
    }

    /// Replaces the specification; ignored for the Requester.
    pub fn set_specification(&mut self, s: FormulaSet) {
        if self.owner != RoleId::Requester {
            self.s = Some(s);
        }
    }

    pub fn set_product(&mut self, product: String) {
        if self.owner != RoleId::Requester {
            self.product = Some(product);
        }
    }
}

/// Deterministic distortion applied when sets pass from one role to another.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TransferMap {
    drops: FormulaSet,
    #[serde(serialize_with = "ser_substitutions")]
    substitutions: IndexMap<Formula, Formula>,
    additions: FormulaSet,
}

fn ser_substitutions<S: serde::Serializer>(
    m: &IndexMap<Formula, Formula>,
    s: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        from: &'a Formula,
        to: &'a Formula,
    }
    s.collect_seq(m.iter().map(|(from, to)| Entry { from, to }))
}

impl TransferMap {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(
        drops: FormulaSet,
        substitutions: IndexMap<Formula, Formula>,
        additions: FormulaSet,
    ) -> Result<Self, TransferError> {
        if let Some(f) = drops.iter().find(|f| additions.contains(f)) {
            return Err(TransferError::DropAndAdd(f.clone()));
        }
        if let Some(f) = substitutions.keys().find(|f| drops.contains(f)) {
            return Err(TransferError::DropAndSubstitute(f.clone()));
        }
        Ok(TransferMap {
            drops,
            substitutions,
            additions,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.drops.is_empty() && self.substitutions.is_empty() && self.additions.is_empty()
    }

    fn map_set(&self, set: &FormulaSet) -> FormulaSet {
        set.iter()
            .filter(|f| !self.drops.contains(f))
            .map(|f| self.substitutions.get(f).unwrap_or(f).clone())
            .collect()
    }
}

/// Applies `t` elementwise to `k`, `r` and `s`, then adds `t`'s additions
/// to `k`. Transferring to the Requester discards `s` and the product.
pub fn apply_transfer(src: &ArtifactSets, t: &TransferMap, new_owner: RoleId) -> ArtifactSets {
    let mut k = t.map_set(&src.k);
    for a in t.additions.iter() {
        k.insert(a.clone());
    }
    let downstream = new_owner != RoleId::Requester;
    ArtifactSets {
        owner: new_owner,
        k,
        r: t.map_set(&src.r),
        s: src.s.as_ref().filter(|_| downstream).map(|s| t.map_set(s)),
        product: src.product.clone().filter(|_| downstream),
    }
}

/// Size of the symmetric differences of `k` and `r`, plus that of `s` when
/// both sides have one.
pub fn divergence(a: &ArtifactSets, b: &ArtifactSets) -> usize {
    let mut d = a.k.symmetric_difference_len(&b.k) + a.r.symmetric_difference_len(&b.r);
    if let (Some(sa), Some(sb)) = (&a.s, &b.s) {
        d += sa.symmetric_difference_len(sb);
    }
    d
}

/// Runs the requirements check on the Evaluator's own interpretation.
pub fn validate_as_evaluator(ev: &ArtifactSets) -> Result<RpVerdict, TransferError> {
    if ev.owner != RoleId::Evaluator {
        return Err(TransferError::NotEvaluator(ev.owner));
    }
    let s = ev.s.as_ref().ok_or(TransferError::MissingSpecification)?;
    Ok(check_default_rp(&RpInstance {
        k: ev.k.clone(),
        s: s.clone(),
        r: ev.r.clone(),
    }))
}
