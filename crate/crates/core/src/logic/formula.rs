//! Propositional atoms, formulas and valuations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::parser::{parse_formula, ParseError};

/// Words of the formula grammar that cannot be used as atom names.
pub const RESERVED_WORDS: [&str; 3] = ["not", "true", "false"];

/// A propositional variable, identified by its name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtomError {
    #[error("atom name is empty")]
    Empty,
    #[error("atom name `{0}` must match [A-Za-z_][A-Za-z0-9_]*")]
    BadCharacter(String),
    #[error("`{0}` is a reserved word and cannot name an atom")]
    Reserved(String),
}

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Self, AtomError> {
        let name = name.into();
        let mut chars = name.chars();
        match chars.next() {
            None => return Err(AtomError::Empty),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            Some(_) => return Err(AtomError::BadCharacter(name)),
        }
        if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(AtomError::BadCharacter(name));
        }
        if RESERVED_WORDS.contains(&name.as_str()) {
            return Err(AtomError::Reserved(name));
        }
        Ok(Atom(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Atom {
    type Err = AtomError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Atom::new(s)
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Atom::new(s).map_err(serde::de::Error::custom)
    }
}

/// Propositional formula tree.
///
/// `And` and `Or` are n-ary with at least two operands. A chain such as
/// `a & b & c` parses to a single three-operand `And`; a parenthesised
/// `(a & b) & c` stays nested, so structural equality follows the text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

/// Truth assignment to atoms.
pub type Valuation = BTreeMap<Atom, bool>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("atom `{0}` has no value in the assignment")]
pub struct UnassignedAtom(pub Atom);

impl Formula {
    /// Builds an atom leaf. Panics on an invalid name; use [`Atom::new`] for
    /// untrusted input.
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name).expect("valid atom name"))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Panics if fewer than two operands are given.
    pub fn and(operands: Vec<Formula>) -> Formula {
        assert!(operands.len() >= 2, "And needs at least two operands");
        Formula::And(operands)
    }

    /// Panics if fewer than two operands are given.
    pub fn or(operands: Vec<Formula>) -> Formula {
        assert!(operands.len() >= 2, "Or needs at least two operands");
        Formula::Or(operands)
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Iff(Box::new(lhs), Box::new(rhs))
    }

    /// Collects every atom occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(x) => x.collect_atoms(out),
            Formula::And(xs) | Formula::Or(xs) => xs.iter().for_each(|x| x.collect_atoms(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Standard truth-functional evaluation.
    pub fn eval(&self, v: &Valuation) -> Result<bool, UnassignedAtom> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => *v.get(a).ok_or_else(|| UnassignedAtom(a.clone()))?,
            Formula::Not(x) => !x.eval(v)?,
            Formula::And(xs) => {
                // evaluate every operand so a missing atom is always reported
                let mut all = true;
                for x in xs {
                    all &= x.eval(v)?;
                }
                all
            }
            Formula::Or(xs) => {
                let mut any = false;
                for x in xs {
                    any |= x.eval(v)?;
                }
                any
            }
            Formula::Implies(a, b) => {
                let (a, b) = (a.eval(v)?, b.eval(v)?);
                !a || b
            }
            Formula::Iff(a, b) => a.eval(v)? == b.eval(v)?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(_) => 3,
            Formula::And(_) => 4,
            Formula::Not(_) => 5,
            Formula::True | Formula::False | Formula::Atom(_) => 6,
        }
    }

    fn write_operand(f: &mut fmt::Formatter<'_>, operand: &Formula, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({operand})")
        } else {
            write!(f, "{operand}")
        }
    }
}

/// Prints with the minimal parentheses needed for [`parse_formula`] to
/// rebuild the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = self.precedence();
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(x) => {
                f.write_str("!")?;
                Self::write_operand(f, x, x.precedence() < prec)
            }
            Formula::And(xs) | Formula::Or(xs) => {
                let op = if matches!(self, Formula::And(_)) {
                    " & "
                } else {
                    " | "
                };
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    Self::write_operand(f, x, x.precedence() <= prec)?;
                }
                Ok(())
            }
            Formula::Implies(a, b) => {
                Self::write_operand(f, a, a.precedence() <= prec)?;
                f.write_str(" -> ")?;
                Self::write_operand(f, b, b.precedence() < prec)
            }
            Formula::Iff(a, b) => {
                Self::write_operand(f, a, a.precedence() < prec)?;
                f.write_str(" <-> ")?;
                Self::write_operand(f, b, b.precedence() <= prec)
            }
        }
    }
}

impl FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_formula(&s).map_err(|e| serde::de::Error::custom(format!("formula `{s}`: {e}")))
    }
}

/// Insertion-ordered, duplicate-free set of formulas.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FormulaSet(IndexSet<Formula>);

impl FormulaSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false if an equal formula was already present.
    pub fn insert(&mut self, f: Formula) -> bool {
        self.0.insert(f)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.contains(f)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.0.iter()
    }

    /// Members of `self` followed by members of `other` not already present.
    pub fn union(&self, other: &FormulaSet) -> FormulaSet {
        self.iter().chain(other.iter()).cloned().collect()
    }

    pub fn symmetric_difference_len(&self, other: &FormulaSet) -> usize {
        self.0.symmetric_difference(&other.0).count()
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for f in self.iter() {
            f.collect_atoms(&mut out);
        }
        out
    }

    /// Parses each string with the formula grammar.
    pub fn parse_all<S: AsRef<str>>(texts: &[S]) -> Result<FormulaSet, ParseError> {
        texts.iter().map(|t| parse_formula(t.as_ref())).collect()
    }
}

impl FromIterator<Formula> for FormulaSet {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        FormulaSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a FormulaSet {
    type Item = &'a Formula;
    type IntoIter = indexmap::set::Iter<'a, Formula>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Serialize for FormulaSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for FormulaSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Vec::<Formula>::deserialize(d)?.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn atom_names() {
        assert!(Atom::new("p1").is_ok());
        assert!(Atom::new("_x9").is_ok());
        assert_eq!(Atom::new(""), Err(AtomError::Empty));
        assert!(matches!(Atom::new("1p"), Err(AtomError::BadCharacter(_))));
        assert!(matches!(Atom::new("p-1"), Err(AtomError::BadCharacter(_))));
        assert!(matches!(Atom::new("true"), Err(AtomError::Reserved(_))));
        assert_eq!(Atom::new("q").unwrap(), Atom::new("q").unwrap());
    }

    #[test]
    fn eval_examples() {
        let v: Valuation = [
            (Atom::new("a").unwrap(), false),
            (Atom::new("b").unwrap(), false),
        ]
        .into_iter()
        .collect();
        assert!(Formula::implies(a("a"), a("b")).eval(&v).unwrap());

        let v: Valuation = [
            (Atom::new("a").unwrap(), true),
            (Atom::new("b").unwrap(), false),
        ]
        .into_iter()
        .collect();
        assert!(!Formula::and(vec![a("a"), a("b")]).eval(&v).unwrap());

        for val in [true, false] {
            let v: Valuation = [(Atom::new("a").unwrap(), val)].into_iter().collect();
            assert!(Formula::iff(a("a"), a("a")).eval(&v).unwrap());
        }
    }

    #[test]
    fn eval_unassigned_atom() {
        let v: Valuation = [(Atom::new("a").unwrap(), true)].into_iter().collect();
        let err = Formula::or(vec![a("a"), a("b")]).eval(&v).unwrap_err();
        assert_eq!(err, UnassignedAtom(Atom::new("b").unwrap()));
    }

    #[test]
    fn printer_uses_minimal_parentheses() {
        let f = Formula::implies(Formula::and(vec![a("p1"), a("p2")]), a("p3"));
        assert_eq!(f.to_string(), "p1 & p2 -> p3");
        let f = Formula::implies(Formula::implies(a("a"), a("b")), a("c"));
        assert_eq!(f.to_string(), "(a -> b) -> c");
        let f = Formula::and(vec![Formula::and(vec![a("a"), a("b")]), a("c")]);
        assert_eq!(f.to_string(), "(a & b) & c");
        let f = Formula::not(Formula::not(Formula::or(vec![a("a"), Formula::True])));
        assert_eq!(f.to_string(), "!!(a | true)");
    }

    #[test]
    fn formula_set_is_duplicate_free_and_ordered() {
        let mut s = FormulaSet::new();
        assert!(s.insert(a("b")));
        assert!(s.insert(a("a")));
        assert!(!s.insert(a("b")));
        let names: Vec<String> = s.iter().map(|f| f.to_string()).collect();
        assert_eq!(names, ["b", "a"]);
    }
}
