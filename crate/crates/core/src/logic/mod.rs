//! Propositional language, satisfiability and entailment.

mod cnf;
mod formula;
mod parser;
mod rp;
mod solver;

pub use cnf::{clausify, Clause, Cnf, Lit};
pub use formula::{
    Atom, AtomError, Formula, FormulaSet, UnassignedAtom, Valuation, RESERVED_WORDS,
};
pub use parser::{parse_formula, ParseError};
pub use rp::{check_default_rp, RpInstance, RpNote, RpVerdict};
pub use solver::{entails, is_satisfiable, solve_cnf, Entailment, SatResult};
