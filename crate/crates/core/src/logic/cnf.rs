//! Tseitin clausification.
//!
//! Source atoms get the first variable indices, in name order; every
//! compound subformula gets a fresh auxiliary variable defined by a full
//! equivalence. Auxiliary variables never leave this module's callers.

use std::collections::BTreeMap;

use super::formula::{Atom, Formula};

/// A literal over variable `var`; `positive == false` is the negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Lit {
        Lit {
            var,
            positive: false,
        }
    }

    pub fn negate(self) -> Lit {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }
}

pub type Clause = Vec<Lit>;

#[derive(Debug, Clone, Default)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
    /// `atoms[i]` is the atom behind variable `i`, for `i < atoms.len()`.
    pub atoms: Vec<Atom>,
}

pub struct Encoder {
    cnf: Cnf,
    atom_vars: BTreeMap<Atom, usize>,
    true_var: Option<usize>,
}

impl Encoder {
    /// Reserves variables for every atom in `formulas` before any auxiliary.
    pub fn new<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut names = std::collections::BTreeSet::new();
        for f in formulas {
            f.collect_atoms(&mut names);
        }
        let atoms: Vec<Atom> = names.into_iter().collect();
        let atom_vars = atoms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        Encoder {
            cnf: Cnf {
                num_vars: atoms.len(),
                clauses: Vec::new(),
                atoms,
            },
            atom_vars,
            true_var: None,
        }
    }

    fn fresh(&mut self) -> usize {
        let v = self.cnf.num_vars;
        self.cnf.num_vars += 1;
        v
    }

    fn constant_true(&mut self) -> Lit {
        let v = match self.true_var {
            Some(v) => v,
            None => {
                let v = self.fresh();
                self.cnf.clauses.push(vec![Lit::pos(v)]);
                self.true_var = Some(v);
                v
            }
        };
        Lit::pos(v)
    }

    /// Returns a literal equivalent to `f` under the emitted definitions.
    fn encode(&mut self, f: &Formula) -> Lit {
        match f {
            Formula::True => self.constant_true(),
            Formula::False => self.constant_true().negate(),
            Formula::Atom(a) => Lit::pos(self.atom_vars[a]),
            Formula::Not(x) => self.encode(x).negate(),
            Formula::And(xs) => {
                let lits: Vec<Lit> = xs.iter().map(|x| self.encode(x)).collect();
                let v = Lit::pos(self.fresh());
                // v -> x_i
                for &l in &lits {
                    self.cnf.clauses.push(vec![v.negate(), l]);
                }
                // (x_1 & .. & x_n) -> v
                let mut back: Clause = lits.iter().map(|l| l.negate()).collect();
                back.push(v);
                self.cnf.clauses.push(back);
                v
            }
            Formula::Or(xs) => {
                let lits: Vec<Lit> = xs.iter().map(|x| self.encode(x)).collect();
                let v = Lit::pos(self.fresh());
                for &l in &lits {
                    self.cnf.clauses.push(vec![l.negate(), v]);
                }
                let mut fwd: Clause = lits;
                fwd.push(v.negate());
                self.cnf.clauses.push(fwd);
                v
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                let v = Lit::pos(self.fresh());
                self.cnf.clauses.push(vec![v.negate(), a.negate(), b]);
                self.cnf.clauses.push(vec![a, v]);
                self.cnf.clauses.push(vec![b.negate(), v]);
                v
            }
            Formula::Iff(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                let v = Lit::pos(self.fresh());
                self.cnf.clauses.push(vec![v.negate(), a.negate(), b]);
                self.cnf.clauses.push(vec![v.negate(), a, b.negate()]);
                self.cnf.clauses.push(vec![v, a, b]);
                self.cnf.clauses.push(vec![v, a.negate(), b.negate()]);
                v
            }
        }
    }

    /// Adds `f` as a constraint that must hold.
    pub fn assert(&mut self, f: &Formula) {
        let root = self.encode(f);
        self.cnf.clauses.push(vec![root]);
    }

    pub fn finish(self) -> Cnf {
        self.cnf
    }
}

/// Clausifies the conjunction of `formulas`.
pub fn clausify<'a>(formulas: impl IntoIterator<Item = &'a Formula> + Clone) -> Cnf {
    let mut enc = Encoder::new(formulas.clone());
    for f in formulas {
        enc.assert(f);
    }
    enc.finish()
}
