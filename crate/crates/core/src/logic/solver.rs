//! DPLL search with unit propagation, and the satisfiability and entailment
//! checks built on it.

use super::cnf::{clausify, Cnf, Lit};
use super::formula::{Formula, Valuation};

#[derive(Debug, Clone, Copy)]
struct TrailEntry {
    var: usize,
    /// Decision that has not yet been tried with the opposite value.
    open_decision: bool,
}

enum Propagation {
    Fixpoint,
    Conflict,
}

struct Dpll<'a> {
    cnf: &'a Cnf,
    values: Vec<Option<bool>>,
    trail: Vec<TrailEntry>,
}

impl<'a> Dpll<'a> {
    fn new(cnf: &'a Cnf) -> Self {
        Dpll {
            cnf,
            values: vec![None; cnf.num_vars],
            trail: Vec::new(),
        }
    }

    fn lit_value(&self, l: Lit) -> Option<bool> {
        self.values[l.var].map(|v| v == l.positive)
    }

    fn assign(&mut self, l: Lit, open_decision: bool) {
        self.values[l.var] = Some(l.positive);
        self.trail.push(TrailEntry {
            var: l.var,
            open_decision,
        });
    }

    fn propagate(&mut self) -> Propagation {
        loop {
            let mut changed = false;
            for clause in &self.cnf.clauses {
                let mut unassigned = None;
                let mut free = 0;
                let mut satisfied = false;
                for &l in clause {
                    match self.lit_value(l) {
                        Some(true) => {
                            satisfied = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            free += 1;
                            unassigned = Some(l);
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match (free, unassigned) {
                    (0, _) => return Propagation::Conflict,
                    (1, Some(l)) => {
                        self.values[l.var] = Some(l.positive);
                        self.trail.push(TrailEntry {
                            var: l.var,
                            open_decision: false,
                        });
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Propagation::Fixpoint;
            }
        }
    }

    /// First unassigned variable of some clause not yet satisfied.
    fn pick_branch(&self) -> Option<usize> {
        self.cnf
            .clauses
            .iter()
            .filter(|c| !c.iter().any(|&l| self.lit_value(l) == Some(true)))
            .flat_map(|c| c.iter())
            .filter(|l| self.values[l.var].is_none())
            .map(|l| l.var)
            .min()
    }

    /// Undoes assignments up to the most recent open decision and flips it.
    fn backtrack(&mut self) -> bool {
        while let Some(entry) = self.trail.pop() {
            let old = self.values[entry.var].take().expect("trail var assigned");
            if entry.open_decision {
                self.assign(
                    Lit {
                        var: entry.var,
                        positive: !old,
                    },
                    false,
                );
                return true;
            }
        }
        false
    }

    fn solve(mut self) -> Option<Vec<bool>> {
        loop {
            match self.propagate() {
                Propagation::Conflict => {
                    if !self.backtrack() {
                        return None;
                    }
                }
                Propagation::Fixpoint => match self.pick_branch() {
                    Some(var) => self.assign(Lit::pos(var), true),
                    // every clause satisfied; free variables are don't-cares
                    None => return Some(self.values.iter().map(|v| v.unwrap_or(false)).collect()),
                },
            }
        }
    }
}

/// Exact CNF satisfiability; returns a total assignment on success.
pub fn solve_cnf(cnf: &Cnf) -> Option<Vec<bool>> {
    Dpll::new(cnf).solve()
}

fn source_model(cnf: &Cnf, values: &[bool]) -> Valuation {
    cnf.atoms
        .iter()
        .cloned()
        .zip(values.iter().copied())
        .collect()
}

/// Outcome of a satisfiability check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub satisfiable: bool,
    /// Assignment to the atoms of the input, present iff satisfiable.
    pub model: Option<Valuation>,
}

/// Decides whether some assignment satisfies every formula in `formulas`.
/// The empty set is satisfiable with the empty model.
pub fn is_satisfiable<'a, I>(formulas: I) -> SatResult
where
    I: IntoIterator<Item = &'a Formula>,
{
    let formulas: Vec<&Formula> = formulas.into_iter().collect();
    let cnf = clausify(formulas.iter().copied());
    match solve_cnf(&cnf) {
        Some(values) => SatResult {
            satisfiable: true,
            model: Some(source_model(&cnf, &values)),
        },
        None => SatResult {
            satisfiable: false,
            model: None,
        },
    }
}

/// Outcome of an entailment check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entailment {
    pub holds: bool,
    /// Position (in input order) of the first conclusion that does not follow.
    pub failing: Option<usize>,
    /// Satisfies every premise and falsifies the failing conclusion.
    pub countermodel: Option<Valuation>,
}

/// Refutation-based entailment: every conclusion `c` must make
/// `premises ∪ {¬c}` unsatisfiable. An empty conclusion list holds trivially.
pub fn entails<'a, P, C>(premises: P, conclusions: C) -> Entailment
where
    P: IntoIterator<Item = &'a Formula>,
    C: IntoIterator<Item = &'a Formula>,
{
    let premises: Vec<&Formula> = premises.into_iter().collect();
    for (i, c) in conclusions.into_iter().enumerate() {
        let negated = Formula::not(c.clone());
        let result = is_satisfiable(premises.iter().copied().chain(std::iter::once(&negated)));
        if result.satisfiable {
            return Entailment {
                holds: false,
                failing: Some(i),
                countermodel: result.model,
            };
        }
    }
    Entailment {
        holds: true,
        failing: None,
        countermodel: None,
    }
}
