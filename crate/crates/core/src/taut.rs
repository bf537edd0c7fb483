//! Classical validity after abstracting modal subformulas.
//!
//! Every maximal subformula whose head is an atom, `K`, `E` or `C` becomes
//! a propositional variable (syntactically equal subformulas share one
//! variable). The remaining `⊥`/`⇒` skeleton is decided exactly by
//! case splitting with three-valued simplification.

use std::collections::HashMap;

use crate::error::Error;
use crate::formula::Formula;

/// Hard cap on the number of abstract variables.
pub const MAX_TAUT_VARS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Skeleton {
    Var(usize),
    False,
    Implies(Box<Skeleton>, Box<Skeleton>),
}

impl Skeleton {
    pub fn eval(&self, assignment: &[bool]) -> bool {
        match self {
            Skeleton::Var(v) => assignment[*v],
            Skeleton::False => false,
            Skeleton::Implies(a, b) => !a.eval(assignment) || b.eval(assignment),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Abstraction {
    pub skeleton: Skeleton,
    /// `mapping[v]` is the subformula abstracted as variable `v`.
    pub mapping: Vec<Formula>,
}

impl Abstraction {
    pub fn num_vars(&self) -> usize {
        self.mapping.len()
    }

    /// Substitutes the mapping back into the skeleton.
    pub fn concretize(&self) -> Formula {
        fn go(s: &Skeleton, m: &[Formula]) -> Formula {
            match s {
                Skeleton::Var(v) => m[*v].clone(),
                Skeleton::False => Formula::False,
                Skeleton::Implies(a, b) => Formula::implies(go(a, m), go(b, m)),
            }
        }
        go(&self.skeleton, &self.mapping)
    }
}

pub fn abstract_modal(f: &Formula) -> Abstraction {
    fn go(
        f: &Formula,
        index: &mut HashMap<Formula, usize>,
        mapping: &mut Vec<Formula>,
    ) -> Skeleton {
        match f {
            Formula::False => Skeleton::False,
            Formula::Implies(a, b) => Skeleton::Implies(
                Box::new(go(a, index, mapping)),
                Box::new(go(b, index, mapping)),
            ),
            _ => {
                let next = mapping.len();
                let v = *index.entry(f.clone()).or_insert(next);
                if v == next {
                    mapping.push(f.clone());
                }
                Skeleton::Var(v)
            }
        }
    }
    let mut index = HashMap::new();
    let mut mapping = Vec::new();
    let skeleton = go(f, &mut index, &mut mapping);
    Abstraction { skeleton, mapping }
}

fn eval3(s: &Skeleton, assignment: &[Option<bool>]) -> Option<bool> {
    match s {
        Skeleton::Var(v) => assignment[*v],
        Skeleton::False => Some(false),
        Skeleton::Implies(a, b) => match (eval3(a, assignment), eval3(b, assignment)) {
            (Some(false), _) | (_, Some(true)) => Some(true),
            (Some(true), Some(false)) => Some(false),
            _ => None,
        },
    }
}

fn first_unassigned(s: &Skeleton, assignment: &[Option<bool>]) -> Option<usize> {
    match s {
        Skeleton::Var(v) => assignment[*v].is_none().then_some(*v),
        Skeleton::False => None,
        Skeleton::Implies(a, b) => {
            // Only descend where the value is still open.
            if eval3(a, assignment).is_none() {
                first_unassigned(a, assignment)
            } else {
                first_unassigned(b, assignment)
            }
        }
    }
}

fn valid_under(s: &Skeleton, assignment: &mut [Option<bool>]) -> bool {
    match eval3(s, assignment) {
        Some(v) => v,
        None => {
            let v = first_unassigned(s, assignment).expect("open skeleton has an open variable");
            let mut ok = true;
            for value in [true, false] {
                assignment[v] = Some(value);
                if !valid_under(s, assignment) {
                    ok = false;
                    break;
                }
            }
            assignment[v] = None;
            ok
        }
    }
}

/// Exact classical validity of the abstracted skeleton of `f`.
pub fn is_tautology(f: &Formula) -> Result<bool, Error> {
    let abs = abstract_modal(f);
    if abs.num_vars() > MAX_TAUT_VARS {
        return Err(Error::TautologyTooLarge {
            vars: abs.num_vars(),
            limit: MAX_TAUT_VARS,
        });
    }
    let mut assignment = vec![None; abs.num_vars()];
    Ok(valid_under(&abs.skeleton, &mut assignment))
}
