//! Exact validity of identities on a finite structure by exhaustive enumeration.
//!
//! Individual variables range over the carrier. A function variable's table is
//! only branched on at the entries the evaluation actually reads, which
//! enumerates every distinguishable assignment exactly once.

use std::collections::HashMap;

use log::warn;

use super::{eval, Assignment, Env, FiniteStructure, PartialValue, Value};
use crate::error::{Error, Result};
use crate::syntax::{FnVar, IndVar, Sort, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_assignments: u64,
    pub max_carrier: usize,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            max_assignments: 10_000_000,
            max_carrier: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Satisfaction {
    pub holds: bool,
    /// No injective assignment exists, so `holds` is vacuous.
    pub vacuous: bool,
}

struct Choice {
    key: (FnVar, Vec<usize>),
    pick: usize,
    options: usize,
}

struct LazyEnv<'a> {
    carrier: usize,
    ind: &'a [(IndVar, usize)],
    decisions: &'a mut Vec<Choice>,
    replay: usize,
    memo: HashMap<(FnVar, Vec<usize>), PartialValue>,
}

fn option(sort: Sort, k: usize) -> PartialValue {
    match (sort, k) {
        (_, 0) => None,
        (Sort::Ind, k) => Some(Value::Ind(k - 1)),
        (Sort::Bool, k) => Some(Value::Bool(k == 1)),
    }
}

impl Env for LazyEnv<'_> {
    fn ind(&self, v: IndVar) -> Result<usize> {
        self.ind
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, x)| *x)
            .ok_or_else(|| Error::UnboundVariable(format!("v{}", v.0)))
    }

    fn call(&mut self, p: FnVar, args: &[usize]) -> Result<PartialValue> {
        let key = (p, args.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return Ok(*v);
        }
        let pick = if self.replay < self.decisions.len() {
            let c = &self.decisions[self.replay];
            debug_assert!(c.key == key);
            self.replay += 1;
            c.pick
        } else {
            let options = match p.sort {
                Sort::Ind => self.carrier + 1,
                Sort::Bool => 3,
            };
            self.decisions.push(Choice {
                key: key.clone(),
                pick: 0,
                options,
            });
            self.replay += 1;
            0
        };
        let v = option(p.sort, pick);
        self.memo.insert(key, v);
        Ok(v)
    }
}

/// Individual variables occurring directly as arguments of a symbol at the root of either side.
pub(crate) fn placed_in(lhs: &Term, rhs: &Term) -> Vec<IndVar> {
    let mut out = Vec::new();
    for side in [lhs, rhs] {
        if let Term::Sym(_, args) = side {
            for a in args {
                if let Term::Var(v) = a {
                    if !out.contains(v) {
                        out.push(*v);
                    }
                }
            }
        }
    }
    out
}

fn all_vars(lhs: &Term, rhs: &Term) -> Vec<IndVar> {
    let mut vars = lhs.ind_vars();
    for v in rhs.ind_vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars
}

/// An assignment under which the two sides are not Kleene-equal, if one exists.
/// With `injective`, placed variables receive pairwise distinct values.
pub fn find_countermodel(
    a: &FiniteStructure,
    lhs: &Term,
    rhs: &Term,
    injective: bool,
    guard: Guard,
) -> Result<Option<Assignment>> {
    if lhs.check()? != rhs.check()? {
        return Err(Error::SortMismatch(format!("`{lhs}` and `{rhs}` differ in sort")));
    }
    let vars = all_vars(lhs, rhs);
    let placed: Vec<usize> = if injective {
        placed_in(lhs, rhs)
            .iter()
            .map(|v| vars.iter().position(|w| w == v).unwrap())
            .collect()
    } else {
        Vec::new()
    };
    let n = a.carrier();
    if n > guard.max_carrier {
        return Err(Error::CarrierTooLargeForEnumeration {
            bound: guard.max_carrier as u64,
        });
    }
    let too_many = Error::CarrierTooLargeForEnumeration {
        bound: guard.max_assignments,
    };
    let tuples = (n as u64)
        .checked_pow(vars.len() as u32)
        .filter(|&t| t <= guard.max_assignments)
        .ok_or_else(|| too_many.clone())?;
    let mut leaves = 0u64;
    let mut decisions = Vec::new();
    for t in 0..tuples {
        let values = super::tuple_at(n, vars.len(), t as usize);
        if placed
            .iter()
            .enumerate()
            .any(|(i, &x)| placed[..i].iter().any(|&y| values[x] == values[y]))
        {
            continue;
        }
        let ind: Vec<(IndVar, usize)> = vars.iter().copied().zip(values).collect();
        decisions.clear();
        loop {
            leaves += 1;
            if leaves > guard.max_assignments {
                return Err(too_many);
            }
            let mut env = LazyEnv {
                carrier: n,
                ind: &ind,
                decisions: &mut decisions,
                replay: 0,
                memo: HashMap::new(),
            };
            let l = eval(a, &mut env, lhs)?;
            let r = eval(a, &mut env, rhs)?;
            if l != r {
                let mut sigma = Assignment {
                    ind: ind.iter().copied().collect(),
                    fns: HashMap::new(),
                };
                for p in lhs.fn_vars().into_iter().chain(rhs.fn_vars()) {
                    sigma.fns.entry(p).or_default();
                }
                for ((p, args), v) in env.memo {
                    if let Some(v) = v {
                        sigma.fns.entry(p).or_default().insert(args, v);
                    }
                }
                return Ok(Some(sigma));
            }
            loop {
                match decisions.last_mut() {
                    None => break,
                    Some(c) if c.pick + 1 < c.options => {
                        c.pick += 1;
                        break;
                    }
                    Some(_) => {
                        decisions.pop();
                    }
                }
            }
            if decisions.is_empty() {
                break;
            }
        }
    }
    Ok(None)
}

/// `A ⊨ lhs = rhs`.
pub fn satisfies(a: &FiniteStructure, lhs: &Term, rhs: &Term, guard: Guard) -> Result<bool> {
    Ok(find_countermodel(a, lhs, rhs, false, guard)?.is_none())
}

/// Validity over assignments that keep the placed variables pairwise distinct.
pub fn satisfies_injective(
    a: &FiniteStructure,
    lhs: &Term,
    rhs: &Term,
    guard: Guard,
) -> Result<Satisfaction> {
    let placed = placed_in(lhs, rhs).len();
    let vacuous = a.carrier() < placed;
    if vacuous {
        warn!(
            "carrier of `{}` has {} elements but the identity places {} variables; injective validity holds vacuously",
            a.name,
            a.carrier(),
            placed
        );
    }
    let holds = find_countermodel(a, lhs, rhs, true, guard)?.is_none();
    Ok(Satisfaction { holds, vacuous })
}
