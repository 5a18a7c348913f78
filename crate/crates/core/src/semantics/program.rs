//! Least fixed points by Kleene iteration.

use std::collections::HashMap;

use super::{eval, table_len, tuple_at, tuple_index, Env, FiniteStructure, PartialValue};
use crate::error::{Error, Result};
use crate::syntax::{FnVar, IndVar, Program};

/// One stage of the iteration: a partial table for every recursion variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnTables {
    carrier: usize,
    index: HashMap<FnVar, usize>,
    tables: Vec<Vec<PartialValue>>,
}

impl FnTables {
    fn empty(carrier: usize, p: &Program) -> Result<Self> {
        let mut index = HashMap::new();
        let mut tables = Vec::new();
        for (i, eq) in p.equations.iter().enumerate() {
            index.insert(eq.var, i);
            tables.push(vec![None; table_len(carrier, eq.var.arity as usize)?]);
        }
        Ok(FnTables {
            carrier,
            index,
            tables,
        })
    }

    pub fn get(&self, p: FnVar, args: &[usize]) -> PartialValue {
        self.index
            .get(&p)
            .and_then(|&i| self.tables[i][tuple_index(self.carrier, args)])
    }

    /// Every defined entry of `other` is defined with the same value here.
    pub fn extends(&self, other: &FnTables) -> bool {
        self.tables.iter().zip(&other.tables).all(|(a, b)| {
            a.iter()
                .zip(b)
                .all(|(x, y)| y.is_none() || x == y)
        })
    }

    pub fn defined_entries(&self) -> usize {
        self.tables.iter().flatten().filter(|v| v.is_some()).count()
    }

    pub fn capacity(&self) -> usize {
        self.tables.iter().map(Vec::len).sum()
    }
}

struct StageEnv<'a> {
    tables: &'a FnTables,
    ind: Vec<(IndVar, usize)>,
}

impl Env for StageEnv<'_> {
    fn ind(&self, v: IndVar) -> Result<usize> {
        self.ind
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, x)| *x)
            .ok_or_else(|| Error::UnboundVariable(format!("v{}", v.0)))
    }

    fn call(&mut self, p: FnVar, args: &[usize]) -> Result<PartialValue> {
        if !self.tables.index.contains_key(&p) {
            return Err(Error::FreeFunctionVariable(format!("p{}", p.index)));
        }
        Ok(self.tables.get(p, args))
    }
}

fn next_stage(a: &FiniteStructure, p: &Program, cur: &FnTables) -> Result<FnTables> {
    let mut next = cur.clone();
    for (i, eq) in p.equations.iter().enumerate() {
        for (k, slot) in next.tables[i].iter_mut().enumerate() {
            let tuple = tuple_at(a.carrier(), eq.params.len(), k);
            let mut env = StageEnv {
                tables: cur,
                ind: eq.params.iter().copied().zip(tuple).collect(),
            };
            *slot = eval(a, &mut env, &eq.body)?;
        }
    }
    Ok(next)
}

/// All Kleene stages from the everywhere-divergent tables up to the first repeated stage.
pub fn kleene_stages(a: &FiniteStructure, p: &Program) -> Result<Vec<FnTables>> {
    let mut stages = vec![FnTables::empty(a.carrier(), p)?];
    let bound = stages[0].capacity() + 1;
    loop {
        let cur = stages.last().unwrap();
        let next = next_stage(a, p, cur)?;
        if next == *cur {
            return Ok(stages);
        }
        stages.push(next);
        if stages.len() > bound + 1 {
            return Err(Error::GuardExceeded("Kleene iteration did not stabilize".into()));
        }
    }
}

fn least_fixed_point(a: &FiniteStructure, p: &Program) -> Result<FnTables> {
    let mut cur = FnTables::empty(a.carrier(), p)?;
    loop {
        let next = next_stage(a, p, &cur)?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}

pub fn denote_program(a: &FiniteStructure, p: &Program, args: &[usize]) -> Result<PartialValue> {
    if args.len() != p.free_vars.len() {
        return Err(Error::ArityMismatch {
            name: "program input".into(),
            expected: p.free_vars.len(),
            found: args.len(),
        });
    }
    if let Some(&x) = args.iter().find(|&&x| x >= a.carrier()) {
        return Err(Error::SortMismatch(format!("{x} is not in the carrier")));
    }
    let tables = least_fixed_point(a, p)?;
    let mut env = StageEnv {
        tables: &tables,
        ind: p.free_vars.iter().copied().zip(args.iter().copied()).collect(),
    };
    eval(a, &mut env, &p.head)
}
